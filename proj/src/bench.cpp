#include "cnl/bench.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <thread>

#include "cnl/discretize.hpp"
#include "cnl/errors.hpp"
#include "cnl/solve.hpp"

namespace cnl {

Table1 reproduce_table1() {
    Table1 table;
    table.cells.assign(table.epsilons.size(),
                       std::vector<int>(table.sigmas.size() * table.uppers.size(), 0));
    for (std::size_t e = 0; e < table.epsilons.size(); ++e)
        for (std::size_t s = 0; s < table.sigmas.size(); ++s)
            for (std::size_t u = 0; u < table.uppers.size(); ++u) {
                PiecewiseApprox pw =
                    discretize_interval(table.sigmas[s], 1.0, table.uppers[u], table.epsilons[e]);
                table.cells[e][s * table.uppers.size() + u] = pw.K();
            }
    return table;
}

std::string table1_text(const Table1& table) {
    std::ostringstream out;
    out << "sub-intervals generated per (sigma, U, eps), L = 1\n";
    out << "sigma     ";
    for (double s : table.sigmas)
        for (std::size_t u = 0; u < table.uppers.size(); ++u) {
            char buf[8];
            std::snprintf(buf, sizeof(buf), "%4.1f", s);
            out << buf;
        }
    out << "\nU         ";
    for (std::size_t s = 0; s < table.sigmas.size(); ++s)
        for (double u : table.uppers) {
            char buf[8];
            std::snprintf(buf, sizeof(buf), "%4.0f", u);
            out << buf;
        }
    out << "\n";
    for (std::size_t e = 0; e < table.epsilons.size(); ++e) {
        char head[32];
        std::snprintf(head, sizeof(head), "eps=%-6g", table.epsilons[e]);
        out << head;
        for (int k : table.cells[e]) {
            char buf[8];
            std::snprintf(buf, sizeof(buf), "%4d", k);
            out << buf;
        }
        out << "\n";
    }
    return out.str();
}

std::string table1_csv(const Table1& table) {
    std::ostringstream out;
    out << "sigma,U,eps,K\n";
    for (std::size_t e = 0; e < table.epsilons.size(); ++e)
        for (std::size_t s = 0; s < table.sigmas.size(); ++s)
            for (std::size_t u = 0; u < table.uppers.size(); ++u)
                out << table.sigmas[s] << "," << table.uppers[u] << "," << table.epsilons[e] << ","
                    << table.cells[e][s * table.uppers.size() + u] << "\n";
    return out.str();
}

double eps_for_guarantee_approx(int guarantee_pct) {
    switch (guarantee_pct) {
        case 90: return 0.0526;
        case 95: return 0.0256;
        case 99: return 0.005;
        default: break;
    }
    double g = guarantee_pct / 100.0;
    return (1.0 - g) / (1.0 + g);
}

double eps_for_guarantee_bisection(int guarantee_pct) {
    switch (guarantee_pct) {
        case 90: return 0.0521;
        case 95: return 0.0251;
        case 99: return 0.0045;
        default: break;
    }
    // keep a small slice of the factor for the bisection tolerance
    return 0.99 * eps_for_guarantee_approx(guarantee_pct);
}

namespace {

void bench_one(const GenSpec& spec, const std::vector<int>& guarantees, double delta,
               std::vector<BenchRow>& rows) {
    if (spec.variant != GenVariant::assort)
        throw InputError("guarantee bench covers the plain assortment variant");
    InstanceBundle bundle = generate_assortment(spec);
    const Instance& inst = bundle.base;
    const ConstraintSet& cs = bundle.constraints;
    SolveReport exact = search_exact(inst, cs);

    for (int g : guarantees) {
        for (int pass = 0; pass < 2; ++pass) {
            bool bis = pass == 1;
            double eps = bis ? eps_for_guarantee_bisection(g) : eps_for_guarantee_approx(g);
            LfpCoefficients coeffs = build_lfp(inst, cs, eps);
            SolveReport run = bis ? bisection_solve(inst, coeffs, cs, delta)
                                  : search_exact_approx(inst, coeffs, cs);
            BenchRow row;
            row.instance_id = spec.id();
            row.variant = "assort";
            row.m = inst.m;
            row.N = inst.N;
            row.guarantee = g;
            row.eps = eps;
            row.method = method_name(run.method);
            row.f_exact_opt = exact.objective_exact;
            row.f_returned = run.objective_exact;
            row.gap_pct = gap_percent(exact.objective_exact, run.objective_exact);
            row.k_total = coeffs.K_total();
            row.wall_ms = run.wall_ms;
            row.certificate_ok =
                run.objective_exact >= run.guarantee * exact.objective_exact - 1e-9;
            rows.push_back(std::move(row));
        }
    }
}

}  // namespace

BenchResult bench_guarantees(const std::vector<GenSpec>& batch, const std::vector<int>& guarantees,
                             double bisection_delta, int jobs) {
    BenchResult result;
    std::vector<std::vector<BenchRow>> per_instance(batch.size());
    if (jobs <= 1) {
        for (std::size_t i = 0; i < batch.size(); ++i)
            bench_one(batch[i], guarantees, bisection_delta, per_instance[i]);
    } else {
        std::vector<std::thread> pool;
        std::size_t stride = static_cast<std::size_t>(jobs);
        for (std::size_t lane = 0; lane < stride && lane < batch.size(); ++lane)
            pool.emplace_back([&, lane]() {
                for (std::size_t i = lane; i < batch.size(); i += stride)
                    bench_one(batch[i], guarantees, bisection_delta, per_instance[i]);
            });
        for (std::thread& th : pool) th.join();
    }
    for (std::vector<BenchRow>& rows : per_instance)
        for (BenchRow& row : rows) {
            if (!row.certificate_ok) ++result.certificate_violations;
            result.rows.push_back(std::move(row));
        }
    return result;
}

std::string bench_csv(const BenchResult& result) {
    std::ostringstream out;
    out << "instance_id,variant,m,N,guarantee,eps,method,F_exact_opt,F_returned,gap_pct,K_total,"
           "wall_ms\n";
    out.precision(12);
    for (const BenchRow& r : result.rows)
        out << r.instance_id << "," << r.variant << "," << r.m << "," << r.N << "," << r.guarantee
            << "," << r.eps << "," << r.method << "," << r.f_exact_opt << "," << r.f_returned
            << "," << r.gap_pct << "," << r.k_total << "," << r.wall_ms << "\n";
    return out.str();
}

}  // namespace cnl
