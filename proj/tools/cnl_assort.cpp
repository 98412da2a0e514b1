// cnl-assort: generate, discretize, reformulate and solve constrained
// assortment problems under the cross-nested logit model.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cnl/bench.hpp"
#include "cnl/discretize.hpp"
#include "cnl/errors.hpp"
#include "cnl/generate.hpp"
#include "cnl/io.hpp"
#include "cnl/milp.hpp"
#include "cnl/rng.hpp"
#include "cnl/solve.hpp"

namespace {

using namespace cnl;

double resolve_eps(double eps, double guarantee) {
    if (eps > 0.0) return eps;
    if (guarantee > 0.0) {
        if (guarantee >= 1.0) throw InputError("guarantee must lie in (0, 1)");
        return (1.0 - guarantee) / (1.0 + guarantee);
    }
    return 0.05;
}

void emit(const std::string& out_path, const std::string& content) {
    if (out_path.empty() || out_path == "-")
        std::cout << content;
    else
        write_text_file(out_path, content);
}

int cmd_gen(const GenSpec& spec, const std::string& out_path) {
    InstanceBundle bundle = generate(spec);
    std::string text = to_json_text(bundle);
    if (out_path.empty() || out_path == "-")
        std::cout << text;
    else
        write_text_file(out_path, text);
    return 0;
}

int cmd_discretize(const std::string& instance_path, double sigma, double lo, double hi,
                   double eps, double guarantee, bool csv, const std::string& out_path) {
    eps = resolve_eps(eps, guarantee);
    struct Line {
        std::string label;
        double sigma, lo, hi;
    };
    std::vector<Line> lines;
    if (!instance_path.empty()) {
        InstanceBundle bundle = load_instance(instance_path);
        NestBounds nb = nest_weight_bounds(bundle.base, bundle.constraints);
        for (int n = 0; n < bundle.base.N; ++n)
            lines.push_back({"nest_" + std::to_string(n + 1), bundle.base.sigma[n], nb.lower[n],
                             nb.upper[n]});
    } else {
        lines.push_back({"interval", sigma, lo, hi});
    }
    std::ostringstream out;
    if (csv)
        out << "name,sigma,L,U,eps,K,lower_bound,upper_bound,breakpoints\n";
    for (const Line& line : lines) {
        PiecewiseApprox pw = discretize_interval(line.sigma, line.lo, line.hi, eps);
        KnBounds kb = kn_bounds(line.sigma, line.lo, line.hi, eps);
        std::string upper = kb.upper > 0 ? std::to_string(kb.upper) : "-";
        if (csv) {
            out << line.label << "," << line.sigma << "," << line.lo << "," << line.hi << ","
                << eps << "," << pw.K() << "," << kb.lower << "," << upper << ",";
            for (std::size_t i = 0; i < pw.c.size(); ++i) out << (i ? ";" : "") << pw.c[i];
            out << "\n";
        } else {
            out << line.label << ": sigma=" << line.sigma << " L=" << line.lo << " U=" << line.hi
                << " eps=" << eps << " K=" << pw.K() << " bound=[" << kb.lower << ", " << upper
                << "]\n  breakpoints:";
            for (double c : pw.c) out << " " << c;
            out << "\n";
        }
    }
    emit(out_path, out.str());
    return 0;
}

int cmd_build_milp(const std::string& instance_path, double eps, double guarantee,
                   double feasibility_lambda, const std::string& out_path) {
    eps = resolve_eps(eps, guarantee);
    InstanceBundle bundle = load_instance(instance_path);
    MilpModel model;
    if (feasibility_lambda >= 0.0) {
        LfpCoefficients coeffs = build_lfp(bundle.base, bundle.constraints, eps);
        model = build_feasibility_model(coeffs, bundle.constraints, feasibility_lambda);
    } else if (bundle.pricing) {
        model = build_anp_milp(*bundle.pricing, bundle.constraints, eps);
    } else if (bundle.mixture) {
        model = build_mixture_milp(*bundle.mixture, bundle.constraints, eps);
    } else {
        LfpCoefficients coeffs = build_lfp(bundle.base, bundle.constraints, eps);
        model = build_assort_milp(coeffs, bundle.constraints);
    }
    std::string lp_path = out_path.empty() ? "model.lp" : out_path;
    write_text_file(lp_path, emit_lp(model));
    std::string meta_path = lp_path;
    std::size_t dot = meta_path.rfind('.');
    meta_path = (dot == std::string::npos ? meta_path : meta_path.substr(0, dot)) + ".json";
    write_text_file(meta_path, model_metadata_json(model));
    std::cout << "wrote " << lp_path << " (" << model.vars.size() << " vars, "
              << model.binary_count() << " binaries, " << model.rows.size() << " rows) and "
              << meta_path << "\n";
    return 0;
}

void print_report(const SolveReport& report, bool csv) {
    if (csv) {
        std::printf("method,F,F_hat,iterations,nodes,wall_ms,guarantee\n");
        std::printf("%s,%.12g,%.12g,%d,%llu,%.3f,%.6f\n", method_name(report.method),
                    report.objective_exact, report.objective_approx, report.iterations,
                    static_cast<unsigned long long>(report.node_count), report.wall_ms,
                    report.guarantee);
        return;
    }
    std::printf("method     : %s\n", method_name(report.method));
    std::printf("F(best)    : %.10g\n", report.objective_exact);
    if (std::isfinite(report.objective_approx))
        std::printf("Fhat(best) : %.10g\n", report.objective_approx);
    std::printf("offer      :");
    for (std::size_t i = 0; i < report.best.size(); ++i)
        if (report.best[i]) std::printf(" %zu", i + 1);
    std::printf("\n");
    if (report.iterations > 0) std::printf("iterations : %d\n", report.iterations);
    std::printf("nodes      : %llu\n", static_cast<unsigned long long>(report.node_count));
    std::printf("guarantee  : %.6f\n", report.guarantee);
    std::printf("wall       : %.2f ms\n", report.wall_ms);
}

int cmd_solve(const std::string& instance_path, const std::string& method, double eps,
              double guarantee, double delta, const std::string& solution_path, bool csv) {
    InstanceBundle bundle = load_instance(instance_path);
    const Instance& inst = bundle.base;
    const ConstraintSet& cs = bundle.constraints;
    SolveReport report;

    if (method == "bruteforce") {
        if (bundle.pricing)
            report = search_exact_pricing(*bundle.pricing, cs);
        else if (bundle.mixture)
            report = search_exact_mixture(*bundle.mixture, cs);
        else
            report = search_exact(inst, cs);
    } else if (method == "approx") {
        double e = resolve_eps(eps, guarantee);
        if (bundle.pricing) {
            PricingLfp plfp = build_pricing_lfp(*bundle.pricing, cs, e);
            report = search_exact_pricing_approx(*bundle.pricing, plfp);
        } else if (bundle.mixture) {
            MixtureLfp mlfp = build_mixture_lfp(*bundle.mixture, cs, e);
            report = search_exact_mixture_approx(*bundle.mixture, mlfp, cs);
        } else {
            LfpCoefficients coeffs = build_lfp(inst, cs, e);
            report = search_exact_approx(inst, coeffs, cs);
        }
    } else if (method == "bisection") {
        if (bundle.pricing || bundle.mixture)
            throw InputError("bisection applies to the plain assortment variant");
        double e = resolve_eps(eps, guarantee);
        LfpCoefficients coeffs = build_lfp(inst, cs, e);
        report = bisection_solve(inst, coeffs, cs, delta);
    } else if (method == "external") {
        if (solution_path.empty()) throw InputError("--method external requires --solution FILE");
        if (bundle.pricing || bundle.mixture)
            throw InputError("external ingestion covers the plain assortment variant");
        double e = resolve_eps(eps, guarantee);
        LfpCoefficients coeffs = build_lfp(inst, cs, e);
        MilpModel model = build_assort_milp(coeffs, cs);
        ExternalResult ext =
            solve_external(inst, cs, coeffs, model, read_text_file(solution_path));
        if (ext.discrepancy)
            std::fprintf(stderr,
                         "warning: solver-reported objective %.10g differs from recomputed %.10g\n",
                         ext.reported_objective, ext.report.objective_approx);
        report = ext.report;
    } else {
        throw InputError("unknown method: " + method);
    }
    print_report(report, csv);
    return 0;
}

int cmd_bench(std::uint64_t seed, int count, std::vector<int> ms, std::vector<int> ns,
              double sigma_bar, std::vector<int> guarantees, double delta, int jobs,
              const std::string& out_path, bool csv_to_stdout) {
    std::vector<GenSpec> batch;
    int made = 0;
    for (int c = 0; made < count; ++c) {
        for (int m : ms)
            for (int n : ns) {
                if (made >= count) break;
                GenSpec spec;
                spec.seed = seed + static_cast<std::uint64_t>(made);
                spec.m = m;
                spec.N = n;
                spec.sigma_bar = sigma_bar;
                batch.push_back(spec);
                ++made;
            }
    }
    BenchResult result = bench_guarantees(batch, guarantees, delta, jobs);
    std::string csv = bench_csv(result);
    if (!out_path.empty()) write_text_file(out_path, csv);
    if (csv_to_stdout || out_path.empty()) std::cout << csv;
    double worst = 0.0, mean = 0.0;
    int at90 = 0;
    for (const BenchRow& row : result.rows) {
        if (row.guarantee == 90 && row.method == "bruteforce_approx") {
            mean += row.gap_pct;
            worst = std::max(worst, row.gap_pct);
            ++at90;
        }
    }
    if (at90 > 0)
        std::fprintf(stderr, "90%% guarantee: mean gap %.4f%%, worst %.4f%% over %d instances\n",
                     mean / at90, worst, at90);
    if (result.certificate_violations > 0) {
        std::fprintf(stderr, "certificate violations: %d\n", result.certificate_violations);
        return 2;
    }
    return 0;
}

int cmd_verify(const std::string& instance_path) {
    InstanceBundle bundle = load_instance(instance_path);
    const Instance& inst = bundle.base;
    const ConstraintSet& cs = bundle.constraints;
    int failures = 0;
    auto check = [&](bool ok, const std::string& what) {
        std::printf("[%s] %s\n", ok ? "ok" : "FAIL", what.c_str());
        if (!ok) ++failures;
    };

    Rng rng(20240901);
    Evaluator eval(inst);
    double worst_norm = 0.0, worst_rev = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        BitVec x(static_cast<std::size_t>(inst.m), 0);
        for (int i = 0; i < inst.m; ++i) x[i] = rng.uniform01() < 0.5 ? 1 : 0;
        Probabilities probs = eval.choice_probabilities(Assortment{x});
        double total = probs.no_purchase;
        double rev = 0.0;
        for (int i = 0; i < inst.m; ++i) {
            total += probs.per_product[i];
            rev += inst.r[i] * probs.per_product[i];
        }
        worst_norm = std::max(worst_norm, std::abs(total - 1.0));
        worst_rev = std::max(worst_rev,
                             std::abs(rev - eval.expected_revenue(Assortment{x})));
    }
    check(worst_norm <= 1e-9, "probability normalization within 1e-9");
    check(worst_rev <= 1e-12, "expected revenue equals sum r_i P_i within 1e-12");

    NestBounds nb = nest_weight_bounds(inst, cs);
    bool bounds_ok = true;
    for (int trial = 0; trial < 200; ++trial) {
        BitVec x(static_cast<std::size_t>(inst.m), 0);
        for (int i = 0; i < inst.m; ++i) x[i] = rng.uniform01() < 0.5 ? 1 : 0;
        if (!is_feasible(cs, x)) continue;
        std::vector<double> w = eval.nest_weights(Assortment{x});
        for (int n = 0; n < inst.N; ++n)
            bounds_ok = bounds_ok && w[n] >= nb.lower[n] - 1e-9 && w[n] <= nb.upper[n] + 1e-9;
    }
    check(bounds_ok, "nest weight bounds valid on sampled feasible assortments");

    bool lfp_ok = true;
    std::string lfp_msg = "approximation sandwich F <= Fhat <= (1+eps)/(1-eps) F";
    try {
        LfpCoefficients coeffs = build_lfp(inst, cs, 0.05);
        for (int trial = 0; trial < 100; ++trial) {
            BitVec x(static_cast<std::size_t>(inst.m), 0);
            for (int i = 0; i < inst.m; ++i) x[i] = rng.uniform01() < 0.5 ? 1 : 0;
            if (!is_feasible(cs, x)) continue;
            double f = eval.expected_revenue(Assortment{x});
            double fh = approx_objective(coeffs, x);
            if (inst.standard_regime())
                lfp_ok = lfp_ok && fh >= f - 1e-9 && fh <= (1.05 / 0.95) * f + 1e-9;
            else
                lfp_ok = lfp_ok && fh >= (0.95 / 1.05) * f - 1e-9 && fh <= (1.05 / 0.95) * f + 1e-9;
        }
    } catch (const InputError& e) {
        lfp_msg += std::string(" (skipped: ") + e.what() + ")";
    }
    check(lfp_ok, lfp_msg);

    Assortment all = Assortment::all(inst.m);
    BitVec probe = all.x;
    if (!is_feasible(cs, probe)) probe.assign(static_cast<std::size_t>(inst.m), 0);
    std::vector<std::uint64_t> counts =
        simulate_choice_counts(inst, Assortment{probe}, 200000, 7);
    Probabilities probs = eval.choice_probabilities(Assortment{probe});
    double worst_z = 0.0;
    for (int i = 0; i <= inst.m; ++i) {
        double p = i < inst.m ? probs.per_product[i] : probs.no_purchase;
        double se = std::sqrt(std::max(p * (1.0 - p), 1e-12) / 200000.0);
        double phat = static_cast<double>(counts[i]) / 200000.0;
        worst_z = std::max(worst_z, std::abs(phat - p) / se);
    }
    check(worst_z <= 4.0, "Monte Carlo consistency (two-stage sampler, 2e5 draws)");

    return failures == 0 ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"constrained assortment optimization under the cross-nested logit model"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "generate a random instance file");
    GenSpec spec;
    std::string variant = "assort";
    std::string out_path;
    gen->add_option("--seed", spec.seed, "generator seed");
    gen->add_option("--m", spec.m, "product count");
    gen->add_option("--n", spec.N, "nest count");
    gen->add_option("--sigma-bar", spec.sigma_bar, "upper end of the sigma range");
    gen->add_option("--gamma", spec.gamma_overlap, "average nests per product");
    gen->add_option("--variant", variant, "assort|pricing|mixture");
    gen->add_option("--levels", spec.levels, "price levels (pricing)");
    gen->add_option("--types", spec.types, "customer types (mixture)");
    gen->add_option("--out", out_path, "output path (default stdout)");

    // discretize
    auto* disc = app.add_subcommand("discretize", "piecewise-linear segment table");
    std::string disc_instance;
    double disc_sigma = 0.5, disc_lo = 1.0, disc_hi = 10.0, disc_eps = 0.0, disc_guar = 0.0;
    bool disc_csv = false;
    std::string disc_out;
    disc->add_option("--instance", disc_instance, "instance file (per-nest table)");
    disc->add_option("--sigma", disc_sigma, "dissimilarity parameter");
    disc->add_option("--lo", disc_lo, "interval lower end");
    disc->add_option("--hi", disc_hi, "interval upper end");
    auto* de = disc->add_option("--eps", disc_eps, "accuracy level");
    auto* dg = disc->add_option("--guarantee", disc_guar, "performance guarantee in (0,1)");
    de->excludes(dg);
    disc->add_flag("--csv", disc_csv, "machine-readable output");
    disc->add_option("--out", disc_out, "output path (default stdout)");

    // build-milp
    auto* build = app.add_subcommand("build-milp", "emit LP file plus metadata sidecar");
    std::string build_instance, build_out;
    double build_eps = 0.0, build_guar = 0.0, build_lambda = -1.0;
    build->add_option("--instance", build_instance, "instance file")->required();
    auto* be = build->add_option("--eps", build_eps, "accuracy level");
    auto* bg = build->add_option("--guarantee", build_guar, "performance guarantee in (0,1)");
    be->excludes(bg);
    build->add_option("--lambda", build_lambda,
                      "emit the Dinkelbach feasibility model at this lambda");
    build->add_option("--out", build_out, "LP output path (default model.lp)");

    // solve
    auto* solve = app.add_subcommand("solve", "solve an instance file");
    std::string solve_instance, solve_method = "bruteforce", solve_solution;
    double solve_eps = 0.0, solve_guar = 0.0, solve_delta = 0.001;
    bool solve_csv = false;
    solve->add_option("--instance", solve_instance, "instance file")->required();
    solve->add_option("--method", solve_method, "bruteforce|approx|bisection|external");
    auto* se = solve->add_option("--eps", solve_eps, "accuracy level");
    auto* sg = solve->add_option("--guarantee", solve_guar, "performance guarantee in (0,1)");
    se->excludes(sg);
    solve->add_option("--delta", solve_delta, "bisection tolerance");
    solve->add_option("--solution", solve_solution, "external solver solution file");
    solve->add_flag("--csv", solve_csv, "machine-readable output");

    // bench
    auto* bench = app.add_subcommand("bench", "guarantee sweep over random instances");
    std::uint64_t bench_seed = 1;
    int bench_count = 20, bench_jobs = 1;
    std::vector<int> bench_ms{8, 10, 12}, bench_ns{2, 3}, bench_guars{90, 95, 99};
    double bench_sigma_bar = 0.75, bench_delta = 0.001;
    std::string bench_out;
    bool bench_csv_stdout = false;
    bench->add_option("--seed", bench_seed, "base seed");
    bench->add_option("--count", bench_count, "number of instances");
    bench->add_option("--m", bench_ms, "product counts to cycle");
    bench->add_option("--n", bench_ns, "nest counts to cycle");
    bench->add_option("--sigma-bar", bench_sigma_bar, "upper end of the sigma range");
    bench->add_option("--guarantees", bench_guars, "guarantee percentages");
    bench->add_option("--delta", bench_delta, "bisection tolerance");
    bench->add_option("--jobs", bench_jobs, "parallel instances");
    bench->add_option("--out", bench_out, "CSV output path");
    bench->add_flag("--csv", bench_csv_stdout, "also print CSV to stdout");

    // table1
    auto* t1 = app.add_subcommand("table1", "discretization grid (sigma x U x eps)");
    bool t1_csv = false;
    std::string t1_out;
    t1->add_flag("--csv", t1_csv, "machine-readable output");
    t1->add_option("--out", t1_out, "output path (default stdout)");

    // verify
    auto* verify = app.add_subcommand("verify", "run the invariant suite on an instance");
    std::string verify_instance;
    verify->add_option("--instance", verify_instance, "instance file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            if (variant == "pricing") spec.variant = GenVariant::pricing;
            else if (variant == "mixture") spec.variant = GenVariant::mixture;
            else if (variant != "assort") throw InputError("unknown variant: " + variant);
            return cmd_gen(spec, out_path);
        }
        if (disc->parsed())
            return cmd_discretize(disc_instance, disc_sigma, disc_lo, disc_hi, disc_eps,
                                  disc_guar, disc_csv, disc_out);
        if (build->parsed())
            return cmd_build_milp(build_instance, build_eps, build_guar, build_lambda, build_out);
        if (solve->parsed())
            return cmd_solve(solve_instance, solve_method, solve_eps, solve_guar, solve_delta,
                             solve_solution, solve_csv);
        if (bench->parsed())
            return cmd_bench(bench_seed, bench_count, bench_ms, bench_ns, bench_sigma_bar,
                             bench_guars, bench_delta, bench_jobs, bench_out, bench_csv_stdout);
        if (t1->parsed()) {
            Table1 table = reproduce_table1();
            emit(t1_out, t1_csv ? table1_csv(table) : table1_text(table));
            return 0;
        }
        if (verify->parsed()) return cmd_verify(verify_instance);
    } catch (const CapExceeded& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const InputError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 1;
}
