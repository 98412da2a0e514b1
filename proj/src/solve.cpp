#include "cnl/solve.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <sstream>

#include "cnl/errors.hpp"

namespace cnl {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

// Row state for pruning: committed LHS plus the most negative contribution
// still available from undecided positions. If even that exceeds rhs, no
// completion of the branch is feasible.
struct RowTracker {
    const ConstraintSet* cs;
    std::vector<double> lhs;
    std::vector<std::vector<double>> neg_tail;  // [row][depth]

    RowTracker(const ConstraintSet& set, int positions,
               const std::vector<std::vector<double>>& coeffs_by_position)
        : cs(&set), lhs(set.rows().size(), 0.0) {
        neg_tail.assign(set.rows().size(), std::vector<double>(positions + 1, 0.0));
        for (std::size_t r = 0; r < set.rows().size(); ++r)
            for (int d = positions - 1; d >= 0; --d)
                neg_tail[r][d] = neg_tail[r][d + 1] + std::min(0.0, coeffs_by_position[r][d]);
    }

    bool can_complete(int depth) const {
        for (std::size_t r = 0; r < lhs.size(); ++r)
            if (lhs[r] + neg_tail[r][depth] > cs->rows()[r].rhs + kFeasTol) return false;
        return true;
    }
};

int env_cap() {
    if (const char* env = std::getenv("CNL_ASSORT_CAP")) {
        int cap = std::atoi(env);
        if (cap > 0) return cap;
    }
    return 24;
}

// DFS over binary positions with row pruning. Choice::apply/undo mutate the
// objective state; Leaf is called on every feasible complete assignment.
template <class Apply, class Undo, class Leaf>
void dfs_binary(int m, RowTracker& rows, BitVec& x, std::uint64_t& nodes, Apply&& apply,
                Undo&& undo, Leaf&& leaf, int depth = 0) {
    if (depth == m) {
        ++nodes;
        leaf();
        return;
    }
    // x[depth] = 0
    x[depth] = 0;
    if (rows.can_complete(depth + 1))
        dfs_binary(m, rows, x, nodes, apply, undo, leaf, depth + 1);
    // x[depth] = 1
    x[depth] = 1;
    apply(depth);
    for (std::size_t r = 0; r < rows.lhs.size(); ++r)
        rows.lhs[r] += rows.cs->rows()[r].coeffs[depth];
    if (rows.can_complete(depth + 1))
        dfs_binary(m, rows, x, nodes, apply, undo, leaf, depth + 1);
    for (std::size_t r = 0; r < rows.lhs.size(); ++r)
        rows.lhs[r] -= rows.cs->rows()[r].coeffs[depth];
    undo(depth);
    x[depth] = 0;
}

std::vector<std::vector<double>> rows_by_position(const ConstraintSet& cs) {
    std::vector<std::vector<double>> out;
    for (const ConstraintRow& row : cs.rows()) out.push_back(row.coeffs);
    return out;
}

void check_cap(int decisions, const char* what) {
    if (decisions > search_cap())
        throw CapExceeded(std::string(what) + " needs " + std::to_string(decisions) +
                          " binary decisions, above the cap of " + std::to_string(search_cap()) +
                          "; emit the MILP and use an external solver");
}

// Piecewise chord evaluation from incremental nest state.
struct ApproxState {
    const LfpCoefficients* coeffs;
    std::vector<double> w;  // current nest weights
    std::vector<double> rmass;

    explicit ApproxState(const LfpCoefficients& c) : coeffs(&c), w(c.v0), rmass(c.N, 0.0) {}

    void apply(int i) {
        for (int n = 0; n < coeffs->N; ++n) {
            w[n] += coeffs->avcol[n][i];
            rmass[n] += coeffs->arv[n][i];
        }
    }
    void undo(int i) {
        for (int n = 0; n < coeffs->N; ++n) {
            w[n] -= coeffs->avcol[n][i];
            rmass[n] -= coeffs->arv[n][i];
        }
    }
    double numerator() const {
        double num = 0.0;
        for (int n = 0; n < coeffs->N; ++n) num += rmass[n] * coeffs->pw[n].fhat(w[n]);
        return num;
    }
    double denominator() const {
        double den = 0.0;
        for (int n = 0; n < coeffs->N; ++n) den += coeffs->pw[n].ghat(w[n]);
        return den;
    }
};

struct ExactState {
    const Instance* inst;
    std::vector<std::vector<double>> wcol, rcol;
    std::vector<double> w, rmass;

    explicit ExactState(const Instance& in) : inst(&in), w(in.v0), rmass(in.N, 0.0) {
        Evaluator eval(in);
        wcol.resize(in.N);
        rcol.resize(in.N);
        for (int n = 0; n < in.N; ++n) {
            wcol[n] = eval.weight_col(n);
            rcol[n] = eval.revenue_col(n);
        }
    }
    void apply(int i) {
        for (int n = 0; n < inst->N; ++n) {
            w[n] += wcol[n][i];
            rmass[n] += rcol[n][i];
        }
    }
    void undo(int i) {
        for (int n = 0; n < inst->N; ++n) {
            w[n] -= wcol[n][i];
            rmass[n] -= rcol[n][i];
        }
    }
    double value() const {
        double num = 0.0, den = 0.0;
        for (int n = 0; n < inst->N; ++n) {
            double ps = nest_pow(w[n], inst->sigma[n]);
            den += ps;
            if (w[n] > 0.0) num += ps / w[n] * rmass[n];
        }
        return den > 0.0 ? num / den : 0.0;
    }
};

double quiet_nan() { return std::numeric_limits<double>::quiet_NaN(); }

double regime_guarantee(const LfpCoefficients& coeffs) {
    bool general = false;
    for (const PiecewiseApprox& p : coeffs.pw) general = general || p.general_sigma;
    double base = (1.0 - coeffs.eps) / (1.0 + coeffs.eps);
    return general ? base * base : base;
}

}  // namespace

const char* method_name(Method method) {
    switch (method) {
        case Method::bruteforce_exact: return "bruteforce_exact";
        case Method::bruteforce_approx: return "bruteforce_approx";
        case Method::bisection: return "bisection";
        case Method::external_milp: return "external_milp";
    }
    return "?";
}

int search_cap() { return env_cap(); }

SolveReport search_exact(const Instance& inst, const ConstraintSet& cs) {
    inst.validate();
    check_cap(inst.m, "exact search");
    auto t0 = Clock::now();
    ExactState state(inst);
    RowTracker rows(cs, inst.m, rows_by_position(cs));
    BitVec x(static_cast<std::size_t>(inst.m), 0);
    SolveReport report;
    report.method = Method::bruteforce_exact;
    report.best = x;
    report.objective_exact = 0.0;
    report.objective_approx = quiet_nan();
    double best = -1.0;
    dfs_binary(
        inst.m, rows, x, report.node_count, [&](int i) { state.apply(i); },
        [&](int i) { state.undo(i); },
        [&]() {
            double val = state.value();
            if (val > best) {
                best = val;
                report.best = x;
            }
        });
    report.objective_exact = best < 0.0 ? 0.0 : best;
    report.wall_ms = ms_since(t0);
    return report;
}

SolveReport search_exact_approx(const Instance& inst, const LfpCoefficients& coeffs,
                                const ConstraintSet& cs) {
    check_cap(coeffs.m, "exact search of the approximate objective");
    auto t0 = Clock::now();
    ApproxState state(coeffs);
    RowTracker rows(cs, coeffs.m, rows_by_position(cs));
    BitVec x(static_cast<std::size_t>(coeffs.m), 0);
    SolveReport report;
    report.method = Method::bruteforce_approx;
    report.best = x;
    double best = -1.0;
    dfs_binary(
        coeffs.m, rows, x, report.node_count, [&](int i) { state.apply(i); },
        [&](int i) { state.undo(i); },
        [&]() {
            double val = state.numerator() / state.denominator();
            if (val > best) {
                best = val;
                report.best = x;
            }
        });
    report.objective_approx = approx_objective(coeffs, report.best);
    report.objective_exact = expected_revenue(inst, Assortment{report.best});
    report.guarantee = regime_guarantee(coeffs);
    report.wall_ms = ms_since(t0);
    return report;
}

DinkelbachBest search_dinkelbach(const LfpCoefficients& coeffs, const ConstraintSet& cs,
                                 double lambda) {
    check_cap(coeffs.m, "feasibility search");
    ApproxState state(coeffs);
    RowTracker rows(cs, coeffs.m, rows_by_position(cs));
    BitVec x(static_cast<std::size_t>(coeffs.m), 0);
    DinkelbachBest best;
    best.value = -std::numeric_limits<double>::infinity();
    dfs_binary(
        coeffs.m, rows, x, best.nodes, [&](int i) { state.apply(i); },
        [&](int i) { state.undo(i); },
        [&]() {
            double val = state.numerator() - lambda * state.denominator();
            if (val > best.value) {
                best.value = val;
                best.x = x;
            }
        });
    return best;
}

namespace {

// Pricing search: one decision per product among L+1 choices (skip or a price
// level). Lifted constraint rows have equal coefficients across the levels of
// a product, so the tracker works on the product-level indicator.
template <class State>
void dfs_pricing(int m, int L, RowTracker& rows, BitVec& flat, std::uint64_t& nodes, State& state,
                 const std::vector<std::vector<double>>& row_coeffs_by_product, double& best,
                 BitVec& best_flat, int depth = 0) {
    if (depth == m) {
        ++nodes;
        double val = state.value();
        if (val > best) {
            best = val;
            best_flat = flat;
        }
        return;
    }
    if (rows.can_complete(depth + 1))
        dfs_pricing(m, L, rows, flat, nodes, state, row_coeffs_by_product, best, best_flat,
                    depth + 1);
    for (int l = 0; l < L; ++l) {
        int j = depth * L + l;
        flat[j] = 1;
        state.apply(j);
        for (std::size_t r = 0; r < rows.lhs.size(); ++r)
            rows.lhs[r] += row_coeffs_by_product[r][depth];
        if (rows.can_complete(depth + 1))
            dfs_pricing(m, L, rows, flat, nodes, state, row_coeffs_by_product, best, best_flat,
                        depth + 1);
        for (std::size_t r = 0; r < rows.lhs.size(); ++r)
            rows.lhs[r] -= row_coeffs_by_product[r][depth];
        state.undo(j);
        flat[j] = 0;
    }
}

struct ExactValue {
    ExactState inner;
    explicit ExactValue(const Instance& inst) : inner(inst) {}
    void apply(int j) { inner.apply(j); }
    void undo(int j) { inner.undo(j); }
    double value() const { return inner.value(); }
};

struct ApproxValue {
    ApproxState inner;
    explicit ApproxValue(const LfpCoefficients& coeffs) : inner(coeffs) {}
    void apply(int j) { inner.apply(j); }
    void undo(int j) { inner.undo(j); }
    double value() const { return inner.numerator() / inner.denominator(); }
};

double pricing_decision_cost(int m, int L) { return m * std::log2(L + 1.0); }

// product-level coefficient per row (identical across levels by construction)
std::vector<std::vector<double>> product_rows(const ConstraintSet& cs, int m) {
    std::vector<std::vector<double>> out;
    for (const ConstraintRow& row : cs.rows()) {
        std::vector<double> per(m);
        for (int i = 0; i < m; ++i) per[i] = row.coeffs[i];
        out.push_back(std::move(per));
    }
    return out;
}

RowTracker product_tracker(const ConstraintSet& cs, int m,
                           const std::vector<std::vector<double>>& per_product) {
    return RowTracker(cs, m, per_product);
}

}  // namespace

SolveReport search_exact_pricing(const PricingInstance& pinst, const ConstraintSet& cs) {
    pinst.validate();
    if (pricing_decision_cost(pinst.m, pinst.L) > search_cap())
        throw CapExceeded("pricing search space exceeds the enumeration cap; use the MILP path");
    auto t0 = Clock::now();
    PricingExpansion expansion = expand_pricing(pinst);
    ExactValue state(expansion.inst);
    std::vector<std::vector<double>> per_product = product_rows(cs, pinst.m);
    RowTracker rows = product_tracker(cs, pinst.m, per_product);
    BitVec flat(static_cast<std::size_t>(pinst.m) * pinst.L, 0);
    SolveReport report;
    report.method = Method::bruteforce_exact;
    report.best = flat;
    report.objective_approx = quiet_nan();
    double best = -1.0;
    dfs_pricing(pinst.m, pinst.L, rows, flat, report.node_count, state, per_product, best,
                report.best);
    report.objective_exact = best < 0.0 ? 0.0 : best;
    report.wall_ms = ms_since(t0);
    return report;
}

SolveReport search_exact_pricing_approx(const PricingInstance& pinst, const PricingLfp& plfp) {
    if (pricing_decision_cost(pinst.m, pinst.L) > search_cap())
        throw CapExceeded("pricing search space exceeds the enumeration cap; use the MILP path");
    auto t0 = Clock::now();
    // the lifted rows restricted back to one column per product
    ConstraintSet base(pinst.m);
    std::vector<std::vector<double>> per_product;
    for (const ConstraintRow& row : plfp.lifted.rows()) {
        ConstraintRow slice;
        slice.rhs = row.rhs;
        slice.tag = row.tag;
        slice.coeffs.resize(pinst.m);
        for (int i = 0; i < pinst.m; ++i) slice.coeffs[i] = row.coeffs[static_cast<std::size_t>(i) * pinst.L];
        per_product.push_back(slice.coeffs);
        base.add_row(std::move(slice));
    }
    ApproxValue state(plfp.coeffs);
    RowTracker rows = product_tracker(base, pinst.m, per_product);
    BitVec flat(static_cast<std::size_t>(pinst.m) * pinst.L, 0);
    SolveReport report;
    report.method = Method::bruteforce_approx;
    report.best = flat;
    double best = -1.0;
    dfs_pricing(pinst.m, pinst.L, rows, flat, report.node_count, state, per_product, best,
                report.best);
    report.objective_approx = approx_objective(plfp.coeffs, report.best);
    report.objective_exact =
        pricing_expected_revenue(pinst, to_pricing_assortment(pinst, report.best));
    report.guarantee = regime_guarantee(plfp.coeffs);
    report.wall_ms = ms_since(t0);
    return report;
}

SolveReport search_exact_mixture(const MixtureInstance& minst, const ConstraintSet& cs) {
    minst.validate();
    check_cap(minst.m, "mixture search");
    auto t0 = Clock::now();
    std::vector<ExactState> types;
    for (int t = 0; t < minst.T; ++t) types.emplace_back(type_instance(minst, t));
    RowTracker rows(cs, minst.m, rows_by_position(cs));
    BitVec x(static_cast<std::size_t>(minst.m), 0);
    SolveReport report;
    report.method = Method::bruteforce_exact;
    report.best = x;
    report.objective_approx = quiet_nan();
    double best = -1.0;
    dfs_binary(
        minst.m, rows, x, report.node_count,
        [&](int i) {
            for (ExactState& st : types) st.apply(i);
        },
        [&](int i) {
            for (ExactState& st : types) st.undo(i);
        },
        [&]() {
            double val = 0.0;
            for (int t = 0; t < minst.T; ++t) val += minst.theta[t] * types[t].value();
            if (val > best) {
                best = val;
                report.best = x;
            }
        });
    report.objective_exact = best < 0.0 ? 0.0 : best;
    report.wall_ms = ms_since(t0);
    return report;
}

SolveReport search_exact_mixture_approx(const MixtureInstance& minst, const MixtureLfp& mlfp,
                                        const ConstraintSet& cs) {
    check_cap(minst.m, "mixture search");
    auto t0 = Clock::now();
    std::vector<ApproxState> types;
    for (const LfpCoefficients& cf : mlfp.types) types.emplace_back(cf);
    RowTracker rows(cs, minst.m, rows_by_position(cs));
    BitVec x(static_cast<std::size_t>(minst.m), 0);
    SolveReport report;
    report.method = Method::bruteforce_approx;
    report.best = x;
    double best = -1.0;
    dfs_binary(
        minst.m, rows, x, report.node_count,
        [&](int i) {
            for (ApproxState& st : types) st.apply(i);
        },
        [&](int i) {
            for (ApproxState& st : types) st.undo(i);
        },
        [&]() {
            double val = 0.0;
            for (std::size_t t = 0; t < types.size(); ++t)
                val += mlfp.theta[t] * types[t].numerator() / types[t].denominator();
            if (val > best) {
                best = val;
                report.best = x;
            }
        });
    report.objective_approx = mixture_approx_objective(mlfp, report.best);
    report.objective_exact = mixture_expected_revenue(minst, Assortment{report.best});
    double g = 1.0;
    if (!mlfp.types.empty()) g = regime_guarantee(mlfp.types.front());
    for (const LfpCoefficients& cf : mlfp.types) g = std::min(g, regime_guarantee(cf));
    report.guarantee = g;
    report.wall_ms = ms_since(t0);
    return report;
}

SolveReport bisection_solve(const Instance& inst, const LfpCoefficients& coeffs,
                            const ConstraintSet& cs, double delta) {
    if (!(delta > 0.0)) throw InputError("bisection tolerance delta must be positive");
    auto t0 = Clock::now();
    SolveReport report;
    report.method = Method::bisection;

    // greedy highest-revenue fill for the lower bound
    std::vector<int> order(inst.m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return inst.r[a] > inst.r[b]; });
    BitVec greedy(static_cast<std::size_t>(inst.m), 0);
    for (int i : order) {
        greedy[i] = 1;
        if (!is_feasible(cs, greedy)) greedy[i] = 0;
    }

    double lower = approx_objective(coeffs, greedy);
    double upper = inst.m > 0 ? *std::max_element(inst.r.begin(), inst.r.end()) : 0.0;
    BitVec incumbent = greedy;
    if (lower <= 0.0) {
        bool empty = std::all_of(greedy.begin(), greedy.end(), [](std::uint8_t b) { return !b; });
        if (empty) {  // nothing can be offered
            report.best = greedy;
            report.objective_exact = 0.0;
            report.objective_approx = 0.0;
            report.wall_ms = ms_since(t0);
            return report;
        }
    }

    while (lower > 0.0 && (upper - lower) / lower > delta) {
        double lambda = 0.5 * (upper + lower);
        DinkelbachBest best = search_dinkelbach(coeffs, cs, lambda);
        report.node_count += best.nodes;
        ++report.iterations;
        if (best.value >= 0.0) {
            lower = lambda;
            incumbent = best.x;
        } else {
            upper = lambda;
        }
    }

    report.best = incumbent;
    report.objective_approx = approx_objective(coeffs, incumbent);
    report.objective_exact = expected_revenue(inst, Assortment{incumbent});
    report.guarantee = (1.0 - delta) * regime_guarantee(coeffs);
    report.wall_ms = ms_since(t0);
    return report;
}

ExternalResult solve_external(const Instance& inst, const ConstraintSet& cs,
                              const LfpCoefficients& coeffs, const MilpModel& model,
                              const std::string& solution_text) {
    PointValues values;
    std::istringstream in(solution_text);
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string name;
        double value;
        if (!(ls >> name)) continue;  // blank
        if (name[0] == '#') continue;
        if (!(ls >> value)) throw InputError("solution line without a numeric value: " + line);
        values[name] = value;
    }

    BitVec x(static_cast<std::size_t>(inst.m), 0);
    for (int i = 0; i < inst.m; ++i) {
        std::string name = "x_" + std::to_string(i + 1);
        auto it = values.find(name);
        if (it == values.end())
            throw InputError("solution file is missing variable " + name);
        x[i] = it->second >= 0.5 ? 1 : 0;
    }
    if (!is_feasible(cs, x))
        throw InputError("external solution violates the constraint system after rounding");

    ExternalResult out;
    out.report.method = Method::external_milp;
    out.report.best = x;
    out.report.objective_exact = expected_revenue(inst, Assortment{x});
    out.report.objective_approx = approx_objective(coeffs, x);
    out.report.guarantee = regime_guarantee(coeffs);

    // Recompute the solver's own objective from the file, when it gave us
    // every objective variable.
    bool have_all = true;
    double reported = 0.0;
    for (const MilpModel::Term& t : model.objective) {
        auto it = values.find(model.vars[t.var].name);
        if (it == values.end()) {
            have_all = false;
            break;
        }
        reported += t.coeff * it->second;
    }
    if (have_all && !model.objective.empty()) {
        out.reported_objective_known = true;
        out.reported_objective = reported;
        out.discrepancy = std::abs(reported - out.report.objective_approx) >
                          1e-6 * std::max(1.0, std::abs(out.report.objective_approx));
    }
    return out;
}

double gap_percent(double f_best, double f_x) {
    if (!(f_best > 0.0)) throw InputError("gap undefined: best objective must be positive");
    return 100.0 * (f_best - f_x) / f_best;
}

}  // namespace cnl
