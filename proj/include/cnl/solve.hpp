#pragma once

#include <cstdint>
#include <string>

#include "cnl/lfp.hpp"
#include "cnl/milp.hpp"
#include "cnl/model.hpp"

namespace cnl {

enum class Method { bruteforce_exact, bruteforce_approx, bisection, external_milp };

const char* method_name(Method method);

struct SolveReport {
    BitVec best;          // assortment (flat virtual products for pricing)
    double objective_exact = 0.0;
    double objective_approx = 0.0;  // NaN when no approximation was involved
    Method method = Method::bruteforce_exact;
    int iterations = 0;             // bisection feasibility calls
    std::uint64_t node_count = 0;
    double wall_ms = 0.0;
    double guarantee = 1.0;         // declared worst-case factor
};

// Enumeration cap on the number of binary decisions (default 24, overridable
// with CNL_ASSORT_CAP). Exceeding it raises CapExceeded.
int search_cap();

// Depth-first search over {x : A x <= b} with infeasibility pruning: a branch
// is cut as soon as its committed part cannot be completed feasibly. For a
// fixed x all LFP auxiliaries are determined, so both the exact and the
// approximate problem reduce to this search. Exact maximizer, desk scale.
SolveReport search_exact(const Instance& inst, const ConstraintSet& cs);
SolveReport search_exact_approx(const Instance& inst, const LfpCoefficients& coeffs,
                                const ConstraintSet& cs);

struct DinkelbachBest {
    double value = 0.0;  // max of numerator - lambda * denominator
    BitVec x;
    std::uint64_t nodes = 0;
};
DinkelbachBest search_dinkelbach(const LfpCoefficients& coeffs, const ConstraintSet& cs,
                                 double lambda);

// Pricing variants enumerate one choice per product (a price level or none).
SolveReport search_exact_pricing(const PricingInstance& pinst, const ConstraintSet& cs);
SolveReport search_exact_pricing_approx(const PricingInstance& pinst, const PricingLfp& plfp);

SolveReport search_exact_mixture(const MixtureInstance& minst, const ConstraintSet& cs);
SolveReport search_exact_mixture_approx(const MixtureInstance& minst, const MixtureLfp& mlfp,
                                        const ConstraintSet& cs);

// Dinkelbach bisection on lambda: the lower bound comes from a greedy
// highest-revenue fill, the upper bound is max_i r_i, and each step asks the
// search engine whether numerator - lambda * denominator >= 0 is attainable.
// Stops when (U - L) / L <= delta; overall factor (1-delta)(1-eps)/(1+eps).
SolveReport bisection_solve(const Instance& inst, const LfpCoefficients& coeffs,
                            const ConstraintSet& cs, double delta = 0.001);

// Ingests an external solver's solution ("name value" lines, unknown names
// ignored), rounds the binaries, validates feasibility, and re-evaluates both
// objectives internally; the solver's claimed objective is never trusted.
struct ExternalResult {
    SolveReport report;
    bool reported_objective_known = false;
    double reported_objective = 0.0;
    bool discrepancy = false;  // |reported - recomputed| > 1e-6
};
ExternalResult solve_external(const Instance& inst, const ConstraintSet& cs,
                              const LfpCoefficients& coeffs, const MilpModel& model,
                              const std::string& solution_text);

// 100 (F_best - F_x) / F_best; requires F_best > 0.
double gap_percent(double f_best, double f_x);

}  // namespace cnl
