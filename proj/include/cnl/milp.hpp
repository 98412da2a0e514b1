#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "cnl/lfp.hpp"

namespace cnl {

// Solver-independent mixed-integer linear program. Variable order is the
// declaration order and fully determines the emitted LP text.
struct MilpModel {
    struct Var {
        std::string name;
        bool binary = false;
        double lo = 0.0;
        double hi = 0.0;
    };
    struct Term {
        int var = 0;
        double coeff = 0.0;
    };
    struct Row {
        std::string name;
        std::vector<Term> terms;
        char sense = 'L';  // 'L' <=, 'G' >=, 'E' =
        double rhs = 0.0;
    };

    std::string variant;  // assort | anp | mixture | feasibility
    double lambda = 0.0;  // feasibility models only
    int m = 0;            // decision products (virtual products for anp)
    int N = 0;
    double eps = 0.0;
    std::vector<int> K;

    std::vector<Var> vars;
    std::vector<Term> objective;  // maximize
    std::vector<Row> rows;

    int add_binary(std::string name);
    int add_continuous(std::string name, double lo, double hi);
    void add_row(std::string name, std::vector<Term> terms, char sense, double rhs);

    int var_index(const std::string& name) const;  // -1 if absent
    int binary_count() const;
};

// (Assort-MILP): Charnes-Cooper transform of the approximate LFP with Glover
// rows for the w*x and w*y products, plus the original A x <= b rows.
MilpModel build_assort_milp(const LfpCoefficients& coeffs, const ConstraintSet& cs);

// (A&P-MILP): same structure over virtual products x_i_l with the one-price
// rows sum_l x_il <= 1.
MilpModel build_anp_milp(const PricingLfp& plfp);
MilpModel build_anp_milp(const PricingInstance& pinst, const ConstraintSet& cs, double eps);

// (MA-MILP): per-type ratios share the binary assortment; type t carries its
// own w_t with normalization c_t w_t + sum d w^z = theta_t.
MilpModel build_mixture_milp(const MixtureLfp& mlfp, const ConstraintSet& cs);
MilpModel build_mixture_milp(const MixtureInstance& minst, const ConstraintSet& cs, double eps);

// Dinkelbach feasibility test at fixed lambda, kept in the LFP variables
// (x, y, z, s): numerator - lambda * denominator >= 0 over the Assort-LFP
// constraint block. No Charnes-Cooper needed; the test is linear.
MilpModel build_feasibility_model(const LfpCoefficients& coeffs, const ConstraintSet& cs,
                                  double lambda);

// Deterministic LP-format text (Maximize / Subject To / Bounds / Binaries /
// End). Identical models emit byte-identical text.
std::string emit_lp(const MilpModel& model);

// Sidecar: {variant, m, N, K, eps, counts:{vars, binaries, constraints}}.
std::string model_metadata_json(const MilpModel& model);

// ---- point checking --------------------------------------------------------

using PointValues = std::unordered_map<std::string, double>;

struct PointCheck {
    bool feasible = true;
    double objective = 0.0;
    double worst_violation = 0.0;
    std::string first_violated;
};

// Evaluates a named assignment against every row, variable bound and
// integrality requirement. Missing names default to 0.
PointCheck evaluate_point(const MilpModel& model, const PointValues& values, double tol = 1e-7);

// The Charnes-Cooper image of assortment x: w = 1/den(x), w^x = w x, and so
// on, with (z, y, s) filled deterministically from the nest weights. Feeding
// this into evaluate_point must reproduce approx_objective(x) whenever x is
// feasible; that equivalence is what the MILP oracle tests exercise.
PointValues charnes_cooper_point(const LfpCoefficients& coeffs, const BitVec& x);
PointValues charnes_cooper_point_anp(const PricingLfp& plfp, const BitVec& flat_x);
PointValues charnes_cooper_point_mixture(const MixtureLfp& mlfp, const BitVec& x);

// LFP-variable assignment for the feasibility model at fixed x.
PointValues lfp_point(const LfpCoefficients& coeffs, const BitVec& x);

}  // namespace cnl
