#pragma once

#include <vector>

#include "cnl/constraints.hpp"
#include "cnl/discretize.hpp"
#include "cnl/model.hpp"

namespace cnl {

// Coefficient bundle of the approximate linear-fractional objective
//
//   Fhat(x) = [sum_in a_in x_i + sum_ink b_ink x_i z_nk] /
//             [c + sum_nk d_nk z_nk]
//
// with a_in = alpha_in r_i v_i f^n(L_n), b_ink = alpha_in r_i v_i gf_nk D_nk,
// c = sum_n g^n(L_n), d_nk = D_nk gg_nk. b is separable, so it is stored as
// arv[n][i] * bseg[n][k].
struct LfpCoefficients {
    int m = 0;
    int N = 0;
    double eps = 0.0;
    NestBounds bounds;
    std::vector<double> v0;               // no-purchase weights, for W_n(x)
    std::vector<PiecewiseApprox> pw;      // per nest
    std::vector<double> f_at_lower;       // f^n(L_n)
    std::vector<std::vector<double>> arv;   // [n][i] = alpha_in r_i v_i
    std::vector<std::vector<double>> avcol; // [n][i] = alpha_in v_i
    std::vector<std::vector<double>> bseg;  // [n][k] = slope_f * delta
    std::vector<std::vector<double>> d;     // [n][k] = slope_g * delta, >= 0
    double c_scalar = 0.0;

    double a(int i, int n) const { return arv[n][i] * f_at_lower[n]; }
    double b(int i, int n, int k) const { return arv[n][i] * bseg[n][k]; }
    int K(int n) const { return pw[n].K(); }
    int K_total() const;
    double d_total() const;
};

// Builds bounds (default method unless given) and per-nest discretizations.
// Requires every nest lower bound positive: f^n blows up at 0, so nests with
// v0 = 0 admit no piecewise-linear treatment.
LfpCoefficients build_lfp(const Instance& inst, const ConstraintSet& cs, double eps);
LfpCoefficients build_lfp(const Instance& inst, const ConstraintSet& cs, double eps,
                          const NestBounds& bounds);

// The z fill, per-nest weights, and both sides of the ratio for one x.
struct ApproxEval {
    std::vector<double> w;                // nest weights
    std::vector<std::vector<double>> z;   // per nest
    double numerator = 0.0;
    double denominator = 0.0;
    double value = 0.0;
};

// Evaluates Fhat(x). Throws if some W_n leaves [L_n, U_n] by more than 1e-9
// (stale bounds).
ApproxEval approx_eval(const LfpCoefficients& coeffs, const BitVec& x);
double approx_objective(const LfpCoefficients& coeffs, const BitVec& x);

// Dinkelbach value numerator(x) - lambda * denominator(x).
double dinkelbach_value(const LfpCoefficients& coeffs, const BitVec& x, double lambda);

// ---- pricing -------------------------------------------------------------

// Constraint rows over products lifted to the m*L virtual-product space
// (row coefficients replicated across each product's price levels).
ConstraintSet lift_constraints(const ConstraintSet& cs, int L);

struct PricingLfp {
    PricingExpansion expansion;
    ConstraintSet lifted;      // user rows over virtual products
    LfpCoefficients coeffs;    // over the expanded instance
};

PricingLfp build_pricing_lfp(const PricingInstance& pinst, const ConstraintSet& cs, double eps);

// ---- mixture ---------------------------------------------------------------

struct MixtureLfp {
    std::vector<double> theta;
    std::vector<LfpCoefficients> types;  // per-type bounds, shared sigma
};

MixtureLfp build_mixture_lfp(const MixtureInstance& minst, const ConstraintSet& cs, double eps);

// sum_t theta_t * ratio_t(x)
double mixture_approx_objective(const MixtureLfp& mlfp, const BitVec& x);

}  // namespace cnl
