#include "cnl/lfp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cnl/errors.hpp"
#include "cnl/kernels.hpp"

namespace cnl {

namespace {
constexpr double kBoundTol = 1e-9;
}

int LfpCoefficients::K_total() const {
    int total = 0;
    for (const PiecewiseApprox& p : pw) total += p.K();
    return total;
}

double LfpCoefficients::d_total() const {
    double total = 0.0;
    for (const std::vector<double>& dn : d)
        for (double x : dn) total += x;
    return total;
}

LfpCoefficients build_lfp(const Instance& inst, const ConstraintSet& cs, double eps) {
    return build_lfp(inst, cs, eps, nest_weight_bounds(inst, cs));
}

LfpCoefficients build_lfp(const Instance& inst, const ConstraintSet& cs, double eps,
                          const NestBounds& bounds) {
    (void)cs;
    inst.validate();
    if (!(eps > 0.0)) throw InputError("accuracy level eps must be positive");
    LfpCoefficients out;
    out.m = inst.m;
    out.N = inst.N;
    out.eps = eps;
    out.bounds = bounds;
    out.v0 = inst.v0;
    out.pw.reserve(inst.N);
    out.f_at_lower.resize(inst.N);
    out.arv.assign(inst.N, std::vector<double>(inst.m));
    out.avcol.assign(inst.N, std::vector<double>(inst.m));
    out.bseg.resize(inst.N);
    out.d.resize(inst.N);
    out.c_scalar = 0.0;
    for (int n = 0; n < inst.N; ++n) {
        if (!(bounds.lower[n] > 0.0))
            throw InputError("nest " + std::to_string(n + 1) +
                             " has zero lower weight bound; the approximation needs v0 > 0");
        out.pw.push_back(discretize_interval(inst.sigma[n], bounds.lower[n], bounds.upper[n], eps));
        const PiecewiseApprox& p = out.pw.back();
        out.f_at_lower[n] = p.f(bounds.lower[n]);
        out.c_scalar += p.g(bounds.lower[n]);
        out.bseg[n].resize(p.K());
        out.d[n].resize(p.K());
        for (int k = 0; k < p.K(); ++k) {
            out.bseg[n][k] = p.slope_f[k] * p.delta[k];
            out.d[n][k] = p.slope_g[k] * p.delta[k];
        }
        for (int i = 0; i < inst.m; ++i) {
            double av = inst.alpha_at(i, n) * inst.v[i];
            out.avcol[n][i] = av;
            out.arv[n][i] = av * inst.r[i];
        }
    }
    return out;
}

ApproxEval approx_eval(const LfpCoefficients& coeffs, const BitVec& x) {
    if (static_cast<int>(x.size()) != coeffs.m)
        throw InputError("assortment length does not match coefficient bundle");
    ApproxEval ev;
    ev.w.resize(coeffs.N);
    ev.z.resize(coeffs.N);
    ev.numerator = 0.0;
    ev.denominator = coeffs.c_scalar;
    for (int n = 0; n < coeffs.N; ++n) {
        const PiecewiseApprox& p = coeffs.pw[n];
        double w = coeffs.v0[n] + kernels::masked_sum(coeffs.avcol[n].data(), x.data(), x.size());
        if (w < p.lo - kBoundTol || w > p.hi + kBoundTol)
            throw InputError("nest weight " + std::to_string(w) + " escapes [" +
                             std::to_string(p.lo) + ", " + std::to_string(p.hi) +
                             "]; bounds are stale for this assortment");
        w = std::clamp(w, p.lo, p.hi);
        ev.w[n] = w;
        ev.z[n] = p.fill_z(w);
        double fz = 0.0, gz = 0.0;
        for (int k = 0; k < p.K(); ++k) {
            fz += coeffs.bseg[n][k] * ev.z[n][k];
            gz += coeffs.d[n][k] * ev.z[n][k];
        }
        double revenue_mass = kernels::masked_sum(coeffs.arv[n].data(), x.data(), x.size());
        ev.numerator += revenue_mass * (coeffs.f_at_lower[n] + fz);
        ev.denominator += gz;
    }
    ev.value = ev.numerator / ev.denominator;
    return ev;
}

double approx_objective(const LfpCoefficients& coeffs, const BitVec& x) {
    return approx_eval(coeffs, x).value;
}

double dinkelbach_value(const LfpCoefficients& coeffs, const BitVec& x, double lambda) {
    ApproxEval ev = approx_eval(coeffs, x);
    return ev.numerator - lambda * ev.denominator;
}

ConstraintSet lift_constraints(const ConstraintSet& cs, int L) {
    ConstraintSet lifted(cs.m() * L);
    for (const ConstraintRow& row : cs.rows()) {
        ConstraintRow lift;
        lift.rhs = row.rhs;
        lift.tag = row.tag;
        lift.coeffs.resize(row.coeffs.size() * static_cast<std::size_t>(L));
        for (std::size_t i = 0; i < row.coeffs.size(); ++i)
            for (int l = 0; l < L; ++l) lift.coeffs[i * L + l] = row.coeffs[i];
        lifted.add_row(std::move(lift));
    }
    return lifted;
}

PricingLfp build_pricing_lfp(const PricingInstance& pinst, const ConstraintSet& cs, double eps) {
    pinst.validate();
    PricingLfp out;
    out.expansion = expand_pricing(pinst);
    out.lifted = lift_constraints(cs, pinst.L);
    NestBounds bounds = nest_weight_bounds(out.expansion.inst, out.lifted, out.expansion.groups);
    out.coeffs = build_lfp(out.expansion.inst, out.lifted, eps, bounds);
    return out;
}

MixtureLfp build_mixture_lfp(const MixtureInstance& minst, const ConstraintSet& cs, double eps) {
    minst.validate();
    MixtureLfp out;
    out.theta = minst.theta;
    out.types.reserve(minst.T);
    for (int t = 0; t < minst.T; ++t) {
        Instance ti = type_instance(minst, t);
        out.types.push_back(build_lfp(ti, cs, eps, nest_weight_bounds(ti, cs)));
    }
    return out;
}

double mixture_approx_objective(const MixtureLfp& mlfp, const BitVec& x) {
    double total = 0.0;
    for (std::size_t t = 0; t < mlfp.types.size(); ++t)
        total += mlfp.theta[t] * approx_objective(mlfp.types[t], x);
    return total;
}

}  // namespace cnl
