#include "cnl/discretize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cnl/errors.hpp"

namespace cnl {

namespace {

double power(double t, double e) {
    if (e == 0.0) return 1.0;
    if (e == 1.0) return t;
    return std::exp(e * std::log(t));
}

}  // namespace

double PiecewiseApprox::f(double t) const { return power(t, sigma - 1.0); }
double PiecewiseApprox::g(double t) const { return power(t, sigma); }

int PiecewiseApprox::segment_of(double t) const {
    // upper_bound over breakpoints; values at a breakpoint belong to the
    // segment ending there, matching the z fill rule
    int k = static_cast<int>(std::upper_bound(c.begin(), c.end(), t) - c.begin()) - 1;
    return std::clamp(k, 0, K() - 1);
}

double PiecewiseApprox::fhat(double t) const {
    int k = segment_of(t);
    return f(c[k]) + slope_f[k] * (t - c[k]);
}

double PiecewiseApprox::ghat(double t) const {
    int k = segment_of(t);
    return g(c[k]) + slope_g[k] * (t - c[k]);
}

std::vector<double> PiecewiseApprox::fill_z(double w) const {
    std::vector<double> z(static_cast<std::size_t>(K()), 0.0);
    int ks = segment_of(w);
    for (int k = 0; k < ks; ++k) z[k] = 1.0;
    if (delta[ks] > 0.0) z[ks] = std::clamp((w - c[ks]) / delta[ks], 0.0, 1.0);
    return z;
}

double chord_f(double sigma, double c, double u, double t) {
    if (!(c < u)) throw InputError("chord needs c < u");
    if (t < c || t > u) throw InputError("chord evaluated outside [c, u]");
    double fc = power(c, sigma - 1.0);
    double zeta = (power(u, sigma - 1.0) - fc) / (u - c);
    return fc + zeta * (t - c);
}

double chord_g(double sigma, double c, double u, double t) {
    if (!(c < u)) throw InputError("chord needs c < u");
    if (t < c || t > u) throw InputError("chord evaluated outside [c, u]");
    double gc = power(c, sigma);
    double zeta = (power(u, sigma) - gc) / (u - c);
    return gc + zeta * (t - c);
}

SegmentError segment_max_error_f(double sigma, double c, double u) {
    SegmentError out;
    out.t_star = c;
    if (!(u > c) || sigma == 1.0 || sigma == 2.0) return out;  // f linear (or no interval)
    double fc = power(c, sigma - 1.0);
    double fu = power(u, sigma - 1.0);
    double zeta = (fu - fc) / (u - c);
    if (zeta == 0.0) return out;
    double ts = (sigma - 1.0) * (fc - zeta * c) / (zeta * (2.0 - sigma));
    ts = std::clamp(ts, c, u);
    double best = 0.0, arg = c;
    for (double t : {ts, c, u}) {
        double ft = power(t, sigma - 1.0);
        double err = std::abs(fc + zeta * (t - c) - ft) / ft;
        if (err > best) {
            best = err;
            arg = t;
        }
    }
    out.phi = best;
    out.t_star = arg;
    return out;
}

SegmentError segment_max_error_g(double sigma, double c, double u) {
    SegmentError out;
    out.t_star = c;
    if (!(u > c) || sigma == 0.0 || sigma == 1.0) return out;  // g linear (or no interval)
    double gc = power(c, sigma);
    double gu = power(u, sigma);
    double zeta = (gu - gc) / (u - c);
    if (zeta == 0.0) return out;
    double ts = sigma * (gc - zeta * c) / (zeta * (1.0 - sigma));
    ts = std::clamp(ts, c, u);
    double best = 0.0, arg = c;
    for (double t : {ts, c, u}) {
        double gt = power(t, sigma);
        double err = std::abs(gt - (gc + zeta * (t - c))) / gt;
        if (err > best) {
            best = err;
            arg = t;
        }
    }
    out.phi = best;
    out.t_star = arg;
    return out;
}

double segment_max_error(double sigma, double c, double u) {
    return std::max(segment_max_error_f(sigma, c, u).phi, segment_max_error_g(sigma, c, u).phi);
}

PiecewiseApprox discretize_interval(double sigma, double lo, double hi, double eps, double delta) {
    if (!(lo > 0.0) || !(hi >= lo)) throw InputError("discretization needs 0 < lo <= hi");
    if (!(eps > 0.0)) throw InputError("accuracy level eps must be positive");
    if (sigma < 0.0) throw InputError("sigma must be non-negative");

    PiecewiseApprox pw;
    pw.sigma = sigma;
    pw.lo = lo;
    pw.hi = hi;
    pw.eps = eps;
    pw.general_sigma = sigma > 1.0;

    auto finalize = [&pw]() {
        int K = static_cast<int>(pw.c.size()) - 1;
        pw.slope_f.resize(K);
        pw.slope_g.resize(K);
        pw.delta.resize(K);
        for (int k = 0; k < K; ++k) {
            double a = pw.c[k], b = pw.c[k + 1];
            pw.delta[k] = b - a;
            pw.slope_f[k] = b > a ? (pw.f(b) - pw.f(a)) / pw.delta[k] : 0.0;
            pw.slope_g[k] = b > a ? (pw.g(b) - pw.g(a)) / pw.delta[k] : 0.0;
        }
        return pw;
    };

    if (hi == lo || sigma == 1.0) {
        // hi == lo: a nest nothing feasible can reach beyond its floor;
        // sigma == 1: both f and g already linear. One segment either way.
        pw.c = {lo, hi};
        return finalize();
    }

    if (delta <= 0.0) delta = 1e-7 * (hi - lo);
    if (!(delta < hi - lo)) throw InputError("bisection tolerance delta must be below hi - lo");

    pw.c.push_back(lo);
    double c = lo;
    const int max_segments = 10'000'000;
    while (true) {
        if (segment_max_error(sigma, c, hi) <= eps) {
            pw.c.push_back(hi);
            break;
        }
        // maximal admissible endpoint: Phi(c, .) is non-decreasing, so
        // bisect with invariant Phi(c, a) <= eps < Phi(c, b)
        double a = c, b = hi;
        while (b - a > delta) {
            double u = 0.5 * (a + b);
            if (segment_max_error(sigma, c, u) <= eps)
                a = u;
            else
                b = u;
        }
        if (a <= c)
            throw InputError("discretization cannot make progress; eps too small for delta");
        if (hi - a <= delta) {  // merge a would-be sliver into the last segment
            pw.c.push_back(hi);
            break;
        }
        pw.c.push_back(a);
        c = a;
        if (static_cast<int>(pw.c.size()) > max_segments)
            throw InputError("discretization segment count exceeds sanity cap");
    }
    return finalize();
}

namespace {

// increasing on [1, inf); equals ln((t^(s-1)+1)/(t+1)^(s-1))
double delta_fn(double t, double sigma) {
    return std::log(power(t, sigma - 1.0) + 1.0) + (1.0 - sigma) * std::log(t + 1.0);
}

// decreasing on [1, inf); equals ln((t^s+1)/(t+1)^s)
double rho_fn(double t, double sigma) {
    return std::log(power(t, sigma) + 1.0) - sigma * std::log(t + 1.0);
}

double bisect_root(double target, double sigma, bool use_delta) {
    auto fn = [&](double t) { return use_delta ? delta_fn(t, sigma) : rho_fn(t, sigma); };
    bool increasing = use_delta;
    double lo = 1.0, hi = 2.0;
    auto above = [&](double t) { return increasing ? fn(t) >= target : fn(t) <= target; };
    int guard = 0;
    while (!above(hi)) {
        hi *= 2.0;
        if (++guard > 1024) return std::numeric_limits<double>::infinity();
    }
    while ((hi - lo) / hi > 1e-10) {
        double mid = 0.5 * (lo + hi);
        if (above(mid))
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

KnBounds kn_bounds(double sigma, double lo, double hi, double eps) {
    if (!(lo > 0.0) || !(hi >= lo)) throw InputError("kn_bounds needs 0 < lo <= hi");
    if (!(eps > 0.0)) throw InputError("accuracy level eps must be positive");
    KnBounds out;
    if (sigma == 1.0) {
        out.lower = out.upper = 1;
        out.lower_valid = true;
        return out;
    }
    if (sigma > 1.0) return out;  // envelope established for sigma in [0, 1] only

    double ratio = std::log(hi / lo);
    double upper_val =
        ratio * ((1.0 - sigma) / std::log1p(eps) - sigma / std::log1p(-eps)) + 1.0;
    out.upper = std::max(1, static_cast<int>(std::ceil(upper_val - 1e-9)));

    double limit = 1.0 - power(2.0, sigma - 1.0);
    if (eps > limit) return out;  // lower bound undefined; report 1
    out.lower_valid = true;

    // Closed-form relaxations (always weaker than the exact roots).
    out.t_f_star = std::exp((std::log1p(eps) + (2.0 - sigma) * std::log(2.0)) / (1.0 - sigma)) - 1.0;
    double gden = power(2.0, 1.0 - sigma) * (1.0 - eps) - 1.0;
    out.t_g_star = gden > 0.0 ? power(1.0 / gden, 1.0 / sigma) : std::numeric_limits<double>::infinity();

    out.t_f_eps = bisect_root(std::log(power(2.0, 2.0 - sigma) * (1.0 + eps)), sigma, true);
    double bound = 1.0 / std::log(out.t_f_eps);
    if (sigma > 0.0) {  // g is constant at sigma = 0; only f constrains K
        out.t_g_eps = bisect_root((1.0 - sigma) * std::log(2.0) + std::log1p(-eps), sigma, false);
        bound = std::max(bound, 1.0 / std::log(out.t_g_eps));
    }
    out.lower = std::max(1, static_cast<int>(std::ceil(ratio * bound - 1e-9)));
    return out;
}

}  // namespace cnl
