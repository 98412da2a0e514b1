#pragma once

#include <vector>

namespace cnl {

// Piecewise-linear chords of f(t) = t^(sigma-1) and g(t) = t^sigma over
// [lo, hi], built so that on every segment the maximum relative error of both
// approximators stays within eps. In the standard regime (sigma <= 1) the
// chords bracket the functions (fhat >= f, ghat <= g); for sigma > 1 the
// absolute-value error convention applies.
struct PiecewiseApprox {
    double sigma = 0.0;
    double lo = 0.0, hi = 0.0;
    double eps = 0.0;
    bool general_sigma = false;  // sigma > 1

    std::vector<double> c;        // breakpoints, size K+1, c[0] = lo, c[K] = hi
    std::vector<double> slope_f;  // size K
    std::vector<double> slope_g;  // size K
    std::vector<double> delta;    // size K, segment lengths

    int K() const { return static_cast<int>(delta.size()); }

    double f(double t) const;  // t^(sigma-1)
    double g(double t) const;  // t^sigma

    // index of the segment containing t (ties at breakpoints go left-open)
    int segment_of(double t) const;

    double fhat(double t) const;
    double ghat(double t) const;

    // z filling for a given aggregate weight: 1 below the active segment, the
    // fractional position inside it, 0 above. Uniquely determined by w.
    std::vector<double> fill_z(double w) const;
};

// Chord of f (resp. g) between (c, f(c)) and (u, f(u)) evaluated at t in [c,u].
double chord_f(double sigma, double c, double u, double t);
double chord_g(double sigma, double c, double u, double t);

struct SegmentError {
    double phi = 0.0;     // max relative error on [c, u]
    double t_star = 0.0;  // where it is attained
};

// Closed-form maximum relative chord error (unique interior maximizer; the
// argmax is clamped into [c, u] and both endpoints are checked as a guard
// against float drift on near-degenerate segments).
SegmentError segment_max_error_f(double sigma, double c, double u);
SegmentError segment_max_error_g(double sigma, double c, double u);

// max of the two
double segment_max_error(double sigma, double c, double u);

// Maximal-stretch discretization: starting from lo, each breakpoint is pushed
// as far right as the eps budget allows (delta-accurate bisection), which
// provably minimizes the number of segments. delta <= 0 selects the default
// 1e-7 * (hi - lo). sigma = 1 needs a single segment.
PiecewiseApprox discretize_interval(double sigma, double lo, double hi, double eps,
                                    double delta = -1.0);

// Theoretical envelope on the segment count K produced by the discretization,
// for sigma in [0, 1]. The lower bound needs eps <= 1 - 2^(sigma-1); outside
// that range (or for sigma > 1) it degrades to 1 and lower_valid is false.
struct KnBounds {
    int lower = 1;
    int upper = 0;  // 0: no finite bound available
    bool lower_valid = false;
    double t_f_eps = 0.0;   // root of (t^(s-1)+1)/(t+1)^(s-1) = 2^(2-s)(1+eps)
    double t_g_eps = 0.0;   // root of (t^s+1)/(t+1)^s = 2^(1-s)(1-eps)
    double t_f_star = 0.0;  // closed-form relaxations of the roots
    double t_g_star = 0.0;
};

KnBounds kn_bounds(double sigma, double lo, double hi, double eps);

}  // namespace cnl
