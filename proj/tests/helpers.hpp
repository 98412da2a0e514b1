#pragma once

// Shared fixtures and brute-force oracles for the test suites. Oracles here
// never reuse the library's fast paths: enumeration walks raw bitmasks and
// evaluates the published formulas directly.

#include <cmath>
#include <cstdint>
#include <vector>

#include "cnl/constraints.hpp"
#include "cnl/model.hpp"
#include "cnl/rng.hpp"

namespace testutil {

// Set-partition reduction instance with T = 1: three products, two nests,
// sigma = 0.5 throughout, and a zero no-purchase weight in the second nest.
inline cnl::Instance appendix_fixture() {
    cnl::Instance inst;
    inst.m = 3;
    inst.N = 2;
    inst.r = {6.0, 6.0, 9.0};
    inst.v = {1.0, 1.0, 4.0};
    inst.alpha = {1.0, 0.0, 1.0, 0.0, 0.25, 0.75};
    inst.sigma = {0.5, 0.5};
    inst.v0 = {1.0, 0.0};
    return inst;
}

inline cnl::BitVec bits(std::initializer_list<int> raw) {
    cnl::BitVec x;
    for (int b : raw) x.push_back(static_cast<std::uint8_t>(b));
    return x;
}

// Direct evaluation of the expected-revenue ratio, independent of the
// library's evaluator (no kernels, no caching).
inline double naive_revenue(const cnl::Instance& inst, const cnl::BitVec& x) {
    double num = 0.0, den = 0.0;
    for (int n = 0; n < inst.N; ++n) {
        double w = inst.v0[n];
        double mass = 0.0;
        for (int i = 0; i < inst.m; ++i) {
            if (!x[i]) continue;
            w += inst.alpha_at(i, n) * inst.v[i];
            mass += inst.alpha_at(i, n) * inst.v[i] * inst.r[i];
        }
        if (w > 0.0) {
            den += std::pow(w, inst.sigma[n]);
            num += std::pow(w, inst.sigma[n] - 1.0) * mass;
        }
    }
    return den > 0.0 ? num / den : 0.0;
}

inline bool naive_feasible(const cnl::ConstraintSet& cs, const cnl::BitVec& x) {
    for (const cnl::ConstraintRow& row : cs.rows()) {
        double lhs = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) lhs += row.coeffs[i] * (x[i] ? 1.0 : 0.0);
        if (lhs > row.rhs + 1e-9) return false;
    }
    return true;
}

// max of eval over all feasible bitmasks
template <class Eval>
std::pair<double, cnl::BitVec> naive_best(int m, const cnl::ConstraintSet& cs, Eval&& eval) {
    double best = -1.0;
    cnl::BitVec best_x(static_cast<std::size_t>(m), 0);
    cnl::BitVec x(static_cast<std::size_t>(m), 0);
    for (std::uint64_t mask = 0; mask < (1ull << m); ++mask) {
        for (int i = 0; i < m; ++i) x[i] = (mask >> i) & 1u;
        if (!naive_feasible(cs, x)) continue;
        double val = eval(x);
        if (val > best) {
            best = val;
            best_x = x;
        }
    }
    return {best, best_x};
}

// Random well-formed instance for property tests; sigma drawn from
// [sigma_lo, sigma_hi].
inline cnl::Instance random_instance(cnl::Rng& rng, int m, int N, double sigma_lo = 0.0,
                                     double sigma_hi = 1.0) {
    cnl::Instance inst;
    inst.m = m;
    inst.N = N;
    inst.alpha.assign(static_cast<std::size_t>(m) * N, 0.0);
    for (int i = 0; i < m; ++i) {
        inst.r.push_back(rng.uniform(0.1, 10.0));
        inst.v.push_back(rng.uniform(0.05, 5.0));
        double row = 0.0;
        for (int n = 0; n < N; ++n) {
            double a = rng.uniform01() < 0.35 ? 0.0 : rng.uniform(0.05, 1.0);
            inst.alpha[static_cast<std::size_t>(i) * N + n] = a;
            row += a;
        }
        if (row == 0.0) {
            int n = static_cast<int>(rng.below(static_cast<std::uint64_t>(N)));
            inst.alpha[static_cast<std::size_t>(i) * N + n] = 1.0;
            row = 1.0;
        }
        for (int n = 0; n < N; ++n) inst.alpha[static_cast<std::size_t>(i) * N + n] /= row;
    }
    for (int n = 0; n < N; ++n) {
        inst.sigma.push_back(rng.uniform(sigma_lo, sigma_hi));
        inst.v0.push_back(rng.uniform(0.2, 2.0));
    }
    return inst;
}

inline cnl::BitVec random_bits(cnl::Rng& rng, int m, double p_one = 0.5) {
    cnl::BitVec x(static_cast<std::size_t>(m), 0);
    for (int i = 0; i < m; ++i) x[i] = rng.uniform01() < p_one ? 1 : 0;
    return x;
}

inline cnl::ConstraintSet random_cardinality_constraints(cnl::Rng& rng, const cnl::Instance& inst) {
    cnl::ConstraintSet cs(inst.m);
    if (rng.uniform01() < 0.7)
        cs.add_row(cnl::total_cardinality(
            inst.m, 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(inst.m)))));
    if (rng.uniform01() < 0.5)
        for (cnl::ConstraintRow& row : cnl::per_nest_cardinality(inst, rng.uniform(0.4, 0.9)))
            cs.add_row(std::move(row));
    return cs;
}

}  // namespace testutil
