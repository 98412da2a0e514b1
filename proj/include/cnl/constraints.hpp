#pragma once

#include <string>
#include <vector>

#include "cnl/model.hpp"

namespace cnl {

// General linear system A x <= b over binary assortments. The empty
// assortment must be feasible (rhs >= 0), which construction enforces;
// the nest-bound and bisection machinery relies on it.
struct ConstraintRow {
    std::vector<double> coeffs;
    double rhs = 0.0;
    std::string tag = "custom";  // builder name or "custom"
};

class ConstraintSet {
public:
    ConstraintSet() = default;
    explicit ConstraintSet(int m) : m_(m) {}

    void add_row(ConstraintRow row);
    int m() const { return m_; }
    const std::vector<ConstraintRow>& rows() const { return rows_; }
    bool empty() const { return rows_.empty(); }

    // rhs of the single "total_cap" row if present, -1 otherwise
    int total_cap() const;

private:
    int m_ = 0;
    std::vector<ConstraintRow> rows_;
};

inline constexpr double kFeasTol = 1e-9;

// A x <= b + tol componentwise.
bool is_feasible(const ConstraintSet& cs, const Assortment& x);
bool is_feasible(const ConstraintSet& cs, const BitVec& x);

// sum_i x_i <= c.  Default cap: ceil(0.5 m).
ConstraintRow total_cardinality(int m, int c);
int default_total_cap(int m);

// One row per nest over its members {i : alpha(i,n) > 0}:
// sum_{i in S_n} x_i <= ceil(fraction |S_n|).
std::vector<ConstraintRow> per_nest_cardinality(const Instance& inst, double fraction = 0.8);

// Valid envelopes of the nest aggregate weights over the feasible set:
// L[n] <= W_n(x) <= U[n] for every feasible x.
struct NestBounds {
    std::vector<double> lower;
    std::vector<double> upper;
};

// Default method: L[n] = v0[n] (attained at the feasible x = 0); U[n] sums the
// largest per-product weight contributions, honoring a single total_cap row
// when present. Bounds are valid for any A x <= b but not necessarily tight.
//
// groups, when non-empty, declares mutually exclusive index sets (at most one
// member offered), as in the pricing expansion; the bound then takes each
// group's best contribution once.
NestBounds nest_weight_bounds(const Instance& inst, const ConstraintSet& cs,
                              const std::vector<std::vector<int>>& groups = {});

// Exact U[n] by enumerating feasible assortments; m capped (default 24).
NestBounds nest_weight_bounds_exact(const Instance& inst, const ConstraintSet& cs, int cap = 24);

}  // namespace cnl
