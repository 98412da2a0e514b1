#include "cnl/constraints.hpp"

#include <algorithm>
#include <cmath>

#include "cnl/errors.hpp"
#include "cnl/kernels.hpp"

namespace cnl {

void ConstraintSet::add_row(ConstraintRow row) {
    if (static_cast<int>(row.coeffs.size()) != m_)
        throw InputError("constraint row must have exactly m coefficients");
    if (row.rhs < 0.0)
        throw InputError("constraint excludes the empty assortment (rhs < 0)");
    rows_.push_back(std::move(row));
}

int ConstraintSet::total_cap() const {
    for (const ConstraintRow& row : rows_)
        if (row.tag == "total_cap") return static_cast<int>(std::floor(row.rhs + kFeasTol));
    return -1;
}

bool is_feasible(const ConstraintSet& cs, const BitVec& x) {
    if (static_cast<int>(x.size()) != cs.m())
        throw InputError("assortment length does not match constraint dimension");
    for (const ConstraintRow& row : cs.rows()) {
        double lhs = kernels::masked_sum(row.coeffs.data(), x.data(), x.size());
        if (lhs > row.rhs + kFeasTol) return false;
    }
    return true;
}

bool is_feasible(const ConstraintSet& cs, const Assortment& x) { return is_feasible(cs, x.x); }

int default_total_cap(int m) { return static_cast<int>(std::ceil(0.5 * m)); }

ConstraintRow total_cardinality(int m, int c) {
    if (c < 0 || c > m) throw InputError("total cardinality cap must lie in [0, m]");
    ConstraintRow row;
    row.coeffs.assign(static_cast<std::size_t>(m), 1.0);
    row.rhs = static_cast<double>(c);
    row.tag = "total_cap";
    return row;
}

std::vector<ConstraintRow> per_nest_cardinality(const Instance& inst, double fraction) {
    std::vector<ConstraintRow> rows;
    rows.reserve(inst.N);
    for (int n = 0; n < inst.N; ++n) {
        ConstraintRow row;
        row.coeffs.assign(static_cast<std::size_t>(inst.m), 0.0);
        int members = 0;
        for (int i = 0; i < inst.m; ++i) {
            if (inst.alpha_at(i, n) > 0.0) {
                row.coeffs[i] = 1.0;
                ++members;
            }
        }
        row.rhs = std::ceil(fraction * members);
        row.tag = "per_nest_cap";
        rows.push_back(std::move(row));
    }
    return rows;
}

NestBounds nest_weight_bounds(const Instance& inst, const ConstraintSet& cs,
                              const std::vector<std::vector<int>>& groups) {
    inst.validate();
    NestBounds nb;
    nb.lower = inst.v0;
    nb.upper.assign(inst.N, 0.0);
    int cap = cs.total_cap();

    for (int n = 0; n < inst.N; ++n) {
        std::vector<double> contrib;
        if (groups.empty()) {
            contrib.reserve(inst.m);
            for (int i = 0; i < inst.m; ++i)
                contrib.push_back(inst.alpha_at(i, n) * inst.v[i]);
        } else {
            // at most one member per group can be offered
            contrib.reserve(groups.size());
            for (const std::vector<int>& g : groups) {
                double best = 0.0;
                for (int j : g) best = std::max(best, inst.alpha_at(j, n) * inst.v[j]);
                contrib.push_back(best);
            }
        }
        std::sort(contrib.begin(), contrib.end(), std::greater<>());
        std::size_t take = contrib.size();
        if (cap >= 0) take = std::min<std::size_t>(take, static_cast<std::size_t>(cap));
        double u = inst.v0[n];
        for (std::size_t i = 0; i < take; ++i) u += contrib[i];
        nb.upper[n] = u;
    }
    return nb;
}

NestBounds nest_weight_bounds_exact(const Instance& inst, const ConstraintSet& cs, int cap) {
    inst.validate();
    if (inst.m > cap) throw CapExceeded("exact nest bounds limited to m <= " + std::to_string(cap));
    Evaluator eval(inst);
    NestBounds nb;
    nb.lower = inst.v0;  // W_n(0) = v0[n] and x = 0 is always feasible
    nb.upper = inst.v0;
    BitVec x(static_cast<std::size_t>(inst.m), 0);
    const std::uint64_t total = 1ull << inst.m;
    for (std::uint64_t mask = 1; mask < total; ++mask) {
        for (int i = 0; i < inst.m; ++i) x[i] = (mask >> i) & 1u;
        if (!is_feasible(cs, x)) continue;
        std::vector<double> w = eval.nest_weights(Assortment{x});
        for (int n = 0; n < inst.N; ++n) nb.upper[n] = std::max(nb.upper[n], w[n]);
    }
    return nb;
}

}  // namespace cnl
