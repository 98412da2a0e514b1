#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cnl {

using BitVec = std::vector<std::uint8_t>;  // entries 0/1

// Cross-nested logit instance. Product i carries revenue r[i] and preference
// weight v[i] and belongs to nest n with allocation fraction alpha(i, n); the
// fractions of each product sum to one. Nest n has dissimilarity sigma[n] and
// no-purchase weight v0[n].
//
// v0[n] = 0 is allowed for individual nests (the set-partition reduction
// instance needs it) as long as the total no-purchase mass is positive. A nest
// whose aggregate weight is exactly zero offers nothing, so it contributes to
// neither the numerator nor the denominator of the choice formulas.
struct Instance {
    int m = 0;  // products
    int N = 0;  // nests
    std::vector<double> r;      // m, > 0
    std::vector<double> v;      // m, > 0
    std::vector<double> alpha;  // m x N row-major, rows sum to 1
    std::vector<double> sigma;  // N, >= 0
    std::vector<double> v0;     // N, >= 0, sum > 0

    double alpha_at(int i, int n) const { return alpha[static_cast<std::size_t>(i) * N + n]; }

    // True iff every sigma[n] lies in [0, 1] (the random-utility-consistent
    // regime; outside it the squared performance guarantee applies).
    bool standard_regime() const;

    // Throws InputError on any violated invariant.
    void validate() const;
};

struct Assortment {
    BitVec x;

    static Assortment none(int m) { return Assortment{BitVec(static_cast<std::size_t>(m), 0)}; }
    static Assortment all(int m) { return Assortment{BitVec(static_cast<std::size_t>(m), 1)}; }
    int size() const { return static_cast<int>(x.size()); }
};

// Joint assortment-and-pricing instance: product i may be offered at one of L
// prices p[i][l], with price-dependent weight v[i][l].
struct PricingInstance {
    int m = 0;
    int N = 0;
    int L = 0;
    std::vector<double> alpha;  // m x N row-major
    std::vector<double> sigma;  // N
    std::vector<double> v0;     // N
    std::vector<std::vector<double>> p;  // m x L, > 0
    std::vector<std::vector<double>> v;  // m x L, > 0

    void validate() const;
};

// Offer decision for pricing: x[i][l] = 1 iff product i is offered at price
// level l; at most one level per product.
struct PricingAssortment {
    std::vector<BitVec> x;  // m x L

    static PricingAssortment none(int m, int L) {
        return PricingAssortment{std::vector<BitVec>(static_cast<std::size_t>(m),
                                                     BitVec(static_cast<std::size_t>(L), 0))};
    }
};

// Mixture of CNL models over T customer types sharing the nest structure and
// revenues; type t arrives with probability theta[t] and carries its own
// preference weights v[t].
struct MixtureInstance {
    int m = 0;
    int N = 0;
    int T = 0;
    std::vector<double> r;      // m
    std::vector<double> alpha;  // m x N row-major
    std::vector<double> sigma;  // N
    std::vector<double> v0;     // N
    std::vector<double> theta;  // T, >= 0, sums to 1
    std::vector<std::vector<double>> v;  // T x m

    void validate() const;
};

struct Probabilities {
    std::vector<double> per_product;  // m
    double no_purchase = 0.0;
};

// Precomputed per-nest columns for repeated evaluation of one instance. The
// hot sums run through the kernels layer.
class Evaluator {
public:
    explicit Evaluator(const Instance& inst);

    const Instance& instance() const { return *inst_; }

    std::vector<double> nest_weights(const Assortment& x) const;
    Probabilities choice_probabilities(const Assortment& x) const;
    double expected_revenue(const Assortment& x) const;

    // column n of alpha .* v (size m): the W_n contribution of each product
    const std::vector<double>& weight_col(int n) const { return wcol_[n]; }
    // column n of alpha .* r .* v: the revenue-numerator contribution
    const std::vector<double>& revenue_col(int n) const { return rcol_[n]; }

private:
    const Instance* inst_;
    std::vector<std::vector<double>> wcol_;
    std::vector<std::vector<double>> rcol_;
};

// W[n] = v0[n] + sum_i alpha(i,n) x_i v_i
std::vector<double> nest_weights(const Instance& inst, const Assortment& x);

// P[i] = sum_n W_n^(sigma_n - 1) alpha(i,n) x_i v_i / sum_n W_n^sigma_n, plus
// the explicit no-purchase probability. Probabilities sum to one.
Probabilities choice_probabilities(const Instance& inst, const Assortment& x);

// F(x) = sum_i r_i P[i].
double expected_revenue(const Instance& inst, const Assortment& x);

double pricing_expected_revenue(const PricingInstance& inst, const PricingAssortment& x);

// theta-weighted sum of per-type expected revenues.
double mixture_expected_revenue(const MixtureInstance& inst, const Assortment& x);

// View of the pricing problem as a plain assortment problem over m*L virtual
// products (product i at level l maps to index i*L + l, with r = price).
// One-price rows are NOT part of this instance; callers enforce them through
// the groups.
struct PricingExpansion {
    Instance inst;                        // m*L virtual products
    std::vector<std::vector<int>> groups; // per original product, its virtual indices
};
PricingExpansion expand_pricing(const PricingInstance& pinst);

// Per-type slice of a mixture as a standalone instance.
Instance type_instance(const MixtureInstance& minst, int t);

PricingAssortment to_pricing_assortment(const PricingInstance& pinst, const BitVec& flat);

// x^sigma with the convention 0^sigma = 0 for sigma >= 0 (an empty nest
// contributes nothing). Positive arguments go through exp(sigma * ln x).
double nest_pow(double w, double sigma);

// Simulates the two-stage choice process (nest by W^sigma share, then product
// or no-purchase within the nest) and returns counts: index i < m for product
// i, index m for no-purchase.
std::vector<std::uint64_t> simulate_choice_counts(const Instance& inst, const Assortment& x,
                                                  std::uint64_t samples, std::uint64_t seed);

}  // namespace cnl
