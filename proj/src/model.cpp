#include "cnl/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "cnl/errors.hpp"
#include "cnl/kernels.hpp"
#include "cnl/rng.hpp"

namespace cnl {

namespace {

constexpr double kAlphaRowTol = 1e-9;

void require(bool cond, const std::string& msg) {
    if (!cond) throw InputError(msg);
}

}  // namespace

bool Instance::standard_regime() const {
    return std::all_of(sigma.begin(), sigma.end(), [](double s) { return s >= 0.0 && s <= 1.0; });
}

void Instance::validate() const {
    require(m >= 0 && N >= 1, "instance needs at least one nest");
    require(static_cast<int>(r.size()) == m && static_cast<int>(v.size()) == m,
            "r and v must have length m");
    require(static_cast<int>(sigma.size()) == N && static_cast<int>(v0.size()) == N,
            "sigma and v0 must have length N");
    require(alpha.size() == static_cast<std::size_t>(m) * N, "alpha must be m x N");
    for (int i = 0; i < m; ++i) {
        require(r[i] > 0.0, "revenues must be positive");
        require(v[i] > 0.0, "preference weights must be positive");
        double row = 0.0;
        for (int n = 0; n < N; ++n) {
            require(alpha_at(i, n) >= 0.0, "allocation fractions must be non-negative");
            row += alpha_at(i, n);
        }
        require(std::abs(row - 1.0) <= kAlphaRowTol, "allocation fractions of a product must sum to 1");
    }
    double v0_total = 0.0;
    for (int n = 0; n < N; ++n) {
        require(sigma[n] >= 0.0, "dissimilarity parameters must be non-negative");
        require(v0[n] >= 0.0, "no-purchase weights must be non-negative");
        v0_total += v0[n];
    }
    require(v0_total > 0.0, "total no-purchase weight must be positive");
}

void PricingInstance::validate() const {
    require(m >= 0 && N >= 1 && L >= 1, "pricing instance needs at least one nest and one price level");
    require(static_cast<int>(sigma.size()) == N && static_cast<int>(v0.size()) == N,
            "sigma and v0 must have length N");
    require(alpha.size() == static_cast<std::size_t>(m) * N, "alpha must be m x N");
    require(static_cast<int>(p.size()) == m && static_cast<int>(v.size()) == m,
            "p and v must have m rows");
    for (int i = 0; i < m; ++i) {
        require(static_cast<int>(p[i].size()) == L && static_cast<int>(v[i].size()) == L,
                "p and v rows must have length L");
        for (int l = 0; l < L; ++l) {
            require(p[i][l] > 0.0, "prices must be positive");
            require(v[i][l] > 0.0, "price-level weights must be positive");
        }
    }
    // reuse the base checks through a throwaway expansion
    expand_pricing(*this).inst.validate();
}

void MixtureInstance::validate() const {
    require(T >= 1, "mixture needs at least one customer type");
    require(static_cast<int>(theta.size()) == T, "theta must have length T");
    require(static_cast<int>(v.size()) == T, "v must have T rows");
    double total = 0.0;
    for (int t = 0; t < T; ++t) {
        require(theta[t] >= 0.0, "arrival probabilities must be non-negative");
        total += theta[t];
    }
    require(std::abs(total - 1.0) <= 1e-9, "arrival probabilities must sum to 1");
    for (int t = 0; t < T; ++t) type_instance(*this, t).validate();
}

double nest_pow(double w, double sigma) {
    if (w <= 0.0) return 0.0;
    if (sigma == 0.0) return 1.0;
    if (sigma == 1.0) return w;
    return std::exp(sigma * std::log(w));
}

Evaluator::Evaluator(const Instance& inst) : inst_(&inst) {
    inst.validate();
    wcol_.assign(inst.N, std::vector<double>(inst.m));
    rcol_.assign(inst.N, std::vector<double>(inst.m));
    for (int n = 0; n < inst.N; ++n) {
        for (int i = 0; i < inst.m; ++i) {
            double av = inst.alpha_at(i, n) * inst.v[i];
            wcol_[n][i] = av;
            rcol_[n][i] = av * inst.r[i];
        }
    }
}

std::vector<double> Evaluator::nest_weights(const Assortment& x) const {
    if (x.size() != inst_->m) throw InputError("assortment length does not match product count");
    std::vector<double> w(inst_->N);
    for (int n = 0; n < inst_->N; ++n)
        w[n] = inst_->v0[n] + kernels::masked_sum(wcol_[n].data(), x.x.data(), x.x.size());
    return w;
}

Probabilities Evaluator::choice_probabilities(const Assortment& x) const {
    const Instance& inst = *inst_;
    std::vector<double> w = nest_weights(x);
    std::vector<double> pow_s(inst.N), pow_s1(inst.N);
    double den = 0.0;
    for (int n = 0; n < inst.N; ++n) {
        pow_s[n] = nest_pow(w[n], inst.sigma[n]);
        pow_s1[n] = w[n] > 0.0 ? pow_s[n] / w[n] : 0.0;
        den += pow_s[n];
    }
    if (den <= 0.0) throw InputError("degenerate instance: no nest has positive aggregate weight");
    Probabilities probs;
    probs.per_product.assign(inst.m, 0.0);
    for (int i = 0; i < inst.m; ++i) {
        if (!x.x[i]) continue;
        double num = 0.0;
        for (int n = 0; n < inst.N; ++n)
            num += pow_s1[n] * wcol_[n][i];
        probs.per_product[i] = num / den;
    }
    double p0 = 0.0;
    for (int n = 0; n < inst.N; ++n)
        p0 += pow_s1[n] * inst.v0[n];
    probs.no_purchase = p0 / den;
    return probs;
}

double Evaluator::expected_revenue(const Assortment& x) const {
    const Instance& inst = *inst_;
    std::vector<double> w = nest_weights(x);
    double num = 0.0, den = 0.0;
    for (int n = 0; n < inst.N; ++n) {
        double ps = nest_pow(w[n], inst.sigma[n]);
        den += ps;
        if (w[n] > 0.0)
            num += ps / w[n] * kernels::masked_sum(rcol_[n].data(), x.x.data(), x.x.size());
    }
    if (den <= 0.0) throw InputError("degenerate instance: no nest has positive aggregate weight");
    return num / den;
}

std::vector<double> nest_weights(const Instance& inst, const Assortment& x) {
    return Evaluator(inst).nest_weights(x);
}

Probabilities choice_probabilities(const Instance& inst, const Assortment& x) {
    return Evaluator(inst).choice_probabilities(x);
}

double expected_revenue(const Instance& inst, const Assortment& x) {
    return Evaluator(inst).expected_revenue(x);
}

PricingExpansion expand_pricing(const PricingInstance& pinst) {
    PricingExpansion out;
    Instance& e = out.inst;
    e.m = pinst.m * pinst.L;
    e.N = pinst.N;
    e.sigma = pinst.sigma;
    e.v0 = pinst.v0;
    e.r.resize(e.m);
    e.v.resize(e.m);
    e.alpha.resize(static_cast<std::size_t>(e.m) * e.N);
    out.groups.assign(pinst.m, {});
    for (int i = 0; i < pinst.m; ++i) {
        for (int l = 0; l < pinst.L; ++l) {
            int j = i * pinst.L + l;
            out.groups[i].push_back(j);
            e.r[j] = pinst.p[i][l];
            e.v[j] = pinst.v[i][l];
            for (int n = 0; n < pinst.N; ++n)
                e.alpha[static_cast<std::size_t>(j) * e.N + n] = pinst.alpha[static_cast<std::size_t>(i) * pinst.N + n];
        }
    }
    return out;
}

PricingAssortment to_pricing_assortment(const PricingInstance& pinst, const BitVec& flat) {
    if (static_cast<int>(flat.size()) != pinst.m * pinst.L)
        throw InputError("flat pricing vector has wrong length");
    PricingAssortment out = PricingAssortment::none(pinst.m, pinst.L);
    for (int i = 0; i < pinst.m; ++i)
        for (int l = 0; l < pinst.L; ++l)
            out.x[i][l] = flat[static_cast<std::size_t>(i) * pinst.L + l];
    return out;
}

double pricing_expected_revenue(const PricingInstance& pinst, const PricingAssortment& x) {
    pinst.validate();
    if (static_cast<int>(x.x.size()) != pinst.m)
        throw InputError("pricing assortment has wrong number of rows");
    BitVec flat(static_cast<std::size_t>(pinst.m) * pinst.L, 0);
    for (int i = 0; i < pinst.m; ++i) {
        if (static_cast<int>(x.x[i].size()) != pinst.L)
            throw InputError("pricing assortment row has wrong length");
        int offered = 0;
        for (int l = 0; l < pinst.L; ++l) {
            offered += x.x[i][l] ? 1 : 0;
            flat[static_cast<std::size_t>(i) * pinst.L + l] = x.x[i][l];
        }
        if (offered > 1) throw InputError("a product may be offered at one price only");
    }
    PricingExpansion expanded = expand_pricing(pinst);
    return expected_revenue(expanded.inst, Assortment{flat});
}

Instance type_instance(const MixtureInstance& minst, int t) {
    Instance inst;
    inst.m = minst.m;
    inst.N = minst.N;
    inst.r = minst.r;
    inst.v = minst.v[t];
    inst.alpha = minst.alpha;
    inst.sigma = minst.sigma;
    inst.v0 = minst.v0;
    return inst;
}

double mixture_expected_revenue(const MixtureInstance& minst, const Assortment& x) {
    minst.validate();
    double total = 0.0;
    for (int t = 0; t < minst.T; ++t)
        total += minst.theta[t] * expected_revenue(type_instance(minst, t), x);
    return total;
}

std::vector<std::uint64_t> simulate_choice_counts(const Instance& inst, const Assortment& x,
                                                  std::uint64_t samples, std::uint64_t seed) {
    Evaluator eval(inst);
    std::vector<double> w = eval.nest_weights(x);

    // first-stage distribution over nests with positive mass
    std::vector<double> nest_cdf;
    std::vector<int> nest_of;
    double den = 0.0;
    for (int n = 0; n < inst.N; ++n) {
        double mass = nest_pow(w[n], inst.sigma[n]);
        if (mass <= 0.0) continue;
        den += mass;
        nest_cdf.push_back(den);
        nest_of.push_back(n);
    }
    if (den <= 0.0) throw InputError("degenerate instance: no nest has positive aggregate weight");

    // second stage per nest: offered products then the no-purchase slot
    struct NestTable {
        std::vector<double> cdf;
        std::vector<int> item;  // product index, or -1 for no-purchase
    };
    std::vector<NestTable> tables(inst.N);
    for (int n = 0; n < inst.N; ++n) {
        NestTable& tab = tables[n];
        double acc = 0.0;
        for (int i = 0; i < inst.m; ++i) {
            double mass = x.x[i] ? eval.weight_col(n)[i] : 0.0;
            if (mass <= 0.0) continue;
            acc += mass;
            tab.cdf.push_back(acc);
            tab.item.push_back(i);
        }
        if (inst.v0[n] > 0.0) {
            acc += inst.v0[n];
            tab.cdf.push_back(acc);
            tab.item.push_back(-1);
        }
    }

    std::vector<std::uint64_t> counts(static_cast<std::size_t>(inst.m) + 1, 0);
    Rng rng(seed);
    for (std::uint64_t s = 0; s < samples; ++s) {
        double u1 = rng.uniform01() * den;
        std::size_t slot = 0;
        while (slot + 1 < nest_cdf.size() && u1 > nest_cdf[slot]) ++slot;
        int n = nest_of[slot];
        const NestTable& tab = tables[n];
        double u2 = rng.uniform01() * w[n];
        auto it = std::lower_bound(tab.cdf.begin(), tab.cdf.end(), u2);
        std::size_t idx = std::min<std::size_t>(static_cast<std::size_t>(it - tab.cdf.begin()),
                                                tab.cdf.size() - 1);
        int item = tab.item[idx];
        ++counts[item < 0 ? static_cast<std::size_t>(inst.m) : static_cast<std::size_t>(item)];
    }
    return counts;
}

}  // namespace cnl
