#include "cnl/generate.hpp"

#include <algorithm>
#include <cmath>

#include "cnl/errors.hpp"
#include "cnl/rng.hpp"

namespace cnl {

namespace {

// sub-stream tags; one stream per product (or type) keeps instances stable
// when unrelated parts of the protocol change
enum Stream : std::uint64_t {
    kProductParams = 1,
    kCopies = 2,
    kNestAssign = 3,
    kAlpha = 4,
    kSigma = 5,
    kTypeWeights = 6,
    kTheta = 7,
    kPriceParams = 8,
};

double open_unit(Rng& rng) {
    return std::clamp(rng.uniform01(), 1e-12, 1.0 - 1e-12);
}

// membership[i][n] = 1 iff product i belongs to nest n, built per the overlap
// protocol: every product once, then resampled copies, uniform nest draws
// rejected while the product already sits in that nest.
std::vector<std::vector<std::uint8_t>> assign_nests(const GenSpec& spec) {
    std::vector<int> elements(spec.m);
    for (int i = 0; i < spec.m; ++i) elements[i] = i;
    int copies = static_cast<int>(std::ceil((spec.gamma_overlap - 1.0) * spec.m));
    Rng copy_rng = Rng::stream(spec.seed, kCopies);
    for (int c = 0; c < copies; ++c)
        elements.push_back(static_cast<int>(copy_rng.below(static_cast<std::uint64_t>(spec.m))));

    std::vector<std::vector<std::uint8_t>> member(
        spec.m, std::vector<std::uint8_t>(static_cast<std::size_t>(spec.N), 0));
    std::vector<int> degree(spec.m, 0);
    Rng assign_rng = Rng::stream(spec.seed, kNestAssign);
    for (int i : elements) {
        if (degree[i] >= spec.N) continue;  // already everywhere; drop the copy
        int n;
        do {
            n = static_cast<int>(assign_rng.below(static_cast<std::uint64_t>(spec.N)));
        } while (member[i][n]);
        member[i][n] = 1;
        ++degree[i];
    }
    return member;
}

std::vector<double> draw_alpha(const GenSpec& spec,
                               const std::vector<std::vector<std::uint8_t>>& member) {
    std::vector<double> alpha(static_cast<std::size_t>(spec.m) * spec.N, 0.0);
    Rng rng = Rng::stream(spec.seed, kAlpha);
    for (int i = 0; i < spec.m; ++i) {
        double row = 0.0;
        for (int n = 0; n < spec.N; ++n) {
            if (!member[i][n]) continue;
            double a = open_unit(rng);
            alpha[static_cast<std::size_t>(i) * spec.N + n] = a;
            row += a;
        }
        for (int n = 0; n < spec.N; ++n)
            alpha[static_cast<std::size_t>(i) * spec.N + n] /= row;
    }
    return alpha;
}

std::vector<double> draw_sigma(const GenSpec& spec, double lo, double hi) {
    std::vector<double> sigma(static_cast<std::size_t>(spec.N));
    Rng rng = Rng::stream(spec.seed, kSigma);
    for (int n = 0; n < spec.N; ++n) sigma[n] = rng.uniform(lo, hi);
    return sigma;
}

ConstraintSet standard_constraints(const Instance& inst) {
    ConstraintSet cs(inst.m);
    cs.add_row(total_cardinality(inst.m, default_total_cap(inst.m)));
    for (ConstraintRow& row : per_nest_cardinality(inst)) cs.add_row(std::move(row));
    return cs;
}

}  // namespace

void GenSpec::validate() const {
    if (m < 1 || N < 1 || m < N) throw InputError("generator needs m >= N >= 1");
    if (!(sigma_bar > 0.25 && sigma_bar <= 1.0))
        throw InputError("sigma_bar must lie in (0.25, 1]");
    if (!(gamma_overlap >= 1.0)) throw InputError("overlap gamma must be at least 1");
    if (variant == GenVariant::pricing && levels < 1) throw InputError("pricing needs L >= 1");
    if (variant == GenVariant::mixture && types < 1) throw InputError("mixture needs T >= 1");
}

std::string GenSpec::id() const {
    std::string tag = variant == GenVariant::assort ? "assort"
                      : variant == GenVariant::pricing ? "pricing"
                                                       : "mixture";
    return tag + "-m" + std::to_string(m) + "-n" + std::to_string(N) + "-s" +
           std::to_string(seed);
}

InstanceBundle generate_assortment(const GenSpec& spec) {
    spec.validate();
    InstanceBundle bundle;
    Instance& inst = bundle.base;
    inst.m = spec.m;
    inst.N = spec.N;
    inst.r.resize(spec.m);
    inst.v.resize(spec.m);
    for (int i = 0; i < spec.m; ++i) {
        Rng rng = Rng::stream(spec.seed, kProductParams, static_cast<std::uint64_t>(i));
        double u = open_unit(rng);
        double x_scale = rng.uniform(0.1, 10.0);
        double y_scale = rng.uniform(0.1, 10.0);
        inst.r[i] = u * u * x_scale;
        inst.v[i] = (1.0 - u) * y_scale;
    }
    inst.alpha = draw_alpha(spec, assign_nests(spec));
    inst.sigma = draw_sigma(spec, 0.25, spec.sigma_bar);
    inst.v0.assign(static_cast<std::size_t>(spec.N), 1.0);
    inst.validate();
    bundle.constraints = standard_constraints(inst);
    return bundle;
}

InstanceBundle generate_pricing(const GenSpec& spec) {
    spec.validate();
    PricingInstance pinst;
    pinst.m = spec.m;
    pinst.N = spec.N;
    pinst.L = spec.levels;
    pinst.alpha = draw_alpha(spec, assign_nests(spec));
    pinst.sigma = draw_sigma(spec, 0.25, 0.75);
    pinst.v0.assign(static_cast<std::size_t>(spec.N), 1.0);
    pinst.p.assign(spec.m, std::vector<double>(spec.levels));
    pinst.v.assign(spec.m, std::vector<double>(spec.levels));
    for (int i = 0; i < spec.m; ++i) {
        Rng rng = Rng::stream(spec.seed, kPriceParams, static_cast<std::uint64_t>(i));
        double mu = rng.uniform(-1.0, 1.0);
        double eta = open_unit(rng);
        double step = open_unit(rng);
        for (int l = 0; l < spec.levels; ++l) {
            pinst.p[i][l] = (l + 1) * step + 0.5;
            pinst.v[i][l] = std::exp(mu - eta * pinst.p[i][l]);
        }
    }
    pinst.validate();

    InstanceBundle bundle;
    // base slice: every product at its first price level
    Instance& inst = bundle.base;
    inst.m = spec.m;
    inst.N = spec.N;
    inst.alpha = pinst.alpha;
    inst.sigma = pinst.sigma;
    inst.v0 = pinst.v0;
    inst.r.resize(spec.m);
    inst.v.resize(spec.m);
    for (int i = 0; i < spec.m; ++i) {
        inst.r[i] = pinst.p[i][0];
        inst.v[i] = pinst.v[i][0];
    }
    inst.validate();
    bundle.constraints = standard_constraints(inst);
    bundle.pricing = std::move(pinst);
    return bundle;
}

InstanceBundle generate_mixture(const GenSpec& spec) {
    spec.validate();
    MixtureInstance minst;
    minst.m = spec.m;
    minst.N = spec.N;
    minst.T = spec.types;
    minst.alpha = draw_alpha(spec, assign_nests(spec));
    minst.sigma = draw_sigma(spec, 0.25, spec.sigma_bar);
    minst.v0.assign(static_cast<std::size_t>(spec.N), 1.0);
    minst.r.resize(spec.m);
    std::vector<double> one_minus_u(spec.m);
    for (int i = 0; i < spec.m; ++i) {
        Rng rng = Rng::stream(spec.seed, kProductParams, static_cast<std::uint64_t>(i));
        double u = open_unit(rng);
        double x_scale = rng.uniform(0.1, 10.0);
        minst.r[i] = u * u * x_scale;
        one_minus_u[i] = 1.0 - u;
    }
    minst.v.assign(spec.types, std::vector<double>(spec.m));
    for (int t = 0; t < spec.types; ++t) {
        Rng rng = Rng::stream(spec.seed, kTypeWeights, static_cast<std::uint64_t>(t));
        for (int i = 0; i < spec.m; ++i)
            minst.v[t][i] = one_minus_u[i] * rng.uniform(0.1, 10.0);
    }
    minst.theta.resize(spec.types);
    {
        Rng rng = Rng::stream(spec.seed, kTheta);
        double total = 0.0;
        for (int t = 0; t < spec.types; ++t) {
            minst.theta[t] = open_unit(rng);
            total += minst.theta[t];
        }
        for (int t = 0; t < spec.types; ++t) minst.theta[t] /= total;
    }
    minst.validate();

    InstanceBundle bundle;
    Instance& inst = bundle.base;
    inst.m = spec.m;
    inst.N = spec.N;
    inst.alpha = minst.alpha;
    inst.sigma = minst.sigma;
    inst.v0 = minst.v0;
    inst.r = minst.r;
    inst.v = minst.v[0];  // base slice: type-1 weights
    inst.validate();
    bundle.constraints = standard_constraints(inst);
    bundle.mixture = std::move(minst);
    return bundle;
}

InstanceBundle generate(const GenSpec& spec) {
    switch (spec.variant) {
        case GenVariant::pricing: return generate_pricing(spec);
        case GenVariant::mixture: return generate_mixture(spec);
        case GenVariant::assort: break;
    }
    return generate_assortment(spec);
}

}  // namespace cnl
