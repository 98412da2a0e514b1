#pragma once

#include <cstdint>
#include <string>

#include "cnl/io.hpp"

namespace cnl {

enum class GenVariant { assort, pricing, mixture };

// Knobs of the random-instance protocol. gamma_overlap is the average number
// of nests a product belongs to; products are assigned once each and then
// ceil((gamma-1) m) resampled copies are spread over the nests, never twice
// into the same nest.
struct GenSpec {
    std::uint64_t seed = 0;
    int m = 20;
    int N = 5;
    double sigma_bar = 0.75;      // sigma_n ~ U[0.25, sigma_bar]
    double gamma_overlap = 1.2;
    GenVariant variant = GenVariant::assort;
    int levels = 2;  // pricing
    int types = 2;   // mixture

    void validate() const;
    std::string id() const;  // stable label for reports
};

// r_i = u_i^2 X_i and v_i = (1 - u_i) Y_i with u_i in (0,1),
// X_i, Y_i in [0.1, 10]; v0 = 1 per nest; constraints are the total cap
// ceil(0.5 m) plus per-nest caps ceil(0.8 |S_n|). Deterministic per seed.
InstanceBundle generate_assortment(const GenSpec& spec);

// p_il = l alpha_i + 0.5 and v_il = exp(mu_i - eta_i p_il), mu_i in [-1, 1],
// eta_i, alpha_i in (0, 1); sigma_n ~ U[0.25, 0.75].
InstanceBundle generate_pricing(const GenSpec& spec);

// Shared u_i, X_i, r_i; per-type Y_ti in [0.1, 10]; theta sampled uniformly
// then normalized.
InstanceBundle generate_mixture(const GenSpec& spec);

InstanceBundle generate(const GenSpec& spec);

}  // namespace cnl
