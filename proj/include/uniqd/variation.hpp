#ifndef UNIQD_VARIATION_HPP
#define UNIQD_VARIATION_HPP

#include "uniqd/container.hpp"
#include "uniqd/core.hpp"

#include <vector>

namespace uniqd {

struct MutationParams {
    double eta = 10.0;
    double rate = 0.3;
    double low = -1.0;
    double high = 1.0;
};

/// Polynomial-mutation perturbation for a uniform draw u in [0, 1).
double polynomial_delta(double u, double eta);

/// Per-gene polynomial mutation followed by clamping to the gene bounds.
Genotype polynomial_mutate(const Genotype& genotype, const MutationParams& params, Rng& rng);

/// n uniform draws with replacement from the container entries.
std::vector<Genotype> select_uniform(const Container& container, int n, Rng& rng);

}  // namespace uniqd

#endif
