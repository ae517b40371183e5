#include "uniqd/variation.hpp"

#include <cmath>
#include <stdexcept>

namespace uniqd {

double polynomial_delta(double u, double eta)
{
    if (u < 0.5) return std::pow(2.0 * u, 1.0 / (eta + 1.0)) - 1.0;
    return 1.0 - std::pow(2.0 * (1.0 - u), 1.0 / (eta + 1.0));
}

Genotype polynomial_mutate(const Genotype& genotype, const MutationParams& params, Rng& rng)
{
    if (params.low >= params.high)
        throw std::invalid_argument("polynomial_mutate: low must be < high");
    Genotype out = genotype;
    const double span = params.high - params.low;
    for (Eigen::Index i = 0; i < out.size(); ++i) {
        if (out[i] < params.low || out[i] > params.high)
            throw std::invalid_argument("polynomial_mutate: gene out of bounds");
        if (rng.uniform01() < params.rate) {
            const double delta = polynomial_delta(rng.uniform01(), params.eta);
            out[i] = std::clamp(out[i] + delta * span, params.low, params.high);
        }
    }
    return out;
}

std::vector<Genotype> select_uniform(const Container& container, int n, Rng& rng)
{
    if (container.empty()) throw std::logic_error("select_uniform: empty container");
    std::vector<Genotype> out;
    out.reserve(n);
    for (int i = 0; i < n; ++i)
        out.push_back(container.entries()[rng.index(container.size())].genotype);
    return out;
}

}  // namespace uniqd
