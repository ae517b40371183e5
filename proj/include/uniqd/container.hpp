#ifndef UNIQD_CONTAINER_HPP
#define UNIQD_CONTAINER_HPP

#include "uniqd/env.hpp"
#include "uniqd/kdtree.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace uniqd {

struct ContainerEntry {
    Genotype genotype;
    Eigen::VectorXd bd;
    env::Evaluation evaluation;
    double fitness = 0.0;
    std::uint64_t id = 0;  // assigned at first insertion; stable across rebuilds
};

enum class AddResult { Added, ReplacedNearest, Rejected };

/// Unstructured archive: candidates further than the threshold l from all
/// entries are added; closer ones replace their nearest neighbour only on
/// strict fitness improvement.
class Container {
public:
    Container(int bd_dim, double initial_threshold, int k_novelty)
        : _bd_dim(bd_dim), _l(initial_threshold), _k(k_novelty), _index(bd_dim) {}

    int bd_dim() const { return _bd_dim; }
    double threshold() const { return _l; }
    int k_novelty() const { return _k; }
    std::size_t size() const { return _entries.size(); }
    bool empty() const { return _entries.empty(); }
    const std::vector<ContainerEntry>& entries() const { return _entries; }

    /// Mean Euclidean distance to the min(k, size) nearest stored bds;
    /// +infinity on an empty container.
    double novelty(const Eigen::VectorXd& bd) const;

    AddResult try_add(ContainerEntry candidate);

    /// Rescale l toward the target size and rebuild by descending fitness.
    /// Returns the new threshold.
    double container_update(int target);

    /// Recompute every bd from the cached evaluation, then rebuild under
    /// the current threshold.
    void refresh_descriptors(const std::function<Eigen::VectorXd(const env::Evaluation&)>& bd_fn);

private:
    void check_dim(const Eigen::VectorXd& bd) const;
    void rebuild(std::vector<ContainerEntry> entries);
    void insert_entry(ContainerEntry entry);
    void erase_by_id(std::uint64_t id);

    int _bd_dim;
    double _l;
    int _k;
    std::vector<ContainerEntry> _entries;
    KdTree _index;
    std::uint64_t _next_id = 0;
};

}  // namespace uniqd

#endif
