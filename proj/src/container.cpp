#include "uniqd/container.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace uniqd {

void Container::check_dim(const Eigen::VectorXd& bd) const
{
    if (bd.size() != _bd_dim)
        throw std::invalid_argument("Container: bd dimension mismatch");
}

double Container::novelty(const Eigen::VectorXd& bd) const
{
    check_dim(bd);
    if (_entries.empty()) return std::numeric_limits<double>::infinity();
    const auto nn = _index.knn(bd, _k);
    double sum = 0.0;
    for (const auto& [d, id] : nn) sum += d;
    return sum / static_cast<double>(nn.size());
}

void Container::insert_entry(ContainerEntry entry)
{
    _index.insert(entry.id, entry.bd);
    _entries.push_back(std::move(entry));
}

void Container::erase_by_id(std::uint64_t id)
{
    _index.remove(id);
    auto it = std::find_if(_entries.begin(), _entries.end(),
                           [id](const ContainerEntry& e) { return e.id == id; });
    if (it == _entries.end()) throw std::logic_error("Container: id not found");
    _entries.erase(it);
}

AddResult Container::try_add(ContainerEntry candidate)
{
    check_dim(candidate.bd);
    if (candidate.id == 0 || candidate.id > _next_id) candidate.id = ++_next_id;

    if (_entries.empty()) {
        insert_entry(std::move(candidate));
        return AddResult::Added;
    }
    const auto [dist, nearest_id] = _index.nearest(candidate.bd);
    if (dist > _l) {
        insert_entry(std::move(candidate));
        return AddResult::Added;
    }
    const auto it = std::find_if(_entries.begin(), _entries.end(),
                                 [nid = nearest_id](const ContainerEntry& e) { return e.id == nid; });
    if (candidate.fitness > it->fitness) {
        erase_by_id(nearest_id);
        insert_entry(std::move(candidate));
        return AddResult::ReplacedNearest;
    }
    return AddResult::Rejected;
}

void Container::rebuild(std::vector<ContainerEntry> entries)
{
    // Descending fitness, stable across runs via the insertion id.
    std::sort(entries.begin(), entries.end(), [](const ContainerEntry& a, const ContainerEntry& b) {
        if (a.fitness != b.fitness) return a.fitness > b.fitness;
        return a.id < b.id;
    });
    _entries.clear();
    _index.clear();
    for (auto& e : entries) try_add(std::move(e));
}

double Container::container_update(int target)
{
    if (_entries.empty()) throw std::logic_error("container_update: empty container");
    if (target < 1) throw std::invalid_argument("container_update: target must be >= 1");
    const double ratio = static_cast<double>(_entries.size()) / static_cast<double>(target);
    _l *= std::pow(ratio, 1.0 / static_cast<double>(_bd_dim));
    rebuild(std::move(_entries));
    return _l;
}

void Container::refresh_descriptors(
    const std::function<Eigen::VectorXd(const env::Evaluation&)>& bd_fn)
{
    std::vector<ContainerEntry> entries = std::move(_entries);
    for (auto& e : entries) {
        e.bd = bd_fn(e.evaluation);
        check_dim(e.bd);
    }
    rebuild(std::move(entries));
}

}  // namespace uniqd
