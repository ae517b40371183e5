#ifndef UNIQD_KDTREE_HPP
#define UNIQD_KDTREE_HPP

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <unordered_map>
#include <limits>
#include <utility>
#include <vector>

namespace uniqd {

/// k-d tree over low-dimensional points with stable 64-bit ids.
/// Insertions go to a flat buffer scanned linearly; the tree is rebuilt
/// once the buffer or the tombstone count grows past a fraction of the
/// indexed size. Queries therefore always match brute force exactly.
class KdTree {
public:
    using Point = Eigen::VectorXd;

    explicit KdTree(int dim) : _dim(dim) {}

    int dim() const { return _dim; }
    std::size_t size() const { return _points.size() - _n_removed; }

    void insert(std::uint64_t id, const Point& p);
    void remove(std::uint64_t id);
    void clear();

    /// Distances (and ids) of the min(k, size) nearest points, ascending;
    /// ties broken by ascending id.
    std::vector<std::pair<double, std::uint64_t>> knn(const Point& query, int k) const;

    /// Nearest point, or {inf, 0} when empty.
    std::pair<double, std::uint64_t> nearest(const Point& query) const;

private:
    struct Node {
        int axis = 0;
        std::size_t point = 0;  // index into _points
        int left = -1, right = -1;
    };

    struct Record {
        std::uint64_t id;
        Point p;
        bool alive;
    };

    void rebuild();
    int build(std::vector<std::size_t>& idx, int lo, int hi, int depth);

    // Bounded max-heap of candidates keyed by (distance, id).
    struct Best {
        explicit Best(int k) : k(k) {}
        int k;
        std::vector<std::pair<double, std::uint64_t>> heap;
        void offer(double d, std::uint64_t id);
        double worst() const
        {
            return static_cast<int>(heap.size()) < k ? std::numeric_limits<double>::infinity()
                                                     : heap.front().first;
        }
    };

    void search(int node, const Point& query, Best& best) const;

    int _dim;
    std::vector<Record> _points;
    std::unordered_map<std::uint64_t, std::size_t> _slot_of;
    std::vector<Node> _nodes;
    int _root = -1;
    std::vector<std::size_t> _pending;  // live points not yet in the tree
    std::size_t _n_removed = 0;
    std::size_t _indexed = 0;  // points covered by the current tree
};

}  // namespace uniqd

#endif
