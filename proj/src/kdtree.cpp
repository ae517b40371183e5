#include "uniqd/kdtree.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace uniqd {

void KdTree::insert(std::uint64_t id, const Point& p)
{
    if (p.size() != _dim) throw std::invalid_argument("KdTree::insert: dimension mismatch");
    if (_slot_of.count(id)) throw std::invalid_argument("KdTree::insert: duplicate id");
    _points.push_back({id, p, true});
    _slot_of[id] = _points.size() - 1;
    _pending.push_back(_points.size() - 1);
    if (_pending.size() > 64 && _pending.size() * 4 > _indexed) rebuild();
}

void KdTree::remove(std::uint64_t id)
{
    auto it = _slot_of.find(id);
    if (it == _slot_of.end()) throw std::invalid_argument("KdTree::remove: unknown id");
    _points[it->second].alive = false;
    _slot_of.erase(it);
    ++_n_removed;
    if (_n_removed * 4 > _points.size()) rebuild();
}

void KdTree::clear()
{
    _points.clear();
    _slot_of.clear();
    _nodes.clear();
    _pending.clear();
    _root = -1;
    _n_removed = 0;
    _indexed = 0;
}

void KdTree::rebuild()
{
    std::vector<Record> live;
    live.reserve(size());
    for (auto& r : _points)
        if (r.alive) live.push_back(std::move(r));
    _points = std::move(live);
    _slot_of.clear();
    for (std::size_t i = 0; i < _points.size(); ++i) _slot_of[_points[i].id] = i;
    _pending.clear();
    _n_removed = 0;
    _indexed = _points.size();

    _nodes.clear();
    _nodes.reserve(_points.size());
    std::vector<std::size_t> idx(_points.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    _root = idx.empty() ? -1 : build(idx, 0, static_cast<int>(idx.size()), 0);
}

int KdTree::build(std::vector<std::size_t>& idx, int lo, int hi, int depth)
{
    if (lo >= hi) return -1;
    const int axis = depth % _dim;
    const int mid = lo + (hi - lo) / 2;
    std::nth_element(idx.begin() + lo, idx.begin() + mid, idx.begin() + hi,
                     [&](std::size_t a, std::size_t b) {
                         if (_points[a].p[axis] != _points[b].p[axis])
                             return _points[a].p[axis] < _points[b].p[axis];
                         return _points[a].id < _points[b].id;
                     });
    const int node = static_cast<int>(_nodes.size());
    _nodes.push_back({axis, idx[mid], -1, -1});
    const int left = build(idx, lo, mid, depth + 1);
    const int right = build(idx, mid + 1, hi, depth + 1);
    _nodes[node].left = left;
    _nodes[node].right = right;
    return node;
}

void KdTree::Best::offer(double d, std::uint64_t id)
{
    auto cmp = [](const std::pair<double, std::uint64_t>& a,
                  const std::pair<double, std::uint64_t>& b) {
        return a < b;  // max-heap on (distance, id)
    };
    if (static_cast<int>(heap.size()) < k) {
        heap.emplace_back(d, id);
        std::push_heap(heap.begin(), heap.end(), cmp);
    } else if (std::make_pair(d, id) < heap.front()) {
        std::pop_heap(heap.begin(), heap.end(), cmp);
        heap.back() = {d, id};
        std::push_heap(heap.begin(), heap.end(), cmp);
    }
}

void KdTree::search(int node, const Point& query, Best& best) const
{
    if (node < 0) return;
    const Node& n = _nodes[node];
    const Record& rec = _points[n.point];
    if (rec.alive) best.offer((rec.p - query).norm(), rec.id);

    const double diff = query[n.axis] - rec.p[n.axis];
    const int near = diff < 0 ? n.left : n.right;
    const int far = diff < 0 ? n.right : n.left;
    search(near, query, best);
    if (std::abs(diff) <= best.worst()) search(far, query, best);
}

std::vector<std::pair<double, std::uint64_t>> KdTree::knn(const Point& query, int k) const
{
    if (query.size() != _dim) throw std::invalid_argument("KdTree::knn: dimension mismatch");
    Best best(std::min<int>(k, static_cast<int>(size())));
    if (best.k > 0) {
        search(_root, query, best);
        for (std::size_t slot : _pending) {
            const Record& rec = _points[slot];
            if (rec.alive) best.offer((rec.p - query).norm(), rec.id);
        }
    }
    std::sort(best.heap.begin(), best.heap.end());
    return best.heap;
}

std::pair<double, std::uint64_t> KdTree::nearest(const Point& query) const
{
    auto res = knn(query, 1);
    if (res.empty()) return {std::numeric_limits<double>::infinity(), 0};
    return res[0];
}

}  // namespace uniqd
