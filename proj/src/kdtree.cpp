#include "ldls/kdtree.hpp"

#include <algorithm>
#include <array>
#include <queue>

namespace ldls {

namespace {

constexpr std::uint32_t kLeafSize = 12;

double coord(const Point3& p, int axis) {
    return axis == 0 ? p.x : (axis == 1 ? p.y : p.z);
}

double squared_distance(const Point3& a, const Point3& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    const double dz = a.z - b.z;
    return dx * dx + dy * dy + dz * dz;
}

bool closer(const Neighbor& a, const Neighbor& b) {
    return a.dist2 < b.dist2 || (a.dist2 == b.dist2 && a.index < b.index);
}

}  // namespace

KdTree::KdTree(std::span<const Point3> points) : points_(points), order_(points.size()) {
    for (std::uint32_t i = 0; i < order_.size(); ++i) order_[i] = i;
    if (!order_.empty()) {
        nodes_.reserve(2 * (order_.size() / kLeafSize + 1));
        build(0, static_cast<std::uint32_t>(order_.size()));
    }
}

std::int32_t KdTree::build(std::uint32_t begin, std::uint32_t end) {
    const auto id = static_cast<std::int32_t>(nodes_.size());
    nodes_.push_back(Node{begin, end});
    if (end - begin <= kLeafSize) return id;

    // Split on the axis of widest spread.
    std::array<double, 3> lo{}, hi{};
    for (int a = 0; a < 3; ++a) {
        lo[a] = hi[a] = coord(points_[order_[begin]], a);
    }
    for (std::uint32_t i = begin; i < end; ++i) {
        for (int a = 0; a < 3; ++a) {
            const double c = coord(points_[order_[i]], a);
            lo[a] = std::min(lo[a], c);
            hi[a] = std::max(hi[a], c);
        }
    }
    int axis = 0;
    for (int a = 1; a < 3; ++a) {
        if (hi[a] - lo[a] > hi[axis] - lo[axis]) axis = a;
    }
    if (hi[axis] == lo[axis]) return id;  // all coincident: keep as a leaf

    const std::uint32_t mid = begin + (end - begin) / 2;
    std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                     [&](std::uint32_t a, std::uint32_t b) {
                         const double ca = coord(points_[a], axis);
                         const double cb = coord(points_[b], axis);
                         return ca < cb || (ca == cb && a < b);
                     });
    const double split = coord(points_[order_[mid]], axis);
    const auto left = build(begin, mid);
    const auto right = build(mid, end);
    auto& node = nodes_[id];
    node.axis = axis;
    node.split = split;
    node.left = left;
    node.right = right;
    return id;
}

std::vector<Neighbor> KdTree::knn_of(std::size_t query, std::size_t k) const {
    std::vector<Neighbor> result;
    if (k == 0 || nodes_.empty()) return result;
    const Point3& q = points_[query];

    // Max-heap on (dist2, index): top is the current worst kept neighbor.
    std::priority_queue<Neighbor, std::vector<Neighbor>, decltype(&closer)> heap(&closer);

    auto visit = [&](auto&& self, std::int32_t node_id) -> void {
        const Node& node = nodes_[node_id];
        if (node.left < 0) {
            for (std::uint32_t i = node.begin; i < node.end; ++i) {
                const std::uint32_t idx = order_[i];
                if (idx == query) continue;
                const Neighbor cand{idx, squared_distance(q, points_[idx])};
                if (heap.size() < k) {
                    heap.push(cand);
                } else if (closer(cand, heap.top())) {
                    heap.pop();
                    heap.push(cand);
                }
            }
            return;
        }
        const double diff = coord(q, node.axis) - node.split;
        const std::int32_t near = diff < 0.0 ? node.left : node.right;
        const std::int32_t far = diff < 0.0 ? node.right : node.left;
        self(self, near);
        // Equal distance to the plane must still be searched for index ties.
        if (heap.size() < k || diff * diff <= heap.top().dist2) self(self, far);
    };
    visit(visit, 0);

    result.resize(heap.size());
    for (std::size_t i = result.size(); i-- > 0;) {
        result[i] = heap.top();
        heap.pop();
    }
    return result;
}

}  // namespace ldls
