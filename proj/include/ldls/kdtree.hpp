#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ldls/types.hpp"

namespace ldls {

struct Neighbor {
    std::uint32_t index = 0;
    double dist2 = 0.0;
};

/// Exact k-nearest-neighbor search over a fixed point set. Results are
/// ordered by (squared distance, index), so equidistant candidates resolve to
/// the lower index.
class KdTree {
public:
    explicit KdTree(std::span<const Point3> points);

    /// The k nearest points to points[query], excluding query itself.
    std::vector<Neighbor> knn_of(std::size_t query, std::size_t k) const;

private:
    struct Node {
        // Leaves: [begin, end) into order_. Inner nodes: children at left/right.
        std::uint32_t begin = 0;
        std::uint32_t end = 0;
        std::int32_t left = -1;
        std::int32_t right = -1;
        int axis = 0;
        double split = 0.0;
    };

    std::int32_t build(std::uint32_t begin, std::uint32_t end);

    std::span<const Point3> points_;
    std::vector<std::uint32_t> order_;
    std::vector<Node> nodes_;
};

}  // namespace ldls
