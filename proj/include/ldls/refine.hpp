#pragma once

#include <span>
#include <vector>

#include "ldls/graph.hpp"
#include "ldls/types.hpp"

namespace ldls {

/// Keeps, for every instance, only the largest connected component of its
/// points in the undirected neighbor graph (an edge exists if either point
/// lists the other). Equal-size components resolve to the one holding the
/// lowest point index. `labels` is indexed like the rows of `knn`.
std::vector<InstanceId> remove_outliers(std::span<const InstanceId> labels,
                                        const KnnSubgraph& knn);

/// Same, applied to a full-cloud result whose in-view points are `fov`.
/// Class ids and the instance table are updated to match.
SegmentationResult remove_outliers(const SegmentationResult& result, const KnnSubgraph& knn,
                                   std::span<const std::size_t> fov);

}  // namespace ldls
