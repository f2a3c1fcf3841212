#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "ldls/types.hpp"

namespace ldls {

/// Projects every point through the 3x4 camera matrix. Depth is the third
/// homogeneous coordinate before division; points with nonpositive depth or a
/// vanishing homogeneous scale are flagged out of view.
ProjectedPoints project_points(const PointCloud& cloud, const CameraCalibration& calib);

/// Indices of in-view points, ascending.
std::vector<std::size_t> fov_indices(const ProjectedPoints& projected);

/// Integer pixel (col, row) for a continuous coordinate, rounding half away
/// from zero. Empty when the rounded pixel lies outside the image.
std::optional<std::pair<int, int>> snap_to_pixel(double u, double v, int width, int height);

}  // namespace ldls
