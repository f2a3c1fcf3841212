#include "ldls/projection.hpp"

#include <cmath>

namespace ldls {

namespace {
constexpr double kMinHomogeneousScale = 1e-12;
}

std::optional<std::pair<int, int>> snap_to_pixel(double u, double v, int width, int height) {
    if (!std::isfinite(u) || !std::isfinite(v)) return std::nullopt;
    // std::round is half-away-from-zero.
    const double col = std::round(u);
    const double row = std::round(v);
    if (col < 0.0 || row < 0.0 || col >= width || row >= height) return std::nullopt;
    return std::pair{static_cast<int>(col), static_cast<int>(row)};
}

ProjectedPoints project_points(const PointCloud& cloud, const CameraCalibration& calib) {
    const auto& P = calib.projection();
    ProjectedPoints out;
    out.width = calib.width();
    out.height = calib.height();
    out.points.reserve(cloud.size());
    for (const auto& p : cloud.points()) {
        const double hu = P[0] * p.x + P[1] * p.y + P[2] * p.z + P[3];
        const double hv = P[4] * p.x + P[5] * p.y + P[6] * p.z + P[7];
        const double hw = P[8] * p.x + P[9] * p.y + P[10] * p.z + P[11];
        ProjectedPoint pp;
        pp.depth = hw;
        if (std::abs(hw) < kMinHomogeneousScale) {
            out.points.push_back(pp);
            continue;
        }
        pp.u = hu / hw;
        pp.v = hv / hw;
        pp.in_fov = hw > 0.0 && snap_to_pixel(pp.u, pp.v, out.width, out.height).has_value();
        out.points.push_back(pp);
    }
    return out;
}

std::vector<std::size_t> fov_indices(const ProjectedPoints& projected) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < projected.points.size(); ++i) {
        if (projected.points[i].in_fov) idx.push_back(i);
    }
    return idx;
}

}  // namespace ldls
