#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ldls {

using InstanceId = std::int32_t;  // 0 is background
using ClassId = std::int32_t;     // 0 is background

struct Point3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

/// Lidar points in the sensor frame. Intensity is carried for KITTI records
/// but the segmentation itself only uses geometry.
class PointCloud {
public:
    PointCloud() = default;
    explicit PointCloud(std::vector<Point3> points,
                        std::optional<std::vector<float>> intensity = std::nullopt);

    std::size_t size() const { return points_.size(); }
    bool empty() const { return points_.empty(); }
    const std::vector<Point3>& points() const { return points_; }
    const std::optional<std::vector<float>>& intensity() const { return intensity_; }
    const Point3& operator[](std::size_t i) const { return points_[i]; }

private:
    std::vector<Point3> points_;
    std::optional<std::vector<float>> intensity_;
};

/// Row-major 3x4 matrix taking homogeneous sensor points to homogeneous pixels.
using Matrix34 = std::array<double, 12>;

class CameraCalibration {
public:
    CameraCalibration(const Matrix34& projection, int image_width, int image_height);

    const Matrix34& projection() const { return projection_; }
    int width() const { return width_; }
    int height() const { return height_; }

private:
    Matrix34 projection_;
    int width_;
    int height_;
};

struct ProjectedPoint {
    double u = 0.0;
    double v = 0.0;
    double depth = 0.0;
    bool in_fov = false;
};

struct ProjectedPoints {
    std::vector<ProjectedPoint> points;
    int width = 0;
    int height = 0;

    std::size_t size() const { return points.size(); }
};

struct MaskInstance {
    InstanceId instance_index = 0;
    ClassId class_id = 0;
    std::string class_name;
    std::optional<double> score;
    std::vector<std::uint8_t> mask;  // row-major, width*height, values 0/1

    bool operator==(const MaskInstance&) const = default;
};

/// 2D instance masks for one image. Instance indices are 1..M in order.
class MaskSet {
public:
    MaskSet(int width, int height, std::vector<MaskInstance> instances = {});

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t pixel_count() const { return static_cast<std::size_t>(width_) * height_; }
    std::size_t instance_count() const { return instances_.size(); }
    const std::vector<MaskInstance>& instances() const { return instances_; }
    /// instance m in 1..M
    const MaskInstance& instance(InstanceId m) const { return instances_.at(m - 1); }

    bool operator==(const MaskSet&) const = default;

private:
    int width_;
    int height_;
    std::vector<MaskInstance> instances_;
};

struct DiffusionParams {
    double lambda = 0.001;
    int k_neighbors = 10;
    double sigma = 1.0;
    int box_size = 5;
    int max_iters = 200;
    double tolerance = 1e-5;
    bool outlier_removal = true;

    /// Throws DataError when a field is out of range.
    void validate() const;
};

struct InstanceInfo {
    ClassId class_id = 0;
    std::string class_name;
    std::size_t point_count = 0;

    bool operator==(const InstanceInfo&) const = default;
};

struct Diagnostics {
    int iterations_run = 0;
    bool converged = false;
    std::size_t points_in_fov = 0;

    bool operator==(const Diagnostics&) const = default;
};

struct SegmentationResult {
    std::vector<InstanceId> instance_ids;
    std::vector<ClassId> class_ids;
    std::map<InstanceId, InstanceInfo> instance_table;
    Diagnostics diagnostics;

    std::size_t size() const { return instance_ids.size(); }
    bool operator==(const SegmentationResult&) const = default;
};

/// Recomputes instance_table point counts from the per-point labels. Entries
/// with zero points are dropped.
void recount_instances(SegmentationResult& result);

}  // namespace ldls
