#include "ldls/types.hpp"

#include <cmath>

#include "ldls/error.hpp"

namespace ldls {

PointCloud::PointCloud(std::vector<Point3> points, std::optional<std::vector<float>> intensity)
    : points_(std::move(points)), intensity_(std::move(intensity)) {
    for (std::size_t i = 0; i < points_.size(); ++i) {
        const auto& p = points_[i];
        if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z)) {
            throw DataError("point " + std::to_string(i) + " has a non-finite coordinate");
        }
    }
    if (intensity_ && intensity_->size() != points_.size()) {
        throw DataError("intensity channel has " + std::to_string(intensity_->size()) +
                        " values for " + std::to_string(points_.size()) + " points");
    }
}

CameraCalibration::CameraCalibration(const Matrix34& projection, int image_width, int image_height)
    : projection_(projection), width_(image_width), height_(image_height) {
    for (double v : projection_) {
        if (!std::isfinite(v)) throw DataError("projection matrix has a non-finite entry");
    }
    if (width_ <= 0 || height_ <= 0) {
        throw DataError("image dimensions must be positive");
    }
}

MaskSet::MaskSet(int width, int height, std::vector<MaskInstance> instances)
    : width_(width), height_(height), instances_(std::move(instances)) {
    if (width_ <= 0 || height_ <= 0) throw DataError("mask image dimensions must be positive");
    for (std::size_t k = 0; k < instances_.size(); ++k) {
        const auto& inst = instances_[k];
        const auto m = static_cast<InstanceId>(k + 1);
        if (inst.instance_index != m) {
            throw DataError("mask instances must be indexed 1..M in order; position " +
                            std::to_string(m) + " has index " +
                            std::to_string(inst.instance_index));
        }
        if (inst.class_id < 1) {
            throw DataError("instance " + std::to_string(m) + " has class_id " +
                            std::to_string(inst.class_id) + " (0 is reserved for background)");
        }
        if (inst.mask.size() != pixel_count()) {
            throw DataError("instance " + std::to_string(m) + " mask has " +
                            std::to_string(inst.mask.size()) + " pixels, expected " +
                            std::to_string(pixel_count()));
        }
        if (inst.score && !(*inst.score >= 0.0 && *inst.score <= 1.0)) {
            throw DataError("instance " + std::to_string(m) + " score outside [0,1]");
        }
    }
}

void DiffusionParams::validate() const {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw DataError("lambda must be positive");
    if (k_neighbors < 1) throw DataError("k_neighbors must be >= 1");
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw DataError("sigma must be positive");
    if (box_size < 1 || box_size % 2 == 0) throw DataError("box_size must be a positive odd integer");
    if (max_iters < 1) throw DataError("max_iters must be >= 1");
    if (!(tolerance >= 0.0)) throw DataError("tolerance must be nonnegative");
}

void recount_instances(SegmentationResult& result) {
    for (auto& [id, info] : result.instance_table) info.point_count = 0;
    for (InstanceId id : result.instance_ids) {
        if (id == 0) continue;
        auto it = result.instance_table.find(id);
        if (it == result.instance_table.end()) {
            throw DataError("label " + std::to_string(id) + " missing from instance table");
        }
        ++it->second.point_count;
    }
    std::erase_if(result.instance_table, [](const auto& kv) { return kv.second.point_count == 0; });
}

}  // namespace ldls
