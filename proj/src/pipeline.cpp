#include "ldls/pipeline.hpp"

#include <chrono>

#include "ldls/diffusion.hpp"
#include "ldls/error.hpp"
#include "ldls/graph.hpp"
#include "ldls/projection.hpp"
#include "ldls/refine.hpp"

namespace ldls {

namespace {

class StageClock {
public:
    explicit StageClock(std::vector<StageTiming>& sink) : sink_(sink), last_(Clock::now()) {}

    void lap(std::string stage) {
        const auto now = Clock::now();
        sink_.push_back({std::move(stage), std::chrono::duration<double>(now - last_).count()});
        last_ = now;
    }

private:
    using Clock = std::chrono::steady_clock;
    std::vector<StageTiming>& sink_;
    Clock::time_point last_;
};

}  // namespace

SegmentationResult direct_projection_labels(const ProjectedPoints& projected,
                                            std::span<const std::size_t> fov,
                                            const MaskSet& masks) {
    SegmentationResult result;
    result.instance_ids.assign(projected.size(), 0);
    result.class_ids.assign(projected.size(), 0);
    result.diagnostics.points_in_fov = fov.size();
    for (std::size_t idx : fov) {
        const auto& p = projected.points.at(idx);
        const auto pixel = snap_to_pixel(p.u, p.v, masks.width(), masks.height());
        if (!pixel) continue;
        const std::size_t j = static_cast<std::size_t>(pixel->second) * masks.width() + pixel->first;
        for (const auto& inst : masks.instances()) {
            if (inst.mask[j]) {
                result.instance_ids[idx] = inst.instance_index;
                result.class_ids[idx] = inst.class_id;
                break;
            }
        }
    }
    fill_instance_table(result, masks);
    return result;
}

PipelineOutput segment_frame(const PointCloud& cloud, const CameraCalibration& calib,
                             const MaskSet& masks, const PipelineOptions& options) {
    const auto& params = options.params;
    params.validate();
    if (masks.width() != calib.width() || masks.height() != calib.height()) {
        throw DataError("mask image is " + std::to_string(masks.width()) + "x" +
                        std::to_string(masks.height()) + " but calibration image is " +
                        std::to_string(calib.width()) + "x" + std::to_string(calib.height()));
    }

    PipelineOutput out;
    StageClock clock(out.timings);

    const auto projected = project_points(cloud, calib);
    const auto fov = fov_indices(projected);
    clock.lap("projection");

    if (options.mode == LabelingMode::kDirectProjection) {
        out.result = direct_projection_labels(projected, fov, masks);
        clock.lap("direct_labeling");
        return out;
    }

    if (fov.empty()) {
        out.result.instance_ids.assign(cloud.size(), 0);
        out.result.class_ids.assign(cloud.size(), 0);
        out.result.diagnostics.converged = true;
        return out;
    }

    std::vector<Point3> in_view;
    in_view.reserve(fov.size());
    for (std::size_t idx : fov) in_view.push_back(cloud[idx]);

    const auto knn = build_knn_subgraph(in_view, params.k_neighbors, params.sigma);
    clock.lap("knn_graph");
    const auto pix = build_pixel_subgraph(projected, fov, calib.width(), calib.height(),
                                          params.box_size, params.lambda);
    const auto graph = assemble_normalized(knn, pix);
    clock.lap("pixel_graph");

    auto [field, report] =
        diffuse(graph, init_label_field(masks, fov.size()), params.max_iters, params.tolerance);
    clock.lap("diffusion");

    out.result = assign_labels(field, fov, cloud.size(), masks);
    out.result.diagnostics.iterations_run = report.iterations_run;
    out.result.diagnostics.converged = report.converged;
    clock.lap("labeling");

    if (params.outlier_removal) {
        out.result = remove_outliers(out.result, knn, fov);
        clock.lap("outlier_removal");
    }
    return out;
}

}  // namespace ldls
