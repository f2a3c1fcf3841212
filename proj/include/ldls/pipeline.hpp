#pragma once

#include <span>
#include <string>
#include <vector>

#include "ldls/types.hpp"

namespace ldls {

enum class LabelingMode {
    kDiffusion,         // full graph diffusion
    kDirectProjection,  // label each point by the mask its projection lands in
};

struct PipelineOptions {
    DiffusionParams params;
    LabelingMode mode = LabelingMode::kDiffusion;
};

struct StageTiming {
    std::string stage;
    double seconds = 0.0;
};

struct PipelineOutput {
    SegmentationResult result;
    std::vector<StageTiming> timings;
};

/// Projection, graph construction, diffusion, argmax labeling and (optionally)
/// outlier removal for one frame. Mask and calibration image sizes must agree.
PipelineOutput segment_frame(const PointCloud& cloud, const CameraCalibration& calib,
                             const MaskSet& masks, const PipelineOptions& options = {});

/// Baseline without diffusion: each in-view point takes the lowest-index mask
/// covering its rounded projection, or background.
SegmentationResult direct_projection_labels(const ProjectedPoints& projected,
                                            std::span<const std::size_t> fov,
                                            const MaskSet& masks);

}  // namespace ldls
