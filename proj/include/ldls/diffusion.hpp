#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ldls/graph.hpp"
#include "ldls/types.hpp"

namespace ldls {

/// Label likelihoods for M+1 instances (column 0 is background).
///
/// `point_scores` is the point block of every label vector, row-major
/// n x columns. `pixel_labels` is the pixel block, row-major
/// n_pixels x columns with entries in {0,1}; it is fixed for a run.
struct LabelField {
    std::size_t n = 0;
    std::size_t n_pixels = 0;
    std::size_t columns = 1;
    std::vector<double> point_scores;
    std::vector<std::uint8_t> pixel_labels;

    double score(std::size_t point, std::size_t column) const {
        return point_scores[point * columns + column];
    }
};

struct DiffusionReport {
    int iterations_run = 0;
    bool converged = false;
    double max_delta = 0.0;    // largest entry change in the last iteration
    double error_bound = 0.0;  // bound on max |z - z*| after the last iteration
};

/// Zero point scores; pixel j gets 1 in column m when mask m covers it, and 1
/// in column 0 when no mask does.
LabelField init_label_field(const MaskSet& masks, std::size_t n_points);

struct DiffusionOutcome {
    LabelField field;
    DiffusionReport report;
};

/// Iterates z <- A z + B z_pix for all columns at once, for at most
/// `max_iters` steps. Stops early once the distance to the fixed point is
/// provably below `tolerance`: with r the largest row sum of A, the error
/// after a step of size d is at most d * r / (1 - r).
DiffusionOutcome diffuse(const DiffusionGraph& graph, LabelField field, int max_iters,
                         double tolerance);

/// Per-point argmax over columns. Background wins ties with any instance and
/// zero rows; ties among instances go to the lowest index. Points not listed
/// in `fov` are background.
SegmentationResult assign_labels(const LabelField& field, std::span<const std::size_t> fov,
                                 std::size_t n_total, const MaskSet& masks);

/// Fills instance_table from `masks` for the instances present in `result`.
void fill_instance_table(SegmentationResult& result, const MaskSet& masks);

}  // namespace ldls
