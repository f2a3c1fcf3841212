#include "ldls/diffusion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ldls/error.hpp"

namespace ldls {

LabelField init_label_field(const MaskSet& masks, std::size_t n_points) {
    LabelField f;
    f.n = n_points;
    f.n_pixels = masks.pixel_count();
    f.columns = masks.instance_count() + 1;
    f.point_scores.assign(f.n * f.columns, 0.0);
    f.pixel_labels.assign(f.n_pixels * f.columns, 0);

    for (const auto& inst : masks.instances()) {
        const auto m = static_cast<std::size_t>(inst.instance_index);
        for (std::size_t j = 0; j < f.n_pixels; ++j) {
            if (inst.mask[j]) f.pixel_labels[j * f.columns + m] = 1;
        }
    }
    for (std::size_t j = 0; j < f.n_pixels; ++j) {
        const auto* row = f.pixel_labels.data() + j * f.columns;
        if (std::none_of(row + 1, row + f.columns, [](std::uint8_t b) { return b != 0; })) {
            f.pixel_labels[j * f.columns] = 1;
        }
    }
    return f;
}

DiffusionOutcome diffuse(const DiffusionGraph& graph, LabelField field, int max_iters,
                         double tolerance) {
    if (graph.n != field.n || graph.n_pixels != field.n_pixels) {
        throw DataError("graph is " + std::to_string(graph.n) + "x" +
                        std::to_string(graph.n_pixels) + " but label field is " +
                        std::to_string(field.n) + "x" + std::to_string(field.n_pixels));
    }
    const std::size_t width = field.columns;

    // Pixel labels are constant, so B * z_pix is computed once.
    std::vector<double> source(field.n * width, 0.0);
    const auto& B = graph.pixel_block;
    for (std::size_t r = 0; r < B.rows; ++r) {
        double* dst = source.data() + r * width;
        for (std::size_t e = B.row_ptr[r]; e < B.row_ptr[r + 1]; ++e) {
            const double w = B.values[e];
            const std::uint8_t* lab = field.pixel_labels.data() + std::size_t{B.col_idx[e]} * width;
            for (std::size_t c = 0; c < width; ++c) {
                if (lab[c]) dst[c] += w;
            }
        }
    }

    // Contraction factor of the point block in the max norm.
    double contraction = 0.0;
    for (std::size_t r = 0; r < graph.point_block.rows; ++r) {
        contraction = std::max(contraction, graph.point_block.row_sum(r));
    }
    auto bound_for = [&](double delta) {
        if (delta == 0.0) return 0.0;
        if (contraction >= 1.0) return std::numeric_limits<double>::infinity();
        return delta * contraction / (1.0 - contraction);
    };

    DiffusionReport report;
    std::vector<double> next;
    for (int it = 0; it < max_iters; ++it) {
        graph.point_block.multiply_dense(field.point_scores, width, next);
        double delta = 0.0;
        for (std::size_t i = 0; i < next.size(); ++i) {
            next[i] += source[i];
            delta = std::max(delta, std::abs(next[i] - field.point_scores[i]));
        }
        field.point_scores.swap(next);
        report.iterations_run = it + 1;
        report.max_delta = delta;
        report.error_bound = bound_for(delta);
        if (report.error_bound < tolerance || delta == 0.0) {
            report.converged = true;
            break;
        }
    }
    return {std::move(field), report};
}

void fill_instance_table(SegmentationResult& result, const MaskSet& masks) {
    result.instance_table.clear();
    for (InstanceId id : result.instance_ids) {
        if (id == 0) continue;
        auto [it, inserted] = result.instance_table.try_emplace(id);
        if (inserted) {
            const auto& inst = masks.instance(id);
            it->second.class_id = inst.class_id;
            it->second.class_name = inst.class_name;
        }
        ++it->second.point_count;
    }
}

SegmentationResult assign_labels(const LabelField& field, std::span<const std::size_t> fov,
                                 std::size_t n_total, const MaskSet& masks) {
    if (fov.size() != field.n) {
        throw DataError("label field has " + std::to_string(field.n) + " rows but " +
                        std::to_string(fov.size()) + " in-view points were given");
    }
    if (field.columns != masks.instance_count() + 1) {
        throw DataError("label field columns do not match the mask set");
    }
    SegmentationResult result;
    result.instance_ids.assign(n_total, 0);
    result.class_ids.assign(n_total, 0);
    result.diagnostics.points_in_fov = fov.size();

    for (std::size_t i = 0; i < field.n; ++i) {
        const double* row = field.point_scores.data() + i * field.columns;
        std::size_t best = 0;
        for (std::size_t c = 1; c < field.columns; ++c) {
            if (row[c] > row[best]) best = c;
        }
        if (best == 0 || row[best] <= 0.0) continue;
        const auto id = static_cast<InstanceId>(best);
        const std::size_t point = fov[i];
        if (point >= n_total) throw DataError("in-view index out of range");
        result.instance_ids[point] = id;
        result.class_ids[point] = masks.instance(id).class_id;
    }
    fill_instance_table(result, masks);
    return result;
}

}  // namespace ldls
