#include "ldls/graph.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ldls/error.hpp"
#include "ldls/kdtree.hpp"
#include "ldls/projection.hpp"

namespace ldls {

KnnSubgraph build_knn_subgraph(std::span<const Point3> points, int k, double sigma) {
    if (points.empty()) throw DataError("cannot build a neighbor graph over zero points");
    if (k < 1) throw DataError("k must be >= 1");
    if (!(sigma > 0.0)) throw DataError("sigma must be positive");

    const KdTree tree(points);
    KnnSubgraph g;
    g.n = points.size();
    g.weights = CsrMatrix(points.size());
    g.weights.col_idx.reserve(points.size() * (k + 1));
    g.weights.values.reserve(points.size() * (k + 1));

    std::vector<std::uint32_t> cols;
    std::vector<double> vals;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto neighbors = tree.knn_of(i, static_cast<std::size_t>(k));
        cols.assign(1, static_cast<std::uint32_t>(i));
        vals.assign(1, 1.0);
        for (const auto& nb : neighbors) {
            cols.push_back(nb.index);
            vals.push_back(std::exp(-nb.dist2 / sigma));
        }
        g.weights.push_row(cols, vals);
    }
    return g;
}

PixelSubgraph build_pixel_subgraph(const ProjectedPoints& projected,
                                   std::span<const std::size_t> fov, int width, int height,
                                   int box_size, double lambda) {
    if (box_size < 1 || box_size % 2 == 0) throw DataError("box_size must be a positive odd integer");
    if (!(lambda > 0.0)) throw DataError("lambda must be positive");
    if (width <= 0 || height <= 0) throw DataError("image dimensions must be positive");

    PixelSubgraph g;
    g.n = fov.size();
    g.n_pixels = static_cast<std::size_t>(width) * height;
    g.weights = CsrMatrix(g.n_pixels);
    const int half = box_size / 2;

    std::vector<std::uint32_t> cols;
    std::vector<double> vals;
    for (std::size_t idx : fov) {
        const auto& p = projected.points.at(idx);
        const auto pixel = snap_to_pixel(p.u, p.v, width, height);
        if (!pixel) {
            throw DataError("in-view point " + std::to_string(idx) +
                            " projects outside the image (" + std::to_string(p.u) + ", " +
                            std::to_string(p.v) + ")");
        }
        const auto [cu, cv] = *pixel;
        cols.clear();
        vals.clear();
        for (int v = std::max(0, cv - half); v <= std::min(height - 1, cv + half); ++v) {
            for (int u = std::max(0, cu - half); u <= std::min(width - 1, cu + half); ++u) {
                cols.push_back(static_cast<std::uint32_t>(v * width + u));
                vals.push_back(lambda);
            }
        }
        g.weights.push_row(cols, vals);
    }
    return g;
}

DiffusionGraph assemble_normalized(const KnnSubgraph& knn, const PixelSubgraph& pix) {
    if (knn.n != pix.n) {
        throw DataError("neighbor graph has " + std::to_string(knn.n) +
                        " rows but pixel graph has " + std::to_string(pix.n));
    }
    DiffusionGraph g;
    g.n = knn.n;
    g.n_pixels = pix.n_pixels;
    g.point_block = knn.weights;
    g.pixel_block = pix.weights;

    for (std::size_t r = 0; r < g.n; ++r) {
        const double total = knn.weights.row_sum(r) + pix.weights.row_sum(r);
        if (!(total > 0.0)) throw DataError("row " + std::to_string(r) + " of the graph is empty");
        for (std::size_t e = g.point_block.row_ptr[r]; e < g.point_block.row_ptr[r + 1]; ++e) {
            g.point_block.values[e] /= total;
        }
        for (std::size_t e = g.pixel_block.row_ptr[r]; e < g.pixel_block.row_ptr[r + 1]; ++e) {
            g.pixel_block.values[e] /= total;
        }
    }
    return g;
}

}  // namespace ldls
