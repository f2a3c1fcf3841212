#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ldls/sparse.hpp"
#include "ldls/types.hpp"

namespace ldls {

/// Point-to-point block: row i holds the diagonal (weight 1) followed by its
/// nearest neighbors in (distance, index) order, each weighted by
/// exp(-d^2 / sigma). Indices are positions within the in-view point list.
struct KnnSubgraph {
    std::size_t n = 0;
    CsrMatrix weights;
};

/// Pixel-to-point block: row i holds weight lambda to each pixel in the
/// box around point i's projection, clipped to the image. Pixel columns are
/// row-major (v * width + u).
struct PixelSubgraph {
    std::size_t n = 0;
    std::size_t n_pixels = 0;
    CsrMatrix weights;
};

/// Jointly row-normalized [A | B] of the full diffusion graph. The constant
/// pixel rows [0 I] are implicit: pixel labels never change during diffusion.
struct DiffusionGraph {
    std::size_t n = 0;
    std::size_t n_pixels = 0;
    CsrMatrix point_block;  // A: n x n
    CsrMatrix pixel_block;  // B: n x n_pixels
};

KnnSubgraph build_knn_subgraph(std::span<const Point3> points, int k, double sigma);

/// `fov` selects which projected points become rows, in order. Throws
/// DataError if any selected point snaps outside the image.
PixelSubgraph build_pixel_subgraph(const ProjectedPoints& projected,
                                   std::span<const std::size_t> fov, int width, int height,
                                   int box_size, double lambda);

DiffusionGraph assemble_normalized(const KnnSubgraph& knn, const PixelSubgraph& pix);

}  // namespace ldls
