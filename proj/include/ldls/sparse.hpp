#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace ldls {

/// Compressed sparse row matrix with double values. Column indices within a
/// row are stored in the order they were appended.
struct CsrMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::size_t> row_ptr{0};
    std::vector<std::uint32_t> col_idx;
    std::vector<double> values;

    CsrMatrix() = default;
    explicit CsrMatrix(std::size_t n_cols) : cols(n_cols) {}

    std::size_t nnz() const { return values.size(); }

    /// Appends a row built from parallel column/value lists.
    void push_row(std::span<const std::uint32_t> cols_in, std::span<const double> vals_in);

    std::span<const std::uint32_t> row_cols(std::size_t r) const {
        return {col_idx.data() + row_ptr[r], row_ptr[r + 1] - row_ptr[r]};
    }
    std::span<const double> row_values(std::size_t r) const {
        return {values.data() + row_ptr[r], row_ptr[r + 1] - row_ptr[r]};
    }
    double row_sum(std::size_t r) const;

    /// out = this * in, where in and out are dense row-major with `width`
    /// columns. out is resized and overwritten.
    void multiply_dense(std::span<const double> in, std::size_t width,
                        std::vector<double>& out) const;
};

}  // namespace ldls
