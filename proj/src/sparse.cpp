#include "ldls/sparse.hpp"

#include <algorithm>
#include <cassert>

namespace ldls {

void CsrMatrix::push_row(std::span<const std::uint32_t> cols_in, std::span<const double> vals_in) {
    assert(cols_in.size() == vals_in.size());
    col_idx.insert(col_idx.end(), cols_in.begin(), cols_in.end());
    values.insert(values.end(), vals_in.begin(), vals_in.end());
    row_ptr.push_back(values.size());
    ++rows;
}

double CsrMatrix::row_sum(std::size_t r) const {
    double s = 0.0;
    for (double v : row_values(r)) s += v;
    return s;
}

void CsrMatrix::multiply_dense(std::span<const double> in, std::size_t width,
                               std::vector<double>& out) const {
    assert(in.size() == cols * width);
    out.assign(rows * width, 0.0);
    for (std::size_t r = 0; r < rows; ++r) {
        double* dst = out.data() + r * width;
        for (std::size_t e = row_ptr[r]; e < row_ptr[r + 1]; ++e) {
            const double w = values[e];
            const double* src = in.data() + static_cast<std::size_t>(col_idx[e]) * width;
            for (std::size_t c = 0; c < width; ++c) dst[c] += w * src[c];
        }
    }
}

}  // namespace ldls
