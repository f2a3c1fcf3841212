#include "ldls/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ldls/error.hpp"

namespace ldls {

namespace {

constexpr double kTieEpsilon = 1e-9;

// Hungarian algorithm (shortest augmenting path with potentials) on a square
// cost matrix; minimizes total cost. Returns row -> column.
std::vector<int> hungarian_min_cost(const std::vector<std::vector<double>>& cost) {
    const int n = static_cast<int>(cost.size());
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            const int i0 = p[j0];
            double delta = inf;
            int j1 = 0;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<int> row_to_col(n, -1);
    for (int j = 1; j <= n; ++j) {
        if (p[j] != 0) row_to_col[p[j] - 1] = j - 1;
    }
    return row_to_col;
}

// Best total over the sub-matrix of active rows and columns.
double best_total(const std::vector<std::vector<double>>& w, const std::vector<int>& rows,
                  const std::vector<int>& cols) {
    if (rows.empty() || cols.empty()) return 0.0;
    const std::size_t n = std::max(rows.size(), cols.size());
    std::vector<std::vector<double>> cost(n, std::vector<double>(n, 0.0));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < cols.size(); ++c) cost[r][c] = -w[rows[r]][cols[c]];
    }
    const auto assign = hungarian_min_cost(cost);
    double total = 0.0;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const int c = assign[r];
        if (c >= 0 && static_cast<std::size_t>(c) < cols.size()) total += w[rows[r]][cols[c]];
    }
    return total;
}

std::size_t column_count(const std::vector<std::vector<double>>& w) {
    const std::size_t m = w.empty() ? 0 : w.front().size();
    for (const auto& row : w) {
        if (row.size() != m) throw DataError("assignment weight matrix is ragged");
        for (double x : row) {
            if (!(x >= 0.0) || !std::isfinite(x)) {
                throw DataError("assignment weights must be finite and nonnegative");
            }
        }
    }
    return m;
}

}  // namespace

double max_weight_total(const std::vector<std::vector<double>>& weights) {
    const std::size_t m = column_count(weights);
    std::vector<int> rows(weights.size()), cols(m);
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = static_cast<int>(i);
    for (std::size_t j = 0; j < m; ++j) cols[j] = static_cast<int>(j);
    return best_total(weights, rows, cols);
}

std::vector<int> max_weight_assignment(const std::vector<std::vector<double>>& weights) {
    const std::size_t m = column_count(weights);
    const std::size_t n = weights.size();
    std::vector<int> result(n, -1);
    if (n == 0 || m == 0) return result;

    std::vector<int> cols(m);
    for (std::size_t j = 0; j < m; ++j) cols[j] = static_cast<int>(j);
    std::vector<int> rows(n);
    for (std::size_t i = 0; i < n; ++i) rows[i] = static_cast<int>(i);
    const double optimum = best_total(weights, rows, cols);

    // Fix rows in order, each to the smallest column (or none) that still
    // admits an optimal completion.
    double fixed = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::vector<int> rest(rows.begin() + static_cast<std::ptrdiff_t>(i) + 1, rows.end());
        bool placed = false;
        for (std::size_t c = 0; c < cols.size() && !placed; ++c) {
            const double w = weights[i][cols[c]];
            if (w <= 0.0) continue;
            std::vector<int> remaining = cols;
            remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(c));
            if (fixed + w + best_total(weights, rest, remaining) >= optimum - kTieEpsilon) {
                result[i] = cols[c];
                fixed += w;
                cols = std::move(remaining);
                placed = true;
            }
        }
    }
    return result;
}

}  // namespace ldls
