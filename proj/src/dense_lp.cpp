#include "dense_lp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace eot::detail {

// Tableau phase-one simplex with Bland's rule. Rows are flipped so the
// right-hand side is nonnegative; one artificial slack per row then forms
// the starting basis.
PhaseOneResult phase_one_simplex(const std::vector<double>& a, int rows, int cols,
                                 const std::vector<double>& b) {
    if (static_cast<int>(a.size()) != rows * cols || static_cast<int>(b.size()) != rows)
        throw std::invalid_argument("phase_one_simplex: shape mismatch");

    const int width = cols + rows + 1;  // x columns, slack columns, rhs
    std::vector<double> t(static_cast<std::size_t>(rows + 1) * width, 0.0);
    auto at = [&](int r, int c) -> double& { return t[static_cast<std::size_t>(r) * width + c]; };
    std::vector<double> flip(rows, 1.0);

    double scale = 1.0;
    for (double v : a) scale = std::max(scale, std::abs(v));
    for (double v : b) scale = std::max(scale, std::abs(v));
    const double tol = 1e-11 * scale;

    for (int r = 0; r < rows; ++r) {
        flip[r] = b[r] >= 0.0 ? 1.0 : -1.0;
        for (int c = 0; c < cols; ++c) at(r, c) = flip[r] * a[static_cast<std::size_t>(r) * cols + c];
        at(r, cols + r) = 1.0;
        at(r, width - 1) = flip[r] * b[r];
    }
    // Objective row: reduced costs for min sum of slacks.
    for (int c = 0; c < width; ++c) {
        double s = 0.0;
        for (int r = 0; r < rows; ++r) s += at(r, c);
        at(rows, c) = (c >= cols && c < cols + rows ? 1.0 : 0.0) - s;
    }

    std::vector<int> basis(rows);
    for (int r = 0; r < rows; ++r) basis[r] = cols + r;

    const long max_pivots = 60L * (cols + rows) + 2000;
    for (long pivot = 0; pivot < max_pivots; ++pivot) {
        int enter = -1;
        for (int c = 0; c < cols + rows; ++c) {
            if (at(rows, c) < -tol) {
                enter = c;
                break;  // Bland: lowest index
            }
        }
        if (enter < 0) break;
        int leave = -1;
        double best_ratio = 0.0;
        for (int r = 0; r < rows; ++r) {
            if (at(r, enter) > tol) {
                const double ratio = at(r, width - 1) / at(r, enter);
                if (leave < 0 || ratio < best_ratio - 1e-15 ||
                    (std::abs(ratio - best_ratio) <= 1e-15 && basis[r] < basis[leave])) {
                    leave = r;
                    best_ratio = ratio;
                }
            }
        }
        if (leave < 0) break;  // unbounded cannot happen: objective >= 0
        const double pv = at(leave, enter);
        for (int c = 0; c < width; ++c) at(leave, c) /= pv;
        for (int r = 0; r <= rows; ++r) {
            if (r == leave) continue;
            const double f = at(r, enter);
            if (f == 0.0) continue;
            for (int c = 0; c < width; ++c) at(r, c) -= f * at(leave, c);
        }
        basis[leave] = enter;
    }

    PhaseOneResult out;
    out.x.assign(cols, 0.0);
    double violation = 0.0;
    for (int r = 0; r < rows; ++r) {
        if (basis[r] < cols)
            out.x[basis[r]] = at(r, width - 1);
        else
            violation += at(r, width - 1);
    }
    out.violation = violation;
    out.feasible = violation <= 1e-9 * scale * std::max(rows, 1);
    if (!out.feasible) {
        out.farkas.assign(rows, 0.0);
        for (int r = 0; r < rows; ++r) out.farkas[r] = flip[r] * (1.0 - at(rows, cols + r));
    }
    return out;
}

}  // namespace eot::detail
