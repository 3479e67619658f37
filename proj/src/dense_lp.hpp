#pragma once

#include <vector>

namespace eot::detail {

// Phase-one simplex for the equality system A x = b, x >= 0 (dense A,
// row-major). Minimizes the total violation sum of slack pairs; the system
// is feasible iff the optimum is (numerically) zero.
struct PhaseOneResult {
    bool feasible = false;
    double violation = 0.0;       // optimal l1 violation
    std::vector<double> x;        // primal point (violation minimizer)
    std::vector<double> farkas;   // dual row y with A^T y <= 0, <b, y> > 0 when infeasible
};

PhaseOneResult phase_one_simplex(const std::vector<double>& a, int rows, int cols,
                                 const std::vector<double>& b);

}  // namespace eot::detail
