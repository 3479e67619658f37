#pragma once

#include <vector>

#include "eot/costs.hpp"
#include "eot/fields.hpp"

namespace eot::detail {

// Joint convex program over a matrix field Lambda and a node measure p:
//
//   minimize    sum_i c(Lambda_i) + <phi, p>
//   subject to  div2(Lambda) - p = rhs,   p >= 0,  sum p = p_total
//
// with c either a sublinear cost (cost != nullptr) or the zero cost on the
// nonnegative identity ray { w I : w >= 0 } (cost == nullptr). Solved by the
// same extrapolated primal-dual scheme as the main solver; the simplex
// constraint on p enters through its projection.
struct JointOptions {
    int max_iter = 60000;
    double tol_gap = 1e-6;
    double tol_feas = 1e-7;
    int threads = 1;
};

struct JointResult {
    double value = 0.0;     // primal objective at the returned point
    double dual = 0.0;      // cleaned dual lower bound
    double gap = 0.0;
    double residual = 0.0;  // relative constraint residual
    bool converged = false;
    std::vector<double> p;  // per-node weights of the optimal measure
    MatrixField lambda;
};

JointResult solve_joint(const Grid& g, const Cost* cost, const std::vector<double>& phi,
                        const ScalarField& rhs, double p_total, const JointOptions& opts);

}  // namespace eot::detail
