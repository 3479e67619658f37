#pragma once

#include <optional>
#include <vector>

#include "eot/costs.hpp"
#include "eot/fields.hpp"
#include "eot/measure.hpp"
#include "eot/solver.hpp"

namespace eot {

struct TransformOptions {
    SolveOptions solver;
    bool keep_minimizers = false;
};

// phi^G on the admissible nodes (two-node margin). `values` carries the
// transformed numbers at admissible nodes and the original phi elsewhere,
// so results chain. values <= phi node-wise up to the per-solve tolerance,
// since the point mass at the node itself is always feasible.
struct GTransformResult {
    ScalarField values;
    std::vector<int> admissible_nodes;
    std::vector<DiscreteMeasure> minimizing_p;  // aligned with admissible_nodes when kept
    double max_gap = 0.0;                       // worst per-node solver gap
    double per_solve_tol = 0.0;
};

// Per admissible node x, the value of
//   min over (p, Lambda) of <phi, p> + sum_i f(Lambda_i)
//   subject to div2(Lambda) = p - delta_x, p a probability measure,
// one joint convex program per node.
GTransformResult g_transform(const ScalarField& phi, const Cost& cost,
                             const TransformOptions& opts = {});

// True iff (-psi)^G agrees with -psi on the admissible nodes to within tol.
// Fixed points are exactly the fields whose half-Hessian is dual feasible
// node-wise, which is what the solver's dual competitors look like.
bool is_g_invariant(const ScalarField& psi, const Cost& cost, double tol,
                    const TransformOptions& opts = {});

// ||phi^{GG} - phi^G||_inf over admissible nodes and whether it is <= tol.
// Restricted to small grids (17 nodes in 1D, 9 per axis in 2D).
std::pair<double, bool> idempotence_check(const ScalarField& phi, const Cost& cost, double tol,
                                          const TransformOptions& opts = {});

// Aligned columns phi, phi^G, phi^{GG} at admissible nodes.
void write_transform_csv(const ScalarField& phi, const GTransformResult& g1,
                         const GTransformResult& g2, const std::string& path);

}  // namespace eot
