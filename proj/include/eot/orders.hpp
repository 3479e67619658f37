#pragma once

#include <optional>
#include <string>
#include <vector>

#include "eot/fields.hpp"
#include "eot/measure.hpp"
#include "eot/solver.hpp"

namespace eot {

// Outcome of an order check. When the question is decided, exactly one of
// the witness fields or the violation certificate is set. `threshold_note`
// records the feasibility threshold the verdict was taken against.
struct OrderReport {
    bool holds = false;
    bool decided = true;
    std::optional<std::vector<double>> coupling;       // row-major over (mu atoms) x (nu atoms)
    std::optional<std::vector<double>> witness_field;  // per-node scalar witness
    std::optional<std::string> violation;              // violating test function
    double residual = 0.0;
    std::string threshold_note;
};

struct OrderOptions {
    double tol_feas = 1e-6;  // relative feasibility threshold
    SolveOptions solver;     // used by the checks that run a solve
};

// 1D convex order via cumulative potentials: holds iff the masses and means
// agree and the double cumulative sum of nu - mu is nonnegative at every
// node. Throws unless both measures are 1D on the same grid with equal mass.
OrderReport convex_order_1d(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                            const OrderOptions& opts = {});

// Convex order in any dimension: feasibility of a martingale coupling
// between the atoms, decided exactly by a phase-one simplex on the
// violation-minimization LP. On failure the Farkas dual row furnishes a
// piecewise-linear convex function violating the order.
OrderReport convex_order(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                         const OrderOptions& opts = {});

// Subharmonic order: in 1D it coincides with the convex order; in 2D it is
// the feasibility of the isotropic dynamic problem (ScaledIdentity cost),
// pre-filtered by the second-moment identities.
OrderReport subharmonic_order(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                              const OrderOptions& opts = {});

// Envelope h_phi(x) = min { <phi, p> : p - delta_x = div2(w I), w >= 0,
// p a probability measure on the nodes }. One convex program per call.
// Throws when x is closer than two nodes to the boundary or the grid has
// more than 33 nodes on an axis.
double h_envelope(const ScalarField& phi, int node, const OrderOptions& opts = {});

}  // namespace eot
