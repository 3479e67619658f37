#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "eot/costs.hpp"
#include "eot/fields.hpp"
#include "eot/measure.hpp"
#include "eot/operators.hpp"

namespace eot {

struct SolveOptions {
    int max_iter = 200000;
    double tol_gap = 1e-5;        // relative duality gap
    double tol_feas = 1e-6;       // relative constraint residual
    double divergence_bound = 1e6;  // certified dual objective above this
                                    // (times problem scale) flags infeasibility
    std::uint64_t seed = 1;

    int threads = 1;
    bool record_trace = false;
};

enum class SolveStatus { Optimal, Infeasible, MaxIter };

std::string to_string(SolveStatus s);

struct TraceRow {
    int iteration = 0;
    double primal = 0.0;
    double dual = 0.0;
    double residual = 0.0;     // relative l2 constraint residual
    double residual_l1 = 0.0;  // absolute l1 constraint residual
    double psi_inf = 0.0;
};

struct SolveReport {
    double primal_value = 0.0;   // sum of f over the matrix field
    double dual_value = 0.0;     // <nu - mu, psi> for the cleaned certificate
    double gap = 0.0;            // |primal - dual| / max(1, |primal|)
    double feas_residual = 0.0;  // ||L lambda - (nu - mu)||_2 / max(1, ||nu - mu||_2)
    SolveStatus status = SolveStatus::MaxIter;
    int iterations = 0;
    std::string infeasibility_reason;  // empty unless status == Infeasible
    std::vector<TraceRow> trace;       // filled when record_trace is set
};

struct SolveResult {
    SolveReport report;
    MatrixField lambda;  // domain-projected primal field
    ScalarField psi;     // cleaned dual certificate, dual-feasible node-wise
};

// Minimizes sum_i f(Lambda_i) subject to div2(Lambda) = nu - mu over matrix
// fields in dom(f)^interior, by an extrapolated primal-dual (PDHG) scheme:
// ascent on psi along the constraint residual, node-wise prox steps on
// Lambda, steps tau = sigma = 0.99 / ||H||.
//
// Infeasible inputs are reported as status Infeasible, either by the cheap
// necessary-condition pre-checks (mass, barycenter, the diagonal-cost moment
// identities, the 1D potential test) or, during the iteration, by a
// recession certificate: a dual direction y with T(H y) <= 0 node-wise and
// <nu - mu, y> > 0 whose certified objective exceeds divergence_bound while
// the residual has stalled.
SolveResult solve_dynamic(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                          const Cost& cost, const SolveOptions& opts = {});

struct Solve1dResult {
    bool feasible = false;
    double value = 0.0;
    std::vector<double> lambda;  // per interior node; empty when infeasible
};

// Exact 1D solution by double cumulative summation: the unique lambda with
// div2(lambda) = nu - mu is 2 h^2 times the second cumulative sum of the
// weight difference; feasible iff it is nonnegative (convex order).
// All costs coincide with the identity on 1x1 matrices, so the value is
// simply the sum. Throws unless the grids match and dim == 1.
Solve1dResult solve_1d_exact(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

// f applied to the second-moment difference; a lower bound for the optimal
// value (+infinity allowed).
double lower_bound(const DiscreteMeasure& mu, const DiscreteMeasure& nu, const Cost& cost);

// <nu - mu, psi> together with node-wise dual feasibility of the discrete
// half-Hessian of psi.
std::pair<double, bool> dual_value(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                   const ScalarField& psi, const Cost& cost, double tol);

}  // namespace eot
