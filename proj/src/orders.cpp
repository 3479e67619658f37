#include "eot/orders.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "dense_lp.hpp"
#include "joint_saddle.hpp"

namespace eot {

namespace {

void require_equal_mass(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
    const double m0 = total_mass(mu);
    const double m1 = total_mass(nu);
    if (std::abs(m0 - m1) > 1e-9 * std::max({1.0, m0, m1}))
        throw std::invalid_argument("order check: total mass mismatch");
}

std::vector<int> support_nodes(const DiscreteMeasure& m) {
    std::vector<int> idx;
    for (int i = 0; i < m.grid.num_nodes(); ++i)
        if (m.w[i] > 0.0) idx.push_back(i);
    return idx;
}

}  // namespace

OrderReport convex_order_1d(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                            const OrderOptions& opts) {
    if (mu.grid.dim != 1 || !mu.grid.same_layout(nu.grid))
        throw std::invalid_argument("convex_order_1d: requires two 1D measures on one grid");
    require_equal_mass(mu, nu);
    (void)opts;

    OrderReport rep;
    rep.threshold_note = "means to 1e-9 relative, cumulative potentials to 1e-12 relative";

    const auto bm = barycenter(mu);
    const auto bn = barycenter(nu);
    const double extent = mu.grid.hi[0] - mu.grid.lo[0];
    if (std::abs(bm[0] - bn[0]) > 1e-9 * std::max(1.0, extent)) {
        rep.holds = false;
        rep.residual = std::abs(bm[0] - bn[0]);
        std::ostringstream os;
        os << "affine test function x -> " << (bn[0] > bm[0] ? "-" : "") << "(x - " << bm[0]
           << ") separates the means";
        rep.violation = os.str();
        return rep;
    }

    const int n = mu.grid.n[0];
    std::vector<double> gap(n, 0.0);  // potential of nu minus potential of mu
    double cum = 0.0, cumcum = 0.0, max_abs = 0.0;
    for (int j = 0; j + 1 < n; ++j) {
        cum += nu.w[j] - mu.w[j];
        cumcum += cum;
        gap[j + 1] = cumcum;
        max_abs = std::max(max_abs, std::abs(cumcum));
    }
    const double tol = 1e-12 * std::max(1.0, max_abs);
    for (int j = 0; j < n; ++j) {
        if (gap[j] < -tol) {
            rep.holds = false;
            rep.residual = -gap[j];
            std::ostringstream os;
            os << "hinge test function y -> max(" << mu.grid.coord(0, j)
               << " - y, 0) is violated at node " << j;
            rep.violation = os.str();
            return rep;
        }
    }
    rep.holds = true;
    rep.residual = 0.0;
    for (double& v : gap) v = std::max(v, 0.0);
    rep.witness_field = std::move(gap);
    return rep;
}

OrderReport convex_order(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                         const OrderOptions& opts) {
    if (!mu.grid.same_layout(nu.grid))
        throw std::invalid_argument("convex_order: grid mismatch");
    require_equal_mass(mu, nu);
    const Grid& g = mu.grid;
    const int dim = g.dim;

    const std::vector<int> sm = support_nodes(mu);
    const std::vector<int> sn = support_nodes(nu);
    const int nmu = static_cast<int>(sm.size());
    const int nnu = static_cast<int>(sn.size());

    OrderReport rep;
    {
        std::ostringstream os;
        os << "martingale coupling feasibility, simplex violation threshold 1e-9 relative"
           << " (requested tolerance " << opts.tol_feas << ")";
        rep.threshold_note = os.str();
    }
    if (nmu == 0 || nnu == 0) {
        rep.holds = nmu == 0 && nnu == 0;
        if (rep.holds) rep.coupling = std::vector<double>{};
        return rep;
    }
    if (static_cast<long>(nmu) * nnu > 20000)
        throw std::invalid_argument("convex_order: support too large for the coupling LP");

    // Rows: mu marginal, nu marginal, barycenter per mu atom and axis.
    const int rows = nmu + nnu + nmu * dim;
    const int cols = nmu * nnu;
    const double extent = std::max(g.hi[0] - g.lo[0], dim == 2 ? g.hi[1] - g.lo[1] : 0.0);
    std::vector<double> a(static_cast<std::size_t>(rows) * cols, 0.0);
    std::vector<double> b(rows, 0.0);
    for (int i = 0; i < nmu; ++i) b[i] = mu.w[sm[i]];
    for (int j = 0; j < nnu; ++j) b[nmu + j] = nu.w[sn[j]];
    for (int i = 0; i < nmu; ++i) {
        const auto x = g.node(sm[i]);
        for (int j = 0; j < nnu; ++j) {
            const auto y = g.node(sn[j]);
            const int col = i * nnu + j;
            a[static_cast<std::size_t>(i) * cols + col] = 1.0;
            a[static_cast<std::size_t>(nmu + j) * cols + col] = 1.0;
            for (int ax = 0; ax < dim; ++ax)
                a[static_cast<std::size_t>(nmu + nnu + i * dim + ax) * cols + col] =
                    (y[ax] - x[ax]) / extent;
        }
    }

    const auto lp = detail::phase_one_simplex(a, rows, cols, b);
    rep.residual = lp.violation;
    rep.holds = lp.feasible;
    if (rep.holds) {
        rep.coupling = lp.x;
        return rep;
    }
    // The Farkas row encodes a piecewise-linear convex function violating
    // the order: psi(z) = max_i [alpha_i + g_i . (z - x_i)].
    std::ostringstream os;
    os << "convex test function psi(z) = max_i [a_i + g_i.(z - x_i)] with";
    for (int i = 0; i < std::min(nmu, 6); ++i) {
        const auto x = g.node(sm[i]);
        os << " {a=" << lp.farkas[i] << ", g=(" << lp.farkas[nmu + nnu + i * dim] / extent;
        if (dim == 2) os << "," << lp.farkas[nmu + nnu + i * dim + 1] / extent;
        os << "), x=(" << x[0];
        if (dim == 2) os << "," << x[1];
        os << ")}";
    }
    if (nmu > 6) os << " ...";
    rep.violation = os.str();
    return rep;
}

OrderReport subharmonic_order(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                              const OrderOptions& opts) {
    if (!mu.grid.same_layout(nu.grid))
        throw std::invalid_argument("subharmonic_order: grid mismatch");
    require_equal_mass(mu, nu);
    if (mu.grid.dim == 1) return convex_order_1d(mu, nu, opts);

    OrderReport rep;
    {
        std::ostringstream os;
        os << "isotropic-field feasibility at relative tolerance " << opts.tol_feas;
        rep.threshold_note = os.str();
    }

    SolveOptions sopts = opts.solver;
    sopts.tol_feas = std::min(sopts.tol_feas, opts.tol_feas);
    const SolveResult sol = solve_dynamic(mu, nu, Cost::scaled_identity(), sopts);
    rep.residual = sol.report.feas_residual;
    switch (sol.report.status) {
        case SolveStatus::Optimal: {
            rep.holds = true;
            std::vector<double> w(mu.grid.num_nodes(), 0.0);
            for (int i = 0; i < mu.grid.num_interior(); ++i)
                w[mu.grid.interior_to_node(i)] = sol.lambda.m[i](0, 0);
            rep.witness_field = std::move(w);
            return rep;
        }
        case SolveStatus::Infeasible: {
            rep.holds = false;
            const std::string& why = sol.report.infeasibility_reason;
            if (why.find("x1^2 - x2^2") != std::string::npos)
                rep.violation = "harmonic test function x1^2 - x2^2 (sign as needed)";
            else if (why.find("x1 * x2") != std::string::npos)
                rep.violation = "harmonic test function x1 * x2 (sign as needed)";
            else if (why.find("barycenter") != std::string::npos)
                rep.violation = "affine test function separating the barycenters";
            else
                rep.violation = "subharmonic certificate from the dual recession direction (" +
                                why + ")";
            return rep;
        }
        default:
            rep.holds = false;
            rep.decided = false;
            rep.threshold_note += "; iteration limit reached before a verdict";
            return rep;
    }
}

double h_envelope(const ScalarField& phi, int node, const OrderOptions& opts) {
    const Grid& g = phi.grid;
    if (g.n[0] > 33 || (g.dim == 2 && g.n[1] > 33))
        throw std::invalid_argument("h_envelope: grid larger than 33 nodes per axis");
    if (node < 0 || node >= g.num_nodes() || g.boundary_distance(node) < 2)
        throw std::invalid_argument("h_envelope: node must lie at least two nodes inside");

    ScalarField rhs(g);
    rhs.v[node] = -1.0;
    detail::JointOptions jopts;
    jopts.threads = opts.solver.threads;
    jopts.max_iter = std::max(opts.solver.max_iter, 20000);
    jopts.tol_gap = std::min(opts.solver.tol_gap, 1e-5);
    jopts.tol_feas = std::min(opts.solver.tol_feas, 1e-6);
    const auto res = detail::solve_joint(g, nullptr, phi.v, rhs, 1.0, jopts);
    return res.value;
}

}  // namespace eot
