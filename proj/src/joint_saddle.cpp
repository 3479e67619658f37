#include "joint_saddle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "detail_parallel.hpp"
#include "detail_simplex.hpp"
#include "eot/operators.hpp"

namespace eot::detail {

namespace {

SymMat identity_ray_projection(const SymMat& v) {
    const int d = v.dim();
    return std::max(v.trace() / d, 0.0) * SymMat::identity(d);
}

// Diagonally preconditioned steps (absolute row/column sums of the
// constraint operator [div2, -I]). The matrix block gets one uniform step
// per node, the smallest of its entry column sums, so the node-wise prox
// stays the plain Euclidean one.
struct Steps {
    double tau_lambda = 0.0;
    double tau_p = 0.95;
    ScalarField sigma;  // per node
};

Steps preconditioned_steps(const Grid& g) {
    Steps s;
    const double cx = 0.5 / (g.h[0] * g.h[0]);
    const double cy = g.dim == 2 ? 0.5 / (g.h[1] * g.h[1]) : 0.0;
    const double cxy = g.dim == 2 ? 0.5 / (4.0 * g.h[0] * g.h[1]) : 0.0;
    double col_max = 4.0 * cx;
    if (g.dim == 2) col_max = std::max({4.0 * cx, 4.0 * cy, 8.0 * cxy});
    s.tau_lambda = 0.95 / col_max;
    s.sigma = ScalarField(g);
    const int nx = g.n[0];
    const int ny = g.dim == 2 ? g.n[1] : 1;
    auto interior = [&](int ix, int iy) {
        if (ix < 1 || ix > nx - 2) return 0.0;
        if (g.dim == 2 && (iy < 1 || iy > ny - 2)) return 0.0;
        return 1.0;
    };
    for (int iy = 0; iy < ny; ++iy) {
        for (int ix = 0; ix < nx; ++ix) {
            double row = 1.0;  // the -p entry
            row += cx * (interior(ix - 1, iy) + 2.0 * interior(ix, iy) + interior(ix + 1, iy));
            if (g.dim == 2) {
                row += cy *
                       (interior(ix, iy - 1) + 2.0 * interior(ix, iy) + interior(ix, iy + 1));
                row += 2.0 * cxy *
                       (interior(ix - 1, iy - 1) + interior(ix + 1, iy + 1) +
                        interior(ix - 1, iy + 1) + interior(ix + 1, iy - 1));
            }
            s.sigma.v[ix + nx * iy] = 0.95 / row;
        }
    }
    return s;
}

}  // namespace

JointResult solve_joint(const Grid& g, const Cost* cost, const std::vector<double>& phi,
                        const ScalarField& rhs, double p_total, const JointOptions& opts) {
    const int n_nodes = g.num_nodes();
    const int n_int = g.num_interior();
    const int threads = std::max(opts.threads, 1);
    const Steps steps = preconditioned_steps(g);

    MatrixField lam(g), lam_bar(g), hpsi(g);
    std::vector<double> p(n_nodes, 0.0), p_bar(n_nodes, 0.0), p_next(n_nodes, 0.0);
    ScalarField psi(g), ll(g);

    // q has node-wise trace of the half-Hessian identically one; subtracting
    // multiples of it restores dual feasibility in the zero-cost mode.
    ScalarField q = ScalarField::sample(
        g, [&](double x, double y) { return (x * x + y * y) / g.dim; });

    double rhs_norm = norm2(rhs);
    const double phi_scale = [&] {
        double m = 1.0;
        for (double v : phi) m = std::max(m, std::abs(v));
        return m;
    }();

    JointResult out;
    const int check_every = 50;
    for (int k = 1; k <= opts.max_iter; ++k) {
        div2_into(lam_bar, ll, threads);
        for (int j = 0; j < n_nodes; ++j)
            psi.v[j] += steps.sigma.v[j] * (rhs.v[j] - (ll.v[j] - p_bar[j]));
        hessian_into(psi, hpsi, threads);
        detail::for_range(n_int, threads, [&](int i) {
            const SymMat v = lam.m[i] + steps.tau_lambda * hpsi.m[i];
            const SymMat next =
                cost ? cost->prox(v, steps.tau_lambda) : identity_ray_projection(v);
            lam_bar.m[i] = 2.0 * next - lam.m[i];
            lam.m[i] = next;
        });
        for (int j = 0; j < n_nodes; ++j)
            p_next[j] = p[j] - steps.tau_p * (psi.v[j] + phi[j]);
        project_simplex(p_next, p_total);
        for (int j = 0; j < n_nodes; ++j) {
            p_bar[j] = 2.0 * p_next[j] - p[j];
            p[j] = p_next[j];
        }

        if (k % check_every != 0 && k != opts.max_iter) continue;

        // Primal metrics on the domain-projected field.
        double primal = 0.0;
        MatrixField proj(g);
        for (int i = 0; i < n_int; ++i) {
            proj.m[i] = cost ? cost->project_domain(lam.m[i]) : identity_ray_projection(lam.m[i]);
            if (cost) primal += cost->value(proj.m[i]);
        }
        for (int j = 0; j < n_nodes; ++j) primal += phi[j] * p[j];

        div2_into(proj, ll, threads);
        double res2 = 0.0;
        for (int j = 0; j < n_nodes; ++j) {
            const double r = ll.v[j] - p[j] - rhs.v[j];
            res2 += r * r;
        }
        const double res_rel = std::sqrt(res2) / std::max(1.0, rhs_norm);

        // Cleaned dual bound. Sublinear mode rescales psi; the zero-cost
        // mode tilts by q so the node-wise trace constraint holds exactly.
        hessian_into(psi, hpsi, threads);
        ScalarField psic = psi;
        if (cost) {
            double support_max = 0.0;
            for (int i = 0; i < n_int; ++i)
                support_max = std::max(support_max, cost->support(hpsi.m[i]));
            const double shrink = 1.0 / std::max(1.0, support_max);
            for (double& x : psic.v) x *= shrink;
        } else {
            double trace_max = 0.0;
            for (int i = 0; i < n_int; ++i)
                trace_max = std::max(trace_max, hpsi.m[i].trace());
            if (trace_max > 0.0)
                for (int j = 0; j < n_nodes; ++j) psic.v[j] -= trace_max * q.v[j];
        }
        double dual = 0.0;
        for (int j = 0; j < n_nodes; ++j) dual += rhs.v[j] * psic.v[j];
        double inner_min = std::numeric_limits<double>::infinity();
        for (int j = 0; j < n_nodes; ++j) inner_min = std::min(inner_min, phi[j] + psic.v[j]);
        dual += p_total * inner_min;

        const double gap = std::abs(primal - dual) / std::max(phi_scale, std::abs(primal));
        out.value = primal;
        out.dual = dual;
        out.gap = gap;
        out.residual = res_rel;
        if (gap <= opts.tol_gap && res_rel <= opts.tol_feas) {
            out.converged = true;
            out.p = p;
            out.lambda = proj;
            return out;
        }
    }
    out.converged = false;
    out.p = p;
    out.lambda = lam;
    for (int i = 0; i < n_int; ++i)
        out.lambda.m[i] =
            cost ? cost->project_domain(out.lambda.m[i]) : identity_ray_projection(out.lambda.m[i]);
    return out;
}

}  // namespace eot::detail
