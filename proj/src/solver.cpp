#include "eot/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "detail_parallel.hpp"

namespace eot {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double mass_tolerance(double mass) { return 1e-9 * std::max(1.0, mass); }

double domain_extent(const Grid& g) {
    double e = g.hi[0] - g.lo[0];
    if (g.dim == 2) e = std::max(e, g.hi[1] - g.lo[1]);
    return e;
}

// Scale against which divergence of the dual objective is measured.
double problem_scale(const DiscreteMeasure& mu, const Grid& g) {
    const double extent = domain_extent(g);
    return std::max(1.0, total_mass(mu) * extent * extent);
}

struct Metrics {
    double primal = 0.0;
    double dual = 0.0;
    double gap = 0.0;
    double res_rel = 0.0;
    double res_l1 = 0.0;
    double psi_inf = 0.0;
    double support_max = 0.0;  // max node-wise T(H psi) before cleaning
};

class DynamicSolver {
public:
    DynamicSolver(const DiscreteMeasure& mu, const DiscreteMeasure& nu, const Cost& cost,
                  const SolveOptions& opts)
        : grid_(mu.grid), cost_(cost), opts_(opts), b_(grid_) {
        for (int i = 0; i < grid_.num_nodes(); ++i) b_.v[i] = nu.w[i] - mu.w[i];
        b_norm_ = norm2(b_);
        scale_ = problem_scale(mu, grid_);
    }

    SolveResult run() {
        SolveResult res;
        res.lambda = MatrixField(grid_);
        res.psi = ScalarField(grid_);

        if (b_norm_ <= mass_tolerance(scale_) * 1e-3) {
            res.report.status = SolveStatus::Optimal;
            return res;
        }

        const double norm_h = operator_norm_estimate(grid_, 50, opts_.seed);
        const double tau = 0.99 / norm_h;
        const double sigma = 0.99 / norm_h;

        MatrixField lam(grid_);
        MatrixField lam_bar(grid_);
        ScalarField psi(grid_);
        ScalarField lls(grid_);  // div2 of the extrapolated field
        MatrixField hpsi(grid_);
        const int n_int = grid_.num_interior();
        const int threads = std::max(opts_.threads, 1);

        // Infeasibility bookkeeping: residual stall window plus a recession
        // certificate extracted from the dual displacement.
        const int window = 1000;
        ScalarField psi_snapshot(grid_);
        double res_at_snapshot = kInf;
        bool stalled = false;

        const int check_every = 100;
        Metrics m;
        int k = 0;
        SolveStatus status = SolveStatus::MaxIter;
        std::string reason;

        while (k < opts_.max_iter) {
            ++k;
            div2_into(lam_bar, lls, threads);
            for (int i = 0; i < grid_.num_nodes(); ++i) psi.v[i] += sigma * (b_.v[i] - lls.v[i]);
            hessian_into(psi, hpsi, threads);
            detail::for_range(n_int, threads, [&](int i) {
                const SymMat next = cost_.prox(lam.m[i] + tau * hpsi.m[i], tau);
                lam_bar.m[i] = 2.0 * next - lam.m[i];
                lam.m[i] = next;
            });

            if (k % check_every != 0 && k != opts_.max_iter) continue;

            m = measure(lam, psi, hpsi);
            if (opts_.record_trace)
                trace_.push_back({k, m.primal, m.dual, m.res_rel, m.res_l1, m.psi_inf});

            if (m.gap <= opts_.tol_gap && m.res_rel <= opts_.tol_feas) {
                status = SolveStatus::Optimal;
                break;
            }

            if (k % window == 0) {
                stalled = m.res_rel > 0.9 * res_at_snapshot && m.res_rel > 10.0 * opts_.tol_feas;
                if (stalled && k >= 2 * window) {
                    const double certified = certified_dual_bound(psi, psi_snapshot);
                    const double bound = opts_.divergence_bound * scale_;
                    if (certified > bound || m.dual > bound) {
                        status = SolveStatus::Infeasible;
                        reason = "dual objective certified unbounded (recession certificate)";
                        break;
                    }
                }
                psi_snapshot = psi;
                res_at_snapshot = m.res_rel;
            }
        }

        if (status != SolveStatus::Infeasible) {
            // Final metrics on the returned (cleaned) pair.
            hessian_into(psi, hpsi, threads);
            m = measure(lam, psi, hpsi);
        }

        res.report.status = status;
        res.report.iterations = k;
        res.report.infeasibility_reason = reason;
        res.report.trace = std::move(trace_);
        if (status == SolveStatus::Infeasible) {
            res.report.primal_value = kInf;
            res.report.dual_value = kInf;
            res.report.gap = kInf;
            res.report.feas_residual = m.res_rel;
            return res;
        }
        res.report.primal_value = m.primal;
        res.report.dual_value = m.dual;
        res.report.gap = m.gap;
        res.report.feas_residual = m.res_rel;
        for (int i = 0; i < n_int; ++i) res.lambda.m[i] = cost_.project_domain(lam.m[i]);
        const double shrink = 1.0 / std::max(1.0, m.support_max);
        for (int i = 0; i < grid_.num_nodes(); ++i) res.psi.v[i] = psi.v[i] * shrink;
        return res;
    }

    std::vector<TraceRow> trace_;

private:
    Metrics measure(const MatrixField& lam, const ScalarField& psi, const MatrixField& hpsi) {
        Metrics m;
        MatrixField proj(grid_);
        for (int i = 0; i < grid_.num_interior(); ++i) {
            proj.m[i] = cost_.project_domain(lam.m[i]);
            m.primal += cost_.value(proj.m[i]);
        }
        ScalarField ll(grid_);
        div2_into(proj, ll, std::max(opts_.threads, 1));
        double res2 = 0.0, res1 = 0.0;
        for (int i = 0; i < grid_.num_nodes(); ++i) {
            const double r = ll.v[i] - b_.v[i];
            res2 += r * r;
            res1 += std::abs(r);
        }
        m.res_rel = std::sqrt(res2) / std::max(1.0, b_norm_);
        m.res_l1 = res1;
        m.psi_inf = norm_inf(psi);
        m.support_max = 0.0;
        for (int i = 0; i < grid_.num_interior(); ++i)
            m.support_max = std::max(m.support_max, cost_.support(hpsi.m[i]));
        const double shrink = 1.0 / std::max(1.0, m.support_max);
        m.dual = 0.0;
        for (int i = 0; i < grid_.num_nodes(); ++i) m.dual += b_.v[i] * psi.v[i] * shrink;
        m.gap = std::abs(m.primal - m.dual) / std::max(1.0, std::abs(m.primal));
        return m;
    }

    // Certified lower bound on the primal optimum, extracted from the dual
    // displacement y. Tilting by q(x) = |x|^2 (whose half-Hessian is exactly
    // the identity) with t = max_i lambda_max_+((H y)_i) yields a field y'
    // with T((H y')_i) <= 0 at every node, for any cost with PSD domain.
    // Then <b, y'> > 0 is an exact Farkas certificate: every feasible field
    // would give 0 < <b, y'> = sum_i (H y')_i : Lambda_i <= 0. On feasible
    // problems <b, y'> <= 0 always, so the test cannot misfire.
    double certified_dual_bound(const ScalarField& psi, const ScalarField& snapshot) {
        ScalarField y(grid_);
        for (int i = 0; i < grid_.num_nodes(); ++i) y.v[i] = psi.v[i] - snapshot.v[i];
        const double yn = norm_inf(y);
        if (yn <= 0.0) return 0.0;
        for (double& x : y.v) x /= yn;
        double pairing = 0.0;
        double pairing_q = 0.0;
        for (int i = 0; i < grid_.num_nodes(); ++i) {
            const auto p = grid_.node(i);
            pairing += b_.v[i] * y.v[i];
            pairing_q += b_.v[i] * (p[0] * p[0] + p[1] * p[1]);
        }
        const MatrixField hy = hessian(y);
        double tilt = 0.0;
        double support_plus = 0.0;
        for (int i = 0; i < grid_.num_interior(); ++i) {
            tilt = std::max(tilt, max_eigenvalue(hy.m[i]));
            support_plus = std::max(support_plus, cost_.support(hy.m[i]));
        }
        if (pairing - tilt * pairing_q > 1e-8 * std::max(1.0, b_norm_)) return kInf;
        if (pairing <= 1e-12 * std::max(1.0, b_norm_)) return 0.0;
        if (support_plus <= 0.0) return kInf;
        return pairing / support_plus;
    }

    const Grid& grid_;
    const Cost& cost_;
    const SolveOptions& opts_;
    ScalarField b_;
    double b_norm_ = 0.0;
    double scale_ = 1.0;
};

SolveResult infeasible_result(const Grid& g, const std::string& reason) {
    SolveResult res;
    res.lambda = MatrixField(g);
    res.psi = ScalarField(g);
    res.report.status = SolveStatus::Infeasible;
    res.report.infeasibility_reason = reason;
    res.report.primal_value = kInf;
    res.report.dual_value = kInf;
    res.report.gap = kInf;
    res.report.feas_residual = kInf;
    return res;
}

}  // namespace

std::string to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Optimal: return "Optimal";
        case SolveStatus::Infeasible: return "Infeasible";
        default: return "MaxIter";
    }
}

SolveResult solve_dynamic(const DiscreteMeasure& mu, const DiscreteMeasure& nu, const Cost& cost,
                          const SolveOptions& opts) {
    if (!mu.grid.same_layout(nu.grid))
        return infeasible_result(mu.grid, "grid mismatch between the two measures");
    const Grid& g = mu.grid;
    if (cost.required_dim() != 0 && cost.required_dim() != g.dim)
        throw std::invalid_argument("solve_dynamic: cost dimension does not match the grid");
    if (!support_within_margin(mu, 2) || !support_within_margin(nu, 2))
        throw std::invalid_argument(
            "solve_dynamic: measure support must stay at least two nodes inside the boundary");

    const double mass_mu = total_mass(mu);
    const double mass_nu = total_mass(nu);
    const double mtol = mass_tolerance(std::max(mass_mu, mass_nu));
    if (std::abs(mass_mu - mass_nu) > mtol)
        return infeasible_result(g, "total mass mismatch");
    if (mass_mu <= mtol) {
        SolveResult res;
        res.lambda = MatrixField(g);
        res.psi = ScalarField(g);
        res.report.status = SolveStatus::Optimal;
        return res;
    }

    const auto bmu = barycenter(mu);
    const auto bnu = barycenter(nu);
    const double extent = domain_extent(g);
    const double btol = 1e-9 * std::max(1.0, extent);
    if (std::hypot(bmu[0] - bnu[0], bmu[1] - bnu[1]) > btol)
        return infeasible_result(g, "barycenter mismatch");

    if (cost.variant() == CostVariant::ScaledIdentity && g.dim == 2) {
        // Necessary moment identities for a diagonal-isotropic field:
        // pairing the constraint with x^2 - y^2 and with x y gives zero.
        const SymMat diff = second_moment_matrix(nu) - second_moment_matrix(mu);
        const double moment_tol = 1e-9 * std::max(1.0, mass_mu * extent * extent);
        if (std::abs(diff(0, 0) - diff(1, 1)) > moment_tol)
            return infeasible_result(g, "moment condition violated: x1^2 - x2^2");
        if (std::abs(diff(0, 1)) > moment_tol)
            return infeasible_result(g, "moment condition violated: x1 * x2");
        // Degree 3 and 4 exactly discrete-harmonic polynomials (centred at
        // the common barycenter, w = x1 + i x2) pair to zero as well. The
        // quartic needs a -(h_x^2 + h_y^2)/2 |x|^2 correction to stay
        // harmonic under the 5-point stencil.
        const double hcorr = 0.5 * (g.h[0] * g.h[0] + g.h[1] * g.h[1]);
        auto moment = [&](auto&& f) {
            double s = 0.0;
            for (int i = 0; i < g.num_nodes(); ++i) {
                if (mu.w[i] == 0.0 && nu.w[i] == 0.0) continue;
                const auto p = g.node(i);
                s += (nu.w[i] - mu.w[i]) * f(p[0] - bmu[0], p[1] - bmu[1]);
            }
            return s;
        };
        struct Check {
            const char* name;
            double value;
        };
        const Check checks[] = {
            {"Re (x1 + i x2)^3",
             moment([](double x, double y) { return x * x * x - 3.0 * x * y * y; })},
            {"Im (x1 + i x2)^3",
             moment([](double x, double y) { return 3.0 * x * x * y - y * y * y; })},
            {"Re (x1 + i x2)^4 - h^2 |x|^2",
             moment([&](double x, double y) {
                 return x * x * x * x - 6.0 * x * x * y * y + y * y * y * y -
                        hcorr * (x * x + y * y);
             })},
            {"Im (x1 + i x2)^4", moment([](double x, double y) {
                 return 4.0 * x * y * (x * x - y * y);
             })},
        };
        const double htol = 1e-9 * std::max(1.0, mass_mu * extent * extent * extent * extent);
        for (const Check& c : checks) {
            if (std::abs(c.value) > htol)
                return infeasible_result(
                    g, std::string("harmonic moment condition violated: ") + c.name);
        }
    }

    if (g.dim == 1) {
        const Solve1dResult exact = solve_1d_exact(mu, nu);
        if (!exact.feasible)
            return infeasible_result(g, "convex order fails (1D potential test)");
    }

    return DynamicSolver(mu, nu, cost, opts).run();
}

Solve1dResult solve_1d_exact(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
    if (mu.grid.dim != 1 || nu.grid.dim != 1)
        throw std::invalid_argument("solve_1d_exact: requires 1D measures");
    if (!mu.grid.same_layout(nu.grid))
        throw std::invalid_argument("solve_1d_exact: grid mismatch");
    const Grid& g = mu.grid;
    const int n = g.n[0];
    const double h2 = g.h[0] * g.h[0];

    Solve1dResult out;
    double cum = 0.0, cumcum = 0.0;
    std::vector<double> lambda(n - 2, 0.0);
    for (int j = 0; j + 1 < n; ++j) {
        cum += nu.w[j] - mu.w[j];
        cumcum += cum;
        if (j + 1 <= n - 2) lambda[j] = 2.0 * h2 * cumcum;  // value at node j + 1
    }
    const double mass_gap = std::abs(cum + nu.w[n - 1] - mu.w[n - 1]);
    double max_abs = 0.0;
    for (double x : lambda) max_abs = std::max(max_abs, std::abs(x));
    const double feas_tol = 1e-12 * std::max(1.0, max_abs);
    // cumcum now holds the second sum through node n-2; it vanishes exactly
    // when the barycenters agree.
    if (mass_gap > mass_tolerance(total_mass(mu)) ||
        std::abs(2.0 * h2 * cumcum) > feas_tol * std::max(1.0, 2.0 * h2)) {
        out.feasible = false;
        return out;
    }
    for (double x : lambda) {
        if (x < -feas_tol) {
            out.feasible = false;
            return out;
        }
    }
    out.feasible = true;
    out.lambda.resize(lambda.size());
    double value = 0.0;
    for (std::size_t i = 0; i < lambda.size(); ++i) {
        out.lambda[i] = std::max(lambda[i], 0.0);
        value += out.lambda[i];
    }
    out.value = value;
    return out;
}

double lower_bound(const DiscreteMeasure& mu, const DiscreteMeasure& nu, const Cost& cost) {
    const SymMat diff = second_moment_matrix(nu) - second_moment_matrix(mu);
    return cost.value(diff);
}

std::pair<double, bool> dual_value(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                   const ScalarField& psi, const Cost& cost, double tol) {
    if (!mu.grid.same_layout(nu.grid) || !mu.grid.same_layout(psi.grid))
        throw std::invalid_argument("dual_value: grid mismatch");
    double value = 0.0;
    for (int i = 0; i < mu.grid.num_nodes(); ++i) value += (nu.w[i] - mu.w[i]) * psi.v[i];
    const MatrixField h = hessian(psi);
    bool feasible = true;
    for (const SymMat& a : h.m) {
        if (!cost.dual_feasible(a, tol)) {
            feasible = false;
            break;
        }
    }
    return {value, feasible};
}

}  // namespace eot
