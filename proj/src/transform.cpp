#include "eot/transform.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "joint_saddle.hpp"

namespace eot {

namespace {

std::vector<int> admissible_nodes(const Grid& g) {
    std::vector<int> nodes;
    for (int i = 0; i < g.num_nodes(); ++i)
        if (g.boundary_distance(i) >= 2) nodes.push_back(i);
    return nodes;
}

detail::JointOptions joint_options(const TransformOptions& opts) {
    detail::JointOptions j;
    j.max_iter = std::max(opts.solver.max_iter, 20000);
    j.tol_gap = std::min(opts.solver.tol_gap, 1e-5);
    j.tol_feas = std::min(opts.solver.tol_feas, 1e-6);
    j.threads = opts.solver.threads;
    return j;
}

}  // namespace

GTransformResult g_transform(const ScalarField& phi, const Cost& cost,
                             const TransformOptions& opts) {
    const Grid& g = phi.grid;
    GTransformResult out;
    out.values = phi;
    out.admissible_nodes = admissible_nodes(g);
    const detail::JointOptions jopts = joint_options(opts);
    out.per_solve_tol = jopts.tol_gap * std::max(1.0, norm_inf(phi)) + 10.0 * jopts.tol_feas;

    ScalarField rhs(g);
    for (int node : out.admissible_nodes) {
        rhs.v.assign(rhs.v.size(), 0.0);
        rhs.v[node] = -1.0;
        const auto res = detail::solve_joint(g, &cost, phi.v, rhs, 1.0, jopts);
        out.values.v[node] = res.value;
        out.max_gap = std::max(out.max_gap, res.gap);
        if (opts.keep_minimizers) {
            DiscreteMeasure p(g);
            for (int j = 0; j < g.num_nodes(); ++j) p.w[j] = std::max(res.p[j], 0.0);
            out.minimizing_p.push_back(std::move(p));
        }
    }
    return out;
}

bool is_g_invariant(const ScalarField& psi, const Cost& cost, double tol,
                    const TransformOptions& opts) {
    ScalarField neg(psi.grid);
    for (std::size_t i = 0; i < psi.v.size(); ++i) neg.v[i] = -psi.v[i];
    const GTransformResult res = g_transform(neg, cost, opts);
    double drop = 0.0;
    for (int node : res.admissible_nodes)
        drop = std::max(drop, std::abs(res.values.v[node] - neg.v[node]));
    return drop <= tol;
}

std::pair<double, bool> idempotence_check(const ScalarField& phi, const Cost& cost, double tol,
                                          const TransformOptions& opts) {
    const Grid& g = phi.grid;
    if ((g.dim == 1 && g.n[0] > 17) || (g.dim == 2 && (g.n[0] > 9 || g.n[1] > 9)))
        throw std::invalid_argument("idempotence_check: grid too large");
    const GTransformResult g1 = g_transform(phi, cost, opts);
    const GTransformResult g2 = g_transform(g1.values, cost, opts);
    double dev = 0.0;
    for (int node : g1.admissible_nodes)
        dev = std::max(dev, std::abs(g2.values.v[node] - g1.values.v[node]));
    return {dev, dev <= tol};
}

void write_transform_csv(const ScalarField& phi, const GTransformResult& g1,
                         const GTransformResult& g2, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out.precision(17);
    const Grid& g = phi.grid;
    out << (g.dim == 1 ? "x" : "x,y") << ",phi,phi_g,phi_gg\n";
    for (int node : g1.admissible_nodes) {
        const auto p = g.node(node);
        out << p[0];
        if (g.dim == 2) out << ',' << p[1];
        out << ',' << phi.v[node] << ',' << g1.values.v[node] << ',' << g2.values.v[node] << '\n';
    }
}

}  // namespace eot
