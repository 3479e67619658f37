#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "eot/operators.hpp"
#include "eot/solver.hpp"
#include "eot/transform.hpp"
#include "eot/rng.hpp"

using namespace eot;

namespace {

// 1D oracle for the trace transform: the per-node program charges a target
// measure p with mean x its variance, so
//   phi^G(x) = conv(phi + y^2)(x) - x^2
// with the convex hull taken over grid nodes. Evaluated by brute force over
// node pairs.
double transform_oracle_1d(const ScalarField& phi, int node) {
    const Grid& g = phi.grid;
    const double x = g.coord(0, node);
    double best = phi.v[node];
    for (int i = 0; i <= node; ++i) {
        for (int j = node; j < g.n[0]; ++j) {
            if (i == j) continue;
            const double xi = g.coord(0, i), xj = g.coord(0, j);
            const double t = (x - xi) / (xj - xi);
            const double lifted =
                (1.0 - t) * (phi.v[i] + xi * xi) + t * (phi.v[j] + xj * xj);
            best = std::min(best, lifted - x * x);
        }
    }
    return best;
}

TransformOptions default_opts() { return {}; }

}  // namespace

TEST_CASE("constants are fixed points of the transform") {
    const Grid g = Grid::line(0.0, 1.0, 17);
    const ScalarField phi = ScalarField::sample(g, [](double, double) { return 2.5; });
    for (const Cost& c : {Cost::trace(), Cost::scaled_identity(), Cost::max_eigen()}) {
        const GTransformResult r = g_transform(phi, c, default_opts());
        for (int n : r.admissible_nodes)
            CHECK(r.values.v[n] == doctest::Approx(2.5).epsilon(1e-5));
    }
}

TEST_CASE("convex quadratics are invariant, concave ones are pinned by variance") {
    const Grid g = Grid::line(0.0, 1.0, 17);

    const ScalarField up = ScalarField::sample(g, [](double x, double) { return x * x; });
    const GTransformResult ru = g_transform(up, Cost::trace(), default_opts());
    for (int n : ru.admissible_nodes)
        CHECK(std::abs(ru.values.v[n] - up.v[n]) <= ru.per_solve_tol);

    // Two-point targets with half-width r cost exactly their variance r^2,
    // cancelling the spread gain of -y^2: the transform is flat in r.
    const ScalarField down = ScalarField::sample(g, [](double x, double) { return -x * x; });
    const int mid = g.nearest_node(0.5, 0.0, 1e-9);
    const DiscreteMeasure delta = measure_from_atoms(g, {{0.5, 0.0, 1.0}});
    for (int spread = 1; spread <= 8; ++spread) {
        DiscreteMeasure p(g);
        p.w[mid - spread] = 0.5;
        p.w[mid + spread] = 0.5;
        const Solve1dResult transport = solve_1d_exact(delta, p);
        REQUIRE(transport.feasible);
        double objective = transport.value;
        for (int i = 0; i < g.num_nodes(); ++i) objective += p.w[i] * down.v[i];
        CHECK(objective == doctest::Approx(-0.25).epsilon(1e-12));
    }
    const GTransformResult rd = g_transform(down, Cost::trace(), default_opts());
    CHECK(rd.values.v[mid] == doctest::Approx(-0.25).epsilon(1e-4));
    for (int n : rd.admissible_nodes) {
        const double x = g.coord(0, n);
        CHECK(std::abs(rd.values.v[n] - (-x * x)) <= 5e-5);
    }
}

TEST_CASE("transform agrees with the 1D convex-hull oracle on random fields") {
    Rng rng(62);
    const Grid g = Grid::line(0.0, 1.0, 17);
    for (int trial = 0; trial < 5; ++trial) {
        ScalarField phi(g);
        for (double& v : phi.v) v = rng.uniform(-0.6, 0.6);
        const GTransformResult r = g_transform(phi, Cost::trace(), default_opts());
        for (int n : r.admissible_nodes) {
            CHECK(std::abs(r.values.v[n] - transform_oracle_1d(phi, n)) <= 3e-5);
        }
    }
}

TEST_CASE("transform is monotone, dominated by phi, and shift covariant") {
    Rng rng(8);
    const Grid g = Grid::line(0.0, 1.0, 17);
    ScalarField phi1(g), phi2(g);
    for (int i = 0; i < g.num_nodes(); ++i) {
        phi1.v[i] = rng.uniform(-0.5, 0.5);
        phi2.v[i] = phi1.v[i] + rng.uniform(0.0, 0.4);
    }
    const GTransformResult r1 = g_transform(phi1, Cost::trace(), default_opts());
    const GTransformResult r2 = g_transform(phi2, Cost::trace(), default_opts());
    const double tol = r1.per_solve_tol + r2.per_solve_tol;
    for (int n : r1.admissible_nodes) {
        CHECK(r1.values.v[n] <= phi1.v[n] + r1.per_solve_tol);
        CHECK(r1.values.v[n] <= r2.values.v[n] + tol);
    }
    ScalarField shifted = phi1;
    for (double& v : shifted.v) v += 3.0;
    const GTransformResult rs = g_transform(shifted, Cost::trace(), default_opts());
    for (int n : r1.admissible_nodes)
        CHECK(rs.values.v[n] == doctest::Approx(r1.values.v[n] + 3.0).epsilon(1e-6));
}

TEST_CASE("invariance detection matches node-wise dual feasibility") {
    const Grid g = Grid::line(0.0, 1.0, 17);
    const TransformOptions opts = default_opts();

    const ScalarField affine = ScalarField::sample(g, [](double x, double) { return 0.7 * x - 0.2; });
    CHECK(is_g_invariant(affine, Cost::trace(), 5e-4, opts));

    const ScalarField boundary = ScalarField::sample(g, [](double x, double) { return x * x; });
    CHECK(is_g_invariant(boundary, Cost::trace(), 5e-4, opts));

    const ScalarField outside = ScalarField::sample(g, [](double x, double) { return 2.0 * x * x; });
    CHECK_FALSE(is_g_invariant(outside, Cost::trace(), 5e-4, opts));

    // The theorem behind the check: invariance iff the discrete
    // half-Hessian is dual feasible at every interior node.
    Rng rng(97);
    const DiscreteMeasure dummy_mu(g), dummy_nu(g);
    for (int trial = 0; trial < 10; ++trial) {
        const double a = rng.uniform(-2.0, 2.0);
        const double b = rng.uniform(-1.0, 1.0);
        const ScalarField psi =
            ScalarField::sample(g, [&](double x, double) { return a * x * x + b * x; });
        if (std::abs(a - 1.0) < 0.05) continue;  // keep clear of the cone boundary
        const MatrixField h = hessian(psi);
        bool feasible = true;
        for (const SymMat& m : h.m) feasible = feasible && Cost::trace().dual_feasible(m, 1e-9);
        CHECK(is_g_invariant(psi, Cost::trace(), 5e-4, opts) == feasible);
    }
}

TEST_CASE("transform is idempotent") {
    const Grid g = Grid::line(0.0, 1.0, 17);
    const TransformOptions opts = default_opts();

    const ScalarField constant = ScalarField::sample(g, [](double, double) { return -1.0; });
    const auto [dev_const, ok_const] = idempotence_check(constant, Cost::trace(), 1e-6, opts);
    CHECK(ok_const);
    CHECK(dev_const <= 1e-6);

    Rng rng(15);
    ScalarField phi(g);
    for (double& v : phi.v) v = rng.uniform(-0.5, 0.5);
    const GTransformResult once = g_transform(phi, Cost::trace(), opts);
    const auto [dev, ok] = idempotence_check(phi, Cost::trace(), 2.0 * once.per_solve_tol, opts);
    CHECK(ok);

    // A field that is already a transform is a fixed point.
    const auto [dev_fp, ok_fp] =
        idempotence_check(once.values, Cost::trace(), 2.0 * once.per_solve_tol, opts);
    CHECK(ok_fp);

    CHECK_THROWS_AS(idempotence_check(ScalarField(Grid::line(0, 1, 33)), Cost::trace(), 1e-3, opts),
                    std::invalid_argument);
}

TEST_CASE("minimizing measures are returned on request and csv output aligns") {
    const Grid g = Grid::line(0.0, 1.0, 17);
    TransformOptions opts = default_opts();
    opts.keep_minimizers = true;
    const ScalarField phi = ScalarField::sample(g, [](double x, double) { return -x * x; });
    const GTransformResult r = g_transform(phi, Cost::trace(), opts);
    REQUIRE(r.minimizing_p.size() == r.admissible_nodes.size());
    for (const DiscreteMeasure& p : r.minimizing_p)
        CHECK(total_mass(p) == doctest::Approx(1.0).epsilon(1e-8));

    const GTransformResult r2 = g_transform(r.values, Cost::trace(), default_opts());
    const char* path = "transform_dump.csv";
    write_transform_csv(phi, r, r2, path);
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "x,phi,phi_g,phi_gg");
    int rows = 0;
    for (std::string line; std::getline(in, line);) ++rows;
    CHECK(rows == static_cast<int>(r.admissible_nodes.size()));
    in.close();
    std::remove(path);
}

TEST_CASE("2D transform keeps trace-cost quadratic structure") {
    const Grid g = Grid::rect(0.0, 1.0, 9, 0.0, 1.0, 9);
    const ScalarField bowl = ScalarField::sample(
        g, [](double x, double y) { return 0.8 * ((x - 0.5) * (x - 0.5) + (y - 0.5) * (y - 0.5)); });
    const GTransformResult r = g_transform(bowl, Cost::trace(), default_opts());
    for (int n : r.admissible_nodes)
        CHECK(std::abs(r.values.v[n] - bowl.v[n]) <= 2e-4);
}
