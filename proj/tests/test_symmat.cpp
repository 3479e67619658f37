#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "eot/rng.hpp"
#include "eot/symmat.hpp"

using namespace eot;

namespace {

SymMat random_sym(Rng& rng, int d, double scale = 1.0) {
    SymMat m(d);
    for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j) m.set(i, j, rng.uniform(-scale, scale));
    return m;
}

double reconstruction_error(const SymMat& a) {
    const SymEigen e = sym_eigen(a);
    const SymMat b = sym_from_eigen(e);
    return (a - b).norm();
}

}  // namespace

TEST_CASE("eigen decomposition reconstructs random matrices") {
    Rng rng(42);
    for (int trial = 0; trial < 500; ++trial) {
        const int d = 1 + trial % 3;
        const SymMat a = random_sym(rng, d, trial % 7 == 0 ? 1e4 : 1.0);
        CAPTURE(d);
        CHECK(reconstruction_error(a) <= 1e-11 * std::max(1.0, a.norm()));
        const SymEigen e = sym_eigen(a);
        for (int k = 0; k + 1 < d; ++k) CHECK(e.val[k] >= e.val[k + 1]);
        // Orthonormal eigenvectors.
        for (int k = 0; k < d; ++k) {
            for (int l = k; l < d; ++l) {
                double ip = 0.0;
                for (int r = 0; r < d; ++r) ip += e.vec[k][r] * e.vec[l][r];
                CHECK(std::abs(ip - (k == l ? 1.0 : 0.0)) <= 1e-10);
            }
        }
    }
}

TEST_CASE("repeated eigenvalues fall back gracefully") {
    CHECK(reconstruction_error(SymMat::identity(3)) <= 1e-12);
    CHECK(reconstruction_error(SymMat::diag({2.0, 2.0, -1.0})) <= 1e-12);
    CHECK(reconstruction_error(SymMat::diag({0.0, 0.0, 0.0})) <= 1e-12);
    SymMat near(3);
    near.set(0, 0, 1.0);
    near.set(1, 1, 1.0 + 1e-12);
    near.set(2, 2, 1.0 - 1e-12);
    near.set(0, 1, 1e-13);
    CHECK(reconstruction_error(near) <= 1e-10);
}

TEST_CASE("psd projection clips negative part only") {
    const SymMat a = SymMat::diag({3.0, -1.0});
    const SymMat p = psd_projection(a);
    CHECK(p(0, 0) == doctest::Approx(3.0));
    CHECK(p(1, 1) == doctest::Approx(0.0));
    CHECK(min_eigenvalue(p) >= -1e-14);

    Rng rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const SymMat m = random_sym(rng, 1 + trial % 3);
        const SymMat q = psd_projection(m);
        CHECK(min_eigenvalue(q) >= -1e-10 * std::max(1.0, q.norm()));
        // Projection is the identity on PSD inputs.
        const SymMat qq = psd_projection(q);
        CHECK((qq - q).norm() <= 1e-10 * std::max(1.0, q.norm()));
    }
}

TEST_CASE("frobenius inner product counts off-diagonals twice") {
    SymMat a(2), b(2);
    a.set(0, 1, 1.0);
    b.set(0, 1, 1.0);
    CHECK(a.dot(b) == doctest::Approx(2.0));
    CHECK(SymMat::identity(3).trace() == doctest::Approx(3.0));
    CHECK(max_eigenvalue(SymMat::diag({1.0, 2.0})) == doctest::Approx(2.0));
}
