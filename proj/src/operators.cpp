#include "eot/operators.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "detail_parallel.hpp"
#include "eot/rng.hpp"

namespace eot {

namespace {

// Entry of the matrix field at lattice position (ix, iy), zero outside the
// interior. e: 0 = (0,0), 1 = (1,1), 2 = (0,1).
inline double entry_or_zero(const MatrixField& lam, int ix, int iy, int e) {
    const Grid& g = lam.grid;
    if (ix < 1 || ix > g.n[0] - 2) return 0.0;
    if (g.dim == 2 && (iy < 1 || iy > g.n[1] - 2)) return 0.0;
    const int k = g.dim == 1 ? ix - 1 : (ix - 1) + (g.n[0] - 2) * (iy - 1);
    switch (e) {
        case 0: return lam.m[k](0, 0);
        case 1: return lam.m[k](1, 1);
        default: return lam.m[k](0, 1);
    }
}

}  // namespace

void hessian_into(const ScalarField& psi, MatrixField& out, int threads) {
    const Grid& g = psi.grid;
    if (!out.grid.same_layout(g)) out = MatrixField(g);
    const double* v = psi.v.data();
    const int nx = g.n[0];
    if (g.dim == 1) {
        const double cx = 0.5 / (g.h[0] * g.h[0]);
        for (int i = 1; i <= nx - 2; ++i)
            out.m[i - 1].set(0, 0, cx * (v[i + 1] - 2.0 * v[i] + v[i - 1]));
        return;
    }
    const int ny = g.n[1];
    const double cx = 0.5 / (g.h[0] * g.h[0]);
    const double cy = 0.5 / (g.h[1] * g.h[1]);
    const double cxy = 0.5 / (4.0 * g.h[0] * g.h[1]);
    detail::for_range(ny - 2, threads, [&](int row) {
        const int iy = row + 1;
        for (int ix = 1; ix <= nx - 2; ++ix) {
            const int c = ix + nx * iy;
            SymMat& mm = out.m[(ix - 1) + (nx - 2) * (iy - 1)];
            mm.set(0, 0, cx * (v[c + 1] - 2.0 * v[c] + v[c - 1]));
            mm.set(1, 1, cy * (v[c + nx] - 2.0 * v[c] + v[c - nx]));
            mm.set(0, 1,
                   cxy * (v[c + 1 + nx] - v[c + 1 - nx] - v[c - 1 + nx] + v[c - 1 - nx]));
        }
    });
}

MatrixField hessian(const ScalarField& psi) {
    MatrixField out(psi.grid);
    hessian_into(psi, out);
    return out;
}

void div2_into(const MatrixField& lam, ScalarField& out, int threads) {
    const Grid& g = lam.grid;
    if (!out.grid.same_layout(g)) out = ScalarField(g);
    const int nx = g.n[0];
    if (g.dim == 1) {
        const double cx = 0.5 / (g.h[0] * g.h[0]);
        for (int j = 0; j < nx; ++j) {
            out.v[j] = cx * (entry_or_zero(lam, j - 1, 0, 0) - 2.0 * entry_or_zero(lam, j, 0, 0) +
                             entry_or_zero(lam, j + 1, 0, 0));
        }
        return;
    }
    const int ny = g.n[1];
    const double cx = 0.5 / (g.h[0] * g.h[0]);
    const double cy = 0.5 / (g.h[1] * g.h[1]);
    const double cxy = 0.5 / (4.0 * g.h[0] * g.h[1]);
    const int w = nx - 2;  // interior row stride
    const SymMat* m = lam.m.data();
    detail::for_range(ny, threads, [&](int jy) {
        for (int jx = 0; jx < nx; ++jx) {
            double s;
            if (jx >= 2 && jx <= nx - 3 && jy >= 2 && jy <= ny - 3) {
                // All nine stencil neighbours are interior nodes.
                const int k = (jx - 1) + w * (jy - 1);
                s = cx * (m[k - 1](0, 0) - 2.0 * m[k](0, 0) + m[k + 1](0, 0)) +
                    cy * (m[k - w](1, 1) - 2.0 * m[k](1, 1) + m[k + w](1, 1)) +
                    2.0 * cxy *
                        (m[k - 1 - w](0, 1) + m[k + 1 + w](0, 1) - m[k - 1 + w](0, 1) -
                         m[k + 1 - w](0, 1));
            } else {
                s = cx * (entry_or_zero(lam, jx - 1, jy, 0) - 2.0 * entry_or_zero(lam, jx, jy, 0) +
                          entry_or_zero(lam, jx + 1, jy, 0));
                s += cy * (entry_or_zero(lam, jx, jy - 1, 1) -
                           2.0 * entry_or_zero(lam, jx, jy, 1) +
                           entry_or_zero(lam, jx, jy + 1, 1));
                // The (0,1) and (1,0) slots pair identically, hence the 2.
                s += 2.0 * cxy *
                     (entry_or_zero(lam, jx - 1, jy - 1, 2) +
                      entry_or_zero(lam, jx + 1, jy + 1, 2) -
                      entry_or_zero(lam, jx - 1, jy + 1, 2) -
                      entry_or_zero(lam, jx + 1, jy - 1, 2));
            }
            out.v[jx + nx * jy] = s;
        }
    });
}

ScalarField div2(const MatrixField& lam) {
    ScalarField out(lam.grid);
    div2_into(lam, out);
    return out;
}

std::vector<double> operator_norm_history(const Grid& g, int iterations, std::uint64_t seed) {
    Rng rng(seed);
    ScalarField v(g);
    for (double& x : v.v) x = rng.uniform(-1.0, 1.0);
    double nv = norm2(v);
    if (nv == 0.0) {
        v.v[0] = 1.0;
        nv = 1.0;
    }
    for (double& x : v.v) x /= nv;
    std::vector<double> history;
    history.reserve(iterations);
    double best = 0.0;
    for (int k = 0; k < iterations; ++k) {
        ScalarField av = div2(hessian(v));
        const double rayleigh = dot(v, av);
        best = std::max(best, std::sqrt(std::max(rayleigh, 0.0)));
        history.push_back(best);
        const double na = norm2(av);
        if (na == 0.0) break;
        for (std::size_t i = 0; i < v.v.size(); ++i) v.v[i] = av.v[i] / na;
    }
    return history;
}

double operator_norm_estimate(const Grid& g, int iterations, std::uint64_t seed) {
    const auto hist = operator_norm_history(g, iterations, seed);
    return hist.empty() ? 0.0 : hist.back() * 1.01;
}

}  // namespace eot
