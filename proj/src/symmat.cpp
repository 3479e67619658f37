#include "eot/symmat.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace eot {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Jacobi eigenvalue iteration. Unconditionally stable; used directly for
// near-degenerate spectra and as a correctness fallback.
SymEigen jacobi_eigen(const SymMat& a) {
    const int d = a.dim();
    double m[3][3] = {};
    double v[3][3] = {};
    for (int i = 0; i < d; ++i) {
        v[i][i] = 1.0;
        for (int j = 0; j < d; ++j) m[i][j] = a(std::min(i, j), std::max(i, j));
    }
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < d; ++i)
            for (int j = i + 1; j < d; ++j) off += m[i][j] * m[i][j];
        if (off <= 1e-300) break;
        for (int p = 0; p < d; ++p) {
            for (int q = p + 1; q < d; ++q) {
                if (std::abs(m[p][q]) <= 1e-30 * (std::abs(m[p][p]) + std::abs(m[q][q]) + 1e-300))
                    continue;
                const double theta = (m[q][q] - m[p][p]) / (2.0 * m[p][q]);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int k = 0; k < d; ++k) {
                    const double mkp = m[k][p], mkq = m[k][q];
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for (int k = 0; k < d; ++k) {
                    const double mpk = m[p][k], mqk = m[q][k];
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
                for (int k = 0; k < d; ++k) {
                    const double vkp = v[k][p], vkq = v[k][q];
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }
    SymEigen e;
    e.d = d;
    std::array<int, 3> order = {0, 1, 2};
    std::sort(order.begin(), order.begin() + d, [&](int i, int j) { return m[i][i] > m[j][j]; });
    for (int k = 0; k < d; ++k) {
        e.val[k] = m[order[k]][order[k]];
        for (int r = 0; r < d; ++r) e.vec[k][r] = v[r][order[k]];
    }
    return e;
}

SymEigen eigen_2x2(const SymMat& a) {
    SymEigen e;
    e.d = 2;
    const double a00 = a(0, 0), a11 = a(1, 1), a01 = a(0, 1);
    const double mean = 0.5 * (a00 + a11);
    const double delta = 0.5 * (a00 - a11);
    const double r = std::hypot(delta, a01);
    e.val[0] = mean + r;
    e.val[1] = mean - r;
    if (std::abs(a01) < 1e-300) {
        if (a00 >= a11) {
            e.vec[0] = {1.0, 0.0, 0.0};
            e.vec[1] = {0.0, 1.0, 0.0};
        } else {
            e.vec[0] = {0.0, 1.0, 0.0};
            e.vec[1] = {1.0, 0.0, 0.0};
        }
        return e;
    }
    // Eigenvector of the larger eigenvalue; pick the better-conditioned column.
    double vx, vy;
    if (delta >= 0.0) {
        vx = delta + r;
        vy = a01;
    } else {
        vx = a01;
        vy = r - delta;
    }
    const double n = std::hypot(vx, vy);
    vx /= n;
    vy /= n;
    e.vec[0] = {vx, vy, 0.0};
    e.vec[1] = {-vy, vx, 0.0};
    return e;
}

double cross_norm(const std::array<double, 3>& u, const std::array<double, 3>& w,
                  std::array<double, 3>& out) {
    out[0] = u[1] * w[2] - u[2] * w[1];
    out[1] = u[2] * w[0] - u[0] * w[2];
    out[2] = u[0] * w[1] - u[1] * w[0];
    return std::sqrt(out[0] * out[0] + out[1] * out[1] + out[2] * out[2]);
}

SymEigen eigen_3x3(const SymMat& a) {
    const double scale = std::max(a.max_abs(), 1e-300);
    // Characteristic roots of the shifted, scaled matrix (trigonometric form).
    SymMat b = a;
    b *= 1.0 / scale;
    const double q = b.trace() / 3.0;
    SymMat c = b;
    c.add(0, 0, -q);
    c.add(1, 1, -q);
    c.add(2, 2, -q);
    const double p2 = c.dot(c) / 6.0;  // dot counts off-diagonals twice
    const double p = std::sqrt(std::max(p2, 0.0));
    if (p < 1e-14) {
        SymEigen e;
        e.d = 3;
        e.val = {q * scale, q * scale, q * scale};
        e.vec[0] = {1.0, 0.0, 0.0};
        e.vec[1] = {0.0, 1.0, 0.0};
        e.vec[2] = {0.0, 0.0, 1.0};
        return e;
    }
    const double c00 = c(0, 0), c11 = c(1, 1), c22 = c(2, 2);
    const double c01 = c(0, 1), c02 = c(0, 2), c12 = c(1, 2);
    const double det = c00 * (c11 * c22 - c12 * c12) - c01 * (c01 * c22 - c12 * c02) +
                       c02 * (c01 * c12 - c11 * c02);
    const double r = det / (2.0 * p * p * p);
    // Near-multiple roots make the closed form ill-conditioned.
    const double disc = 1.0 - r * r;
    if (disc < 1e-14) return jacobi_eigen(a);
    const double phi = std::acos(std::clamp(r, -1.0, 1.0)) / 3.0;
    SymEigen e;
    e.d = 3;
    e.val[0] = (q + 2.0 * p * std::cos(phi)) * scale;
    e.val[2] = (q + 2.0 * p * std::cos(phi + 2.0 * kPi / 3.0)) * scale;
    e.val[1] = 3.0 * q * scale - e.val[0] - e.val[2];

    // Eigenvectors from cross products of rows of (a - val*I).
    for (int k = 0; k < 3; k += 2) {
        const double lam = e.val[k];
        std::array<std::array<double, 3>, 3> rows = {{{a(0, 0) - lam, a(0, 1), a(0, 2)},
                                                      {a(0, 1), a(1, 1) - lam, a(1, 2)},
                                                      {a(0, 2), a(1, 2), a(2, 2) - lam}}};
        std::array<double, 3> best{};
        double best_n = -1.0;
        for (int i = 0; i < 3; ++i) {
            for (int j = i + 1; j < 3; ++j) {
                std::array<double, 3> x;
                const double n = cross_norm(rows[i], rows[j], x);
                if (n > best_n) {
                    best_n = n;
                    best = x;
                }
            }
        }
        if (best_n <= 1e-12 * scale * scale) return jacobi_eigen(a);
        for (double& x : best) x /= best_n;
        e.vec[k] = best;
    }
    const double mid_n = cross_norm(e.vec[2], e.vec[0], e.vec[1]);
    if (mid_n <= 1e-8) return jacobi_eigen(a);
    for (double& x : e.vec[1]) x /= mid_n;
    return e;
}

}  // namespace

SymEigen sym_eigen(const SymMat& a) {
    switch (a.dim()) {
        case 1: {
            SymEigen e;
            e.d = 1;
            e.val[0] = a(0, 0);
            e.vec[0] = {1.0, 0.0, 0.0};
            return e;
        }
        case 2:
            return eigen_2x2(a);
        default:
            return eigen_3x3(a);
    }
}

SymMat sym_from_eigen(const SymEigen& e) {
    SymMat m(e.d);
    for (int k = 0; k < e.d; ++k) {
        if (e.val[k] == 0.0) continue;
        for (int i = 0; i < e.d; ++i)
            for (int j = i; j < e.d; ++j) m.add(i, j, e.val[k] * e.vec[k][i] * e.vec[k][j]);
    }
    return m;
}

SymMat psd_projection(const SymMat& a) {
    SymEigen e = sym_eigen(a);
    bool clipped = false;
    for (int k = 0; k < e.d; ++k) {
        if (e.val[k] < 0.0) {
            e.val[k] = 0.0;
            clipped = true;
        }
    }
    return clipped ? sym_from_eigen(e) : a;
}

double min_eigenvalue(const SymMat& a) { return sym_eigen(a).val[a.dim() - 1]; }

double max_eigenvalue(const SymMat& a) { return sym_eigen(a).val[0]; }

}  // namespace eot
