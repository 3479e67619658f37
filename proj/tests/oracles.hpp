#pragma once

// Self-contained brute-force oracles for the cost module. Everything here
// is deliberately written from scratch (local 2x2 eigenvalues, local cost
// evaluation) so the checks stay independent of the library code paths
// they judge.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <utility>

namespace oracle {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Sym2 {
    double a = 0.0;  // (0,0)
    double b = 0.0;  // (0,1)
    double c = 0.0;  // (1,1)
};

inline std::pair<double, double> eigs2(const Sym2& m) {  // descending
    const double mean = 0.5 * (m.a + m.c);
    const double r = std::hypot(0.5 * (m.a - m.c), m.b);
    return {mean + r, mean - r};
}

inline double frob2(const Sym2& m) {
    return std::sqrt(m.a * m.a + 2.0 * m.b * m.b + m.c * m.c);
}

inline Sym2 psd_proj2(const Sym2& m) {
    const auto [l1, l2] = eigs2(m);
    if (l2 >= 0.0) return m;
    if (l1 <= 0.0) return {};
    // Rank-one part along the top eigenvector.
    double vx, vy;
    const double d = 0.5 * (m.a - m.c);
    if (d >= 0.0) {
        vx = d + std::hypot(d, m.b);
        vy = m.b;
    } else {
        vx = m.b;
        vy = std::hypot(d, m.b) - d;
    }
    const double n = std::hypot(vx, vy);
    if (n < 1e-300) return {std::max(m.a, 0.0), 0.0, std::max(m.c, 0.0)};
    vx /= n;
    vy /= n;
    return {l1 * vx * vx, l1 * vx * vy, l1 * vy * vy};
}

enum class Kind { Trace, ScaledIdentity, MaxEigen };

inline double cost_value(Kind kind, const Sym2& m) {
    const auto [l1, l2] = eigs2(m);
    const double tol = 1e-10 * std::max(frob2(m), 1e-300);
    switch (kind) {
        case Kind::Trace:
            return l2 >= -tol ? m.a + m.c : kInf;
        case Kind::ScaledIdentity: {
            const double t = 0.5 * (m.a + m.c);
            if (std::abs(m.a - t) > tol || std::abs(m.c - t) > tol || std::abs(m.b) > tol ||
                t < -tol)
                return kInf;
            return std::max(t, 0.0);
        }
        default:
            return l2 >= -tol ? std::max(l1, 0.0) : kInf;
    }
}

inline double support_value(Kind kind, const Sym2& m) {
    const auto [l1, l2] = eigs2(m);
    switch (kind) {
        case Kind::Trace:
            return l1;
        case Kind::ScaledIdentity:
            return m.a + m.c;
        default:
            return std::max(l1, 0.0) + std::max(l2, 0.0);
    }
}

inline double prox_objective(Kind kind, const Sym2& v, double tau, const Sym2& x) {
    const double f = cost_value(kind, x);
    if (f == kInf) return kInf;
    const Sym2 d{x.a - v.a, x.b - v.b, x.c - v.c};
    return tau * f + 0.5 * (d.a * d.a + 2.0 * d.b * d.b + d.c * d.c);
}

// Dense lattice search with recentering refinement. Lattice points are
// pushed onto the PSD cone so boundary minimizers are reachable at full
// resolution. Objective accuracy is well below 1e-6 on unit-scale inputs.
inline double grid_search_prox(Kind kind, const Sym2& v, double tau) {
    if (kind == Kind::ScaledIdentity) {
        double center = 0.0, radius = std::abs(v.a) + std::abs(v.c) + tau + 1.0;
        double best = prox_objective(kind, v, tau, {});
        for (int stage = 0; stage < 6; ++stage) {
            double best_t = center;
            for (int i = 0; i <= 200; ++i) {
                const double t = std::max(center - radius + 2.0 * radius * i / 200.0, 0.0);
                const double obj = prox_objective(kind, v, tau, {t, 0.0, t});
                if (obj < best) {
                    best = obj;
                    best_t = t;
                }
            }
            center = best_t;
            radius *= 0.02;
        }
        return best;
    }
    Sym2 center = psd_proj2(v);
    double radius = frob2(v) + tau + 1.0;
    double best = kInf;
    const int pts = 21;
    for (int stage = 0; stage < 5; ++stage) {
        Sym2 arg = center;
        for (int ia = 0; ia < pts; ++ia) {
            for (int ib = 0; ib < pts; ++ib) {
                for (int ic = 0; ic < pts; ++ic) {
                    Sym2 x{center.a - radius + 2.0 * radius * ia / (pts - 1),
                           center.b - radius + 2.0 * radius * ib / (pts - 1),
                           center.c - radius + 2.0 * radius * ic / (pts - 1)};
                    x = psd_proj2(x);
                    const double obj = prox_objective(kind, v, tau, x);
                    if (obj < best) {
                        best = obj;
                        arg = x;
                    }
                }
            }
        }
        center = arg;
        radius *= 3.0 / (pts - 1);
    }
    return best;
}

// Best squared distance from a to { support <= 1 } found by lattice search.
inline double grid_search_project_dual(Kind kind, const Sym2& a) {
    Sym2 center = a;
    double radius = frob2(a) + 2.0;
    double best = kInf;
    const int pts = 21;
    for (int stage = 0; stage < 5; ++stage) {
        Sym2 arg = center;
        for (int ia = 0; ia < pts; ++ia) {
            for (int ib = 0; ib < pts; ++ib) {
                for (int ic = 0; ic < pts; ++ic) {
                    const Sym2 x{center.a - radius + 2.0 * radius * ia / (pts - 1),
                                 center.b - radius + 2.0 * radius * ib / (pts - 1),
                                 center.c - radius + 2.0 * radius * ic / (pts - 1)};
                    if (support_value(kind, x) > 1.0) continue;
                    const Sym2 d{x.a - a.a, x.b - a.b, x.c - a.c};
                    const double obj = d.a * d.a + 2.0 * d.b * d.b + d.c * d.c;
                    if (obj < best) {
                        best = obj;
                        arg = x;
                    }
                }
            }
        }
        center = arg;
        radius *= 3.0 / (pts - 1);
    }
    return best;
}

}  // namespace oracle
