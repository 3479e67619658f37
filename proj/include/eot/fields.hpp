#pragma once

#include <cmath>
#include <vector>

#include "eot/grid.hpp"
#include "eot/symmat.hpp"

namespace eot {

// Scalar values on every node.
struct ScalarField {
    Grid grid;
    std::vector<double> v;

    ScalarField() = default;
    explicit ScalarField(const Grid& g) : grid(g), v(g.num_nodes(), 0.0) {}

    template <typename F>
    static ScalarField sample(const Grid& g, F&& f) {
        ScalarField s(g);
        for (int i = 0; i < g.num_nodes(); ++i) {
            const auto p = g.node(i);
            s.v[i] = f(p[0], p[1]);
        }
        return s;
    }
};

// One symmetric dim x dim matrix per interior node, indexed compactly.
struct MatrixField {
    Grid grid;
    std::vector<SymMat> m;

    MatrixField() = default;
    explicit MatrixField(const Grid& g)
        : grid(g), m(g.num_interior(), SymMat(g.dim)) {}
};

inline double dot(const ScalarField& a, const ScalarField& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.v.size(); ++i) s += a.v[i] * b.v[i];
    return s;
}

inline double dot(const MatrixField& a, const MatrixField& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.m.size(); ++i) s += a.m[i].dot(b.m[i]);
    return s;
}

inline double norm2(const ScalarField& a) { return std::sqrt(dot(a, a)); }
inline double norm2(const MatrixField& a) { return std::sqrt(dot(a, a)); }

inline double norm_inf(const ScalarField& a) {
    double m = 0.0;
    for (double x : a.v) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace eot
