#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

namespace eot {

// Uniform node lattice over an axis-aligned rectangle. 1D or 2D.
// Nodes are indexed x-fastest: node = ix + nx * iy.
// Interior nodes (all stencil neighbours present) carry their own
// compact index, also x-fastest.
struct Grid {
    int dim = 1;
    std::array<double, 2> lo{0.0, 0.0};
    std::array<double, 2> hi{1.0, 1.0};
    std::array<int, 2> n{2, 1};
    std::array<double, 2> h{1.0, 1.0};

    static Grid line(double a, double b, int nodes) {
        Grid g;
        g.dim = 1;
        g.lo = {a, 0.0};
        g.hi = {b, 0.0};
        g.n = {nodes, 1};
        g.validate();
        return g;
    }

    static Grid rect(double ax, double bx, int nx, double ay, double by, int ny) {
        Grid g;
        g.dim = 2;
        g.lo = {ax, ay};
        g.hi = {bx, by};
        g.n = {nx, ny};
        g.validate();
        return g;
    }

    void validate() {
        for (int a = 0; a < dim; ++a) {
            if (n[a] < 5) throw std::invalid_argument("Grid: need at least 5 nodes per axis");
            if (!(hi[a] > lo[a])) throw std::invalid_argument("Grid: empty axis interval");
            h[a] = (hi[a] - lo[a]) / (n[a] - 1);
        }
        if (dim == 1) {
            n[1] = 1;
            h[1] = 1.0;
        }
    }

    int num_nodes() const { return n[0] * n[1]; }
    int num_interior() const {
        return dim == 1 ? n[0] - 2 : (n[0] - 2) * (n[1] - 2);
    }

    double coord(int axis, int i) const {
        // Endpoints reproduce the bounds exactly.
        if (i == 0) return lo[axis];
        if (i == n[axis] - 1) return hi[axis];
        return lo[axis] + i * h[axis];
    }

    std::array<double, 2> node(int idx) const {
        const int ix = idx % n[0];
        const int iy = idx / n[0];
        return {coord(0, ix), dim == 2 ? coord(1, iy) : 0.0};
    }

    int index(int ix, int iy = 0) const { return ix + n[0] * iy; }

    bool is_interior(int idx) const {
        const int ix = idx % n[0];
        const int iy = idx / n[0];
        if (ix < 1 || ix > n[0] - 2) return false;
        if (dim == 2 && (iy < 1 || iy > n[1] - 2)) return false;
        return true;
    }

    // Distance (in node counts) from the nearest boundary.
    int boundary_distance(int idx) const {
        const int ix = idx % n[0];
        const int iy = idx / n[0];
        int d = std::min(ix, n[0] - 1 - ix);
        if (dim == 2) d = std::min(d, std::min(iy, n[1] - 1 - iy));
        return d;
    }

    int interior_index(int idx) const {
        const int ix = idx % n[0];
        const int iy = idx / n[0];
        if (!is_interior(idx)) return -1;
        if (dim == 1) return ix - 1;
        return (ix - 1) + (n[0] - 2) * (iy - 1);
    }

    int interior_to_node(int k) const {
        if (dim == 1) return k + 1;
        const int ix = k % (n[0] - 2);
        const int iy = k / (n[0] - 2);
        return index(ix + 1, iy + 1);
    }

    // Nearest node to a point, or -1 if any coordinate is farther than tol
    // from the lattice.
    int nearest_node(double x, double y, double tol) const {
        int ij[2] = {0, 0};
        const double c[2] = {x, y};
        for (int a = 0; a < dim; ++a) {
            const double t = (c[a] - lo[a]) / h[a];
            const int i = static_cast<int>(std::lround(t));
            if (i < 0 || i >= n[a]) return -1;
            if (std::abs(c[a] - coord(a, i)) > tol) return -1;
            ij[a] = i;
        }
        return index(ij[0], ij[1]);
    }

    bool same_layout(const Grid& o) const {
        if (dim != o.dim) return false;
        for (int a = 0; a < dim; ++a) {
            if (n[a] != o.n[a] || lo[a] != o.lo[a] || hi[a] != o.hi[a]) return false;
        }
        return true;
    }
};

}  // namespace eot
