#pragma once

#include <array>
#include <string>
#include <vector>

#include "eot/grid.hpp"
#include "eot/symmat.hpp"

namespace eot {

// Atomic nonnegative measure on grid nodes.
struct DiscreteMeasure {
    Grid grid;
    std::vector<double> w;  // one weight per node, >= 0

    DiscreteMeasure() = default;
    explicit DiscreteMeasure(const Grid& g) : grid(g), w(g.num_nodes(), 0.0) {}
};

struct Atom {
    double x = 0.0;
    double y = 0.0;
    double weight = 0.0;
};

// Places atoms on their nodes. Coordinates must match a node to within
// h * 1e-9 per axis; throws otherwise, and on negative weights.
DiscreteMeasure measure_from_atoms(const Grid& g, const std::vector<Atom>& atoms);

// Text formats: a line "atoms" followed by "x [y] w" rows, or a line
// "dense" followed by one weight per node in node-index order.
// '#' starts a comment.
DiscreteMeasure read_measure(const Grid& g, const std::string& path);
void write_measure(const DiscreteMeasure& m, const std::string& path);

double total_mass(const DiscreteMeasure& m);

// Throws on zero total mass.
std::array<double, 2> barycenter(const DiscreteMeasure& m);

// Variance of the probability normalization of m. Throws on zero mass.
double variance(const DiscreteMeasure& m);

// Raw second moment sum_i w_i x_i x_i^T (not normalized).
SymMat second_moment_matrix(const DiscreteMeasure& m);

// True when every atom lies at least `margin` nodes away from the boundary.
bool support_within_margin(const DiscreteMeasure& m, int margin);

}  // namespace eot
