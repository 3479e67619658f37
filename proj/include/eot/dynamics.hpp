#pragma once

#include <string>
#include <vector>

#include "eot/fields.hpp"
#include "eot/measure.hpp"

namespace eot {

// Time slices of the optimal evolution. The stationary solution induces the
// straight-line interpolation between the endpoints, so frames share mass
// and barycenter.
struct Trajectory {
    std::vector<double> times;
    std::vector<DiscreteMeasure> frames;
};

// (1 - t) mu + t nu node-wise. Throws when t is outside [0, 1] or the
// masses or grids disagree.
DiscreteMeasure interpolate(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double t);

Trajectory make_trajectory(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                           const std::vector<double>& times);

// <rho_t, psi> per time; affine in t with slope <nu - mu, psi>.
std::vector<double> convex_observable_trace(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                            const ScalarField& psi,
                                            const std::vector<double>& times);

// CSV rows time,node_index,x[,y],weight with 17 significant digits; one row
// per (time, node) pair.
void export_trajectory(const Trajectory& tr, const std::string& path);
Trajectory read_trajectory(const Grid& g, const std::string& path);

}  // namespace eot
