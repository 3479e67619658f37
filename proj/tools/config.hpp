#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "eot/costs.hpp"
#include "eot/fields.hpp"
#include "eot/measure.hpp"
#include "eot/solver.hpp"

namespace eotcli {

// Flat key = value run description. Unknown keys are rejected so typos
// cannot silently change an experiment.
struct RunConfig {
    std::string command;  // solve | check-order | g-transform | interpolate | verify
    std::string cost_name = "trace";

    int grid_dim = 1;
    double x_min = 0.0, x_max = 1.0;
    int x_n = 65;
    double y_min = 0.0, y_max = 1.0;
    int y_n = 0;

    std::string mu_atoms, mu_file;
    std::string nu_atoms, nu_file;

    eot::SolveOptions solver;
    std::string order_kind = "convex";       // check-order
    std::string phi_file;                    // g-transform
    double interpolate_t = 0.5;              // interpolate
    std::string output_dir = ".";
    std::string verify_inject = "none";      // verify: none | adjoint_sign
    double verify_tol_scale = 1.0;

    std::string config_dir;  // directory of the config file, for relative paths
};

RunConfig parse_config(const std::string& path);

eot::Grid build_grid(const RunConfig& cfg);
eot::DiscreteMeasure load_measure(const RunConfig& cfg, const eot::Grid& g,
                                  const std::string& which);  // "mu" | "nu"
eot::Cost load_cost(const RunConfig& cfg);
eot::ScalarField load_scalar_field(const RunConfig& cfg, const eot::Grid& g,
                                   const std::string& path);

std::string join_path(const std::string& dir, const std::string& leaf);

}  // namespace eotcli
