#pragma once

#include <string>
#include <utility>
#include <vector>

#include "config.hpp"

namespace eotcli {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

// Built-in invariant suite: adjoint identity, quadratic exactness, prox
// optimality, duality gap on a known instance, weak duality and order
// consistency. Prints one pass/fail line per check.
std::vector<CheckResult> run_verify(const RunConfig& cfg);

}  // namespace eotcli
