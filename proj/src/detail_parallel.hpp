#pragma once

namespace eot::detail {

// Static-schedule parallel loop that stays entirely out of the OpenMP
// runtime when threads == 1. Bodies must write disjoint outputs; results
// are then identical for any thread count.
template <typename Body>
inline void for_range(int n, int threads, Body&& body) {
    if (threads > 1) {
#pragma omp parallel for num_threads(threads) schedule(static)
        for (int i = 0; i < n; ++i) body(i);
    } else {
        for (int i = 0; i < n; ++i) body(i);
    }
}

}  // namespace eot::detail
