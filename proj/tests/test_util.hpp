#pragma once

// Shared generators for solver and order tests: random atomic measures and
// mean-preserving spreads, which produce convex-ordered pairs by
// construction.

#include <utility>
#include <vector>

#include "eot/measure.hpp"
#include "eot/rng.hpp"

namespace testutil {

// Random measure supported at least two nodes inside the boundary.
inline eot::DiscreteMeasure random_measure_1d(const eot::Grid& g, eot::Rng& rng, int atoms) {
    eot::DiscreteMeasure m(g);
    const int lo = 2, hi = g.n[0] - 3;
    for (int a = 0; a < atoms; ++a) m.w[rng.uniform_int(lo, hi)] += rng.uniform(0.1, 1.0);
    return m;
}

// Splits mass at interior atoms symmetrically to both sides; the result
// dominates the input in convex order and keeps the support margin.
inline eot::DiscreteMeasure spread_1d(const eot::DiscreteMeasure& m, eot::Rng& rng, int rounds) {
    eot::DiscreteMeasure out = m;
    const int lo = 2, hi = m.grid.n[0] - 3;
    for (int r = 0; r < rounds; ++r) {
        std::vector<int> support;
        for (int i = lo; i <= hi; ++i)
            if (out.w[i] > 0.0) support.push_back(i);
        if (support.empty()) break;
        const int i = support[rng.uniform_int(0, static_cast<int>(support.size()) - 1)];
        const int reach = std::min(i - lo, hi - i);
        if (reach < 1) continue;
        const int j = rng.uniform_int(1, reach);
        const double shift = out.w[i] * rng.uniform(0.2, 0.5);
        out.w[i] -= 2.0 * shift;
        out.w[i - j] += shift;
        out.w[i + j] += shift;
    }
    return out;
}

inline std::pair<eot::DiscreteMeasure, eot::DiscreteMeasure> random_ordered_pair_1d(
    const eot::Grid& g, eot::Rng& rng) {
    const eot::DiscreteMeasure mu = random_measure_1d(g, rng, 1 + static_cast<int>(rng.next() % 3));
    const eot::DiscreteMeasure nu = spread_1d(mu, rng, 1 + static_cast<int>(rng.next() % 4));
    return {mu, nu};
}

}  // namespace testutil
