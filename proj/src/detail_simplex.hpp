#pragma once

#include <algorithm>
#include <vector>

namespace eot::detail {

// Euclidean projection onto { p >= 0, sum p = total }.
inline void project_simplex(std::vector<double>& p, double total) {
    const std::size_t n = p.size();
    std::vector<double> u = p;
    std::sort(u.begin(), u.end(), std::greater<double>());
    double css = 0.0;
    double theta = 0.0;
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
        css += u[i];
        const double t = (css - total) / static_cast<double>(i + 1);
        if (u[i] - t > 0.0) {
            theta = t;
            k = i + 1;
        }
    }
    if (k == 0) theta = (css - total) / static_cast<double>(n);
    for (double& x : p) x = std::max(x - theta, 0.0);
}

}  // namespace eot::detail
