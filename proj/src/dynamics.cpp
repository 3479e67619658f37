#include "eot/dynamics.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace eot {

DiscreteMeasure interpolate(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double t) {
    if (t < 0.0 || t > 1.0) throw std::invalid_argument("interpolate: t outside [0, 1]");
    if (!mu.grid.same_layout(nu.grid)) throw std::invalid_argument("interpolate: grid mismatch");
    const double m0 = total_mass(mu), m1 = total_mass(nu);
    if (std::abs(m0 - m1) > 1e-9 * std::max({1.0, m0, m1}))
        throw std::invalid_argument("interpolate: total mass mismatch");
    DiscreteMeasure out(mu.grid);
    for (int i = 0; i < mu.grid.num_nodes(); ++i)
        out.w[i] = (1.0 - t) * mu.w[i] + t * nu.w[i];
    return out;
}

Trajectory make_trajectory(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                           const std::vector<double>& times) {
    if (total_mass(mu) > 0.0) {
        // Equal endpoint barycenters keep every frame barycenter constant.
        const auto bm = barycenter(mu);
        const auto bn = barycenter(nu);
        if (std::hypot(bm[0] - bn[0], bm[1] - bn[1]) > 1e-9)
            throw std::invalid_argument("make_trajectory: barycenter mismatch");
    }
    Trajectory tr;
    tr.times = times;
    tr.frames.reserve(times.size());
    for (double t : times) tr.frames.push_back(interpolate(mu, nu, t));
    return tr;
}

std::vector<double> convex_observable_trace(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                            const ScalarField& psi,
                                            const std::vector<double>& times) {
    if (!mu.grid.same_layout(psi.grid))
        throw std::invalid_argument("convex_observable_trace: grid mismatch");
    double at_mu = 0.0, at_nu = 0.0;
    for (int i = 0; i < mu.grid.num_nodes(); ++i) {
        at_mu += mu.w[i] * psi.v[i];
        at_nu += nu.w[i] * psi.v[i];
    }
    std::vector<double> out;
    out.reserve(times.size());
    for (double t : times) {
        if (t < 0.0 || t > 1.0)
            throw std::invalid_argument("convex_observable_trace: t outside [0, 1]");
        out.push_back((1.0 - t) * at_mu + t * at_nu);
    }
    return out;
}

void export_trajectory(const Trajectory& tr, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("export_trajectory: cannot write " + path);
    out.precision(17);
    const bool two_d = !tr.frames.empty() && tr.frames.front().grid.dim == 2;
    out << (two_d ? "time,node_index,x,y,weight" : "time,node_index,x,weight") << '\n';
    for (std::size_t f = 0; f < tr.frames.size(); ++f) {
        const DiscreteMeasure& m = tr.frames[f];
        for (int i = 0; i < m.grid.num_nodes(); ++i) {
            const auto p = m.grid.node(i);
            out << tr.times[f] << ',' << i << ',' << p[0];
            if (m.grid.dim == 2) out << ',' << p[1];
            out << ',' << m.w[i] << '\n';
        }
    }
}

Trajectory read_trajectory(const Grid& g, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_trajectory: cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("read_trajectory: empty file");
    Trajectory tr;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string cell;
        std::vector<double> row;
        while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
        const std::size_t expected = g.dim == 2 ? 5 : 4;
        if (row.size() != expected) throw std::runtime_error("read_trajectory: malformed row");
        const double t = row[0];
        const int node = static_cast<int>(row[1]);
        const double w = row.back();
        if (tr.times.empty() || tr.times.back() != t) {
            tr.times.push_back(t);
            tr.frames.emplace_back(g);
        }
        if (node < 0 || node >= g.num_nodes())
            throw std::runtime_error("read_trajectory: node index out of range");
        tr.frames.back().w[node] = w;
    }
    return tr;
}

}  // namespace eot
