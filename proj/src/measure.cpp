#include "eot/measure.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace eot {

DiscreteMeasure measure_from_atoms(const Grid& g, const std::vector<Atom>& atoms) {
    DiscreteMeasure m(g);
    const double tol = 1e-9 * std::min(g.h[0], g.dim == 2 ? g.h[1] : g.h[0]);
    for (const Atom& a : atoms) {
        if (a.weight < 0.0) throw std::invalid_argument("measure: negative atom weight");
        const int idx = g.nearest_node(a.x, a.y, tol);
        if (idx < 0) {
            std::ostringstream os;
            os << "measure: atom (" << a.x;
            if (g.dim == 2) os << ", " << a.y;
            os << ") does not lie on a grid node";
            throw std::invalid_argument(os.str());
        }
        m.w[idx] += a.weight;
    }
    return m;
}

DiscreteMeasure read_measure(const Grid& g, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("measure: cannot open " + path);
    std::string token;
    std::vector<std::string> items;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string t;
        while (ls >> t) items.push_back(t);
    }
    if (items.empty()) throw std::runtime_error("measure: empty file " + path);
    std::size_t pos = 0;
    std::string format = "atoms";
    if (items[0] == "atoms" || items[0] == "dense") format = items[pos++];
    auto next_value = [&]() {
        if (pos >= items.size()) throw std::runtime_error("measure: truncated file " + path);
        std::size_t used = 0;
        const double v = std::stod(items[pos], &used);
        if (used != items[pos].size())
            throw std::runtime_error("measure: bad number '" + items[pos] + "' in " + path);
        ++pos;
        return v;
    };
    if (format == "dense") {
        DiscreteMeasure m(g);
        for (int i = 0; i < g.num_nodes(); ++i) {
            m.w[i] = next_value();
            if (m.w[i] < 0.0) throw std::runtime_error("measure: negative weight in " + path);
        }
        if (pos != items.size()) throw std::runtime_error("measure: trailing data in " + path);
        return m;
    }
    std::vector<Atom> atoms;
    while (pos < items.size()) {
        Atom a;
        a.x = next_value();
        if (g.dim == 2) a.y = next_value();
        a.weight = next_value();
        atoms.push_back(a);
    }
    return measure_from_atoms(g, atoms);
}

void write_measure(const DiscreteMeasure& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("measure: cannot write " + path);
    out.precision(17);
    out << "atoms\n";
    for (int i = 0; i < m.grid.num_nodes(); ++i) {
        if (m.w[i] == 0.0) continue;
        const auto p = m.grid.node(i);
        out << p[0];
        if (m.grid.dim == 2) out << ' ' << p[1];
        out << ' ' << m.w[i] << '\n';
    }
}

double total_mass(const DiscreteMeasure& m) {
    double s = 0.0;
    for (double x : m.w) s += x;
    return s;
}

std::array<double, 2> barycenter(const DiscreteMeasure& m) {
    const double mass = total_mass(m);
    if (mass <= 0.0) throw std::invalid_argument("barycenter: zero total mass");
    std::array<double, 2> b{0.0, 0.0};
    for (int i = 0; i < m.grid.num_nodes(); ++i) {
        if (m.w[i] == 0.0) continue;
        const auto p = m.grid.node(i);
        b[0] += m.w[i] * p[0];
        b[1] += m.w[i] * p[1];
    }
    b[0] /= mass;
    b[1] /= mass;
    return b;
}

double variance(const DiscreteMeasure& m) {
    const double mass = total_mass(m);
    if (mass <= 0.0) throw std::invalid_argument("variance: zero total mass");
    const auto b = barycenter(m);
    double second = 0.0;
    for (int i = 0; i < m.grid.num_nodes(); ++i) {
        if (m.w[i] == 0.0) continue;
        const auto p = m.grid.node(i);
        second += m.w[i] * (p[0] * p[0] + p[1] * p[1]);
    }
    return second / mass - (b[0] * b[0] + b[1] * b[1]);
}

SymMat second_moment_matrix(const DiscreteMeasure& m) {
    SymMat s(m.grid.dim);
    for (int i = 0; i < m.grid.num_nodes(); ++i) {
        if (m.w[i] == 0.0) continue;
        const auto p = m.grid.node(i);
        s.add(0, 0, m.w[i] * p[0] * p[0]);
        if (m.grid.dim == 2) {
            s.add(0, 1, m.w[i] * p[0] * p[1]);
            s.add(1, 1, m.w[i] * p[1] * p[1]);
        }
    }
    return s;
}

bool support_within_margin(const DiscreteMeasure& m, int margin) {
    for (int i = 0; i < m.grid.num_nodes(); ++i) {
        if (m.w[i] > 0.0 && m.grid.boundary_distance(i) < margin) return false;
    }
    return true;
}

}  // namespace eot
