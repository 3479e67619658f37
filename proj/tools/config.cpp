#include "config.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace eotcli {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

class KeyValues {
public:
    explicit KeyValues(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("config: cannot open " + path);
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            line = trim(line);
            if (line.empty()) continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw std::runtime_error("config: line " + std::to_string(lineno) +
                                         " is not of the form key = value");
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            if (key.empty()) throw std::runtime_error("config: empty key on line " +
                                                      std::to_string(lineno));
            if (!map_.emplace(key, value).second)
                throw std::runtime_error("config: duplicate key '" + key + "'");
        }
    }

    std::optional<std::string> take(const std::string& key) {
        auto it = map_.find(key);
        if (it == map_.end()) return std::nullopt;
        std::string v = it->second;
        map_.erase(it);
        return v;
    }

    std::string take_or(const std::string& key, const std::string& fallback) {
        auto v = take(key);
        return v ? *v : fallback;
    }

    double take_double(const std::string& key, double fallback) {
        auto v = take(key);
        if (!v) return fallback;
        std::size_t used = 0;
        const double d = std::stod(*v, &used);
        if (used != v->size())
            throw std::runtime_error("config: key '" + key + "' has a malformed number '" + *v +
                                     "'");
        return d;
    }

    long take_int(const std::string& key, long fallback) {
        auto v = take(key);
        if (!v) return fallback;
        std::size_t used = 0;
        const long d = std::stol(*v, &used);
        if (used != v->size())
            throw std::runtime_error("config: key '" + key + "' has a malformed integer '" + *v +
                                     "'");
        return d;
    }

    void reject_leftovers() const {
        if (map_.empty()) return;
        throw std::runtime_error("config: unknown key '" + map_.begin()->first + "'");
    }

private:
    std::map<std::string, std::string> map_;
};

}  // namespace

std::string join_path(const std::string& dir, const std::string& leaf) {
    if (leaf.empty() || leaf.front() == '/') return leaf;
    return (std::filesystem::path(dir) / leaf).string();
}

RunConfig parse_config(const std::string& path) {
    KeyValues kv(path);
    RunConfig cfg;
    cfg.config_dir = std::filesystem::path(path).parent_path().string();
    if (cfg.config_dir.empty()) cfg.config_dir = ".";

    auto cmd = kv.take("command");
    if (!cmd) throw std::runtime_error("config: missing required key 'command'");
    static const std::set<std::string> commands = {"solve", "check-order", "g-transform",
                                                   "interpolate", "verify"};
    if (!commands.count(*cmd)) throw std::runtime_error("config: unknown command '" + *cmd + "'");
    cfg.command = *cmd;

    cfg.cost_name = kv.take_or("cost", cfg.cost_name);
    cfg.grid_dim = static_cast<int>(kv.take_int("grid.dim", 1));
    if (cfg.grid_dim != 1 && cfg.grid_dim != 2)
        throw std::runtime_error("config: grid.dim must be 1 or 2");
    cfg.x_min = kv.take_double("grid.x.min", cfg.x_min);
    cfg.x_max = kv.take_double("grid.x.max", cfg.x_max);
    cfg.x_n = static_cast<int>(kv.take_int("grid.x.n", cfg.x_n));
    cfg.y_min = kv.take_double("grid.y.min", cfg.y_min);
    cfg.y_max = kv.take_double("grid.y.max", cfg.y_max);
    cfg.y_n = static_cast<int>(kv.take_int("grid.y.n", cfg.grid_dim == 2 ? cfg.x_n : 0));

    cfg.mu_atoms = kv.take_or("mu.atoms", "");
    cfg.mu_file = kv.take_or("mu.file", "");
    cfg.nu_atoms = kv.take_or("nu.atoms", "");
    cfg.nu_file = kv.take_or("nu.file", "");

    cfg.solver.max_iter = static_cast<int>(kv.take_int("solver.max_iter", cfg.solver.max_iter));
    cfg.solver.tol_gap = kv.take_double("solver.tol_gap", cfg.solver.tol_gap);
    cfg.solver.tol_feas = kv.take_double("solver.tol_feas", cfg.solver.tol_feas);
    cfg.solver.divergence_bound =
        kv.take_double("solver.divergence_bound", cfg.solver.divergence_bound);
    cfg.solver.seed = static_cast<std::uint64_t>(kv.take_int("solver.seed", 1));
    if (cfg.solver.max_iter < 1) throw std::runtime_error("config: solver.max_iter must be >= 1");
    if (cfg.solver.tol_gap <= 0.0 || cfg.solver.tol_feas <= 0.0)
        throw std::runtime_error("config: solver tolerances must be positive");

    cfg.order_kind = kv.take_or("order.kind", cfg.order_kind);
    cfg.phi_file = kv.take_or("transform.phi.file", "");
    cfg.interpolate_t = kv.take_double("interpolate.t", cfg.interpolate_t);
    // Outputs land next to the config unless an absolute path is given.
    cfg.output_dir = join_path(cfg.config_dir, kv.take_or("output.dir", cfg.output_dir));
    cfg.verify_inject = kv.take_or("verify.inject", cfg.verify_inject);
    cfg.verify_tol_scale = kv.take_double("verify.tol_scale", cfg.verify_tol_scale);

    kv.reject_leftovers();

    if (cfg.command == "check-order" && cfg.order_kind != "convex" &&
        cfg.order_kind != "convex_1d" && cfg.order_kind != "subharmonic")
        throw std::runtime_error("config: order.kind must be convex, convex_1d or subharmonic");
    if (cfg.command == "g-transform" && cfg.phi_file.empty())
        throw std::runtime_error("config: g-transform requires transform.phi.file");
    if (cfg.verify_inject != "none" && cfg.verify_inject != "adjoint_sign")
        throw std::runtime_error("config: verify.inject must be none or adjoint_sign");
    const bool needs_measures =
        cfg.command == "solve" || cfg.command == "check-order" || cfg.command == "interpolate";
    if (needs_measures) {
        if (cfg.mu_atoms.empty() == cfg.mu_file.empty())
            throw std::runtime_error(
                "config: provide exactly one of mu.atoms or mu.file for this command");
        if (cfg.nu_atoms.empty() == cfg.nu_file.empty())
            throw std::runtime_error(
                "config: provide exactly one of nu.atoms or nu.file for this command");
    }
    return cfg;
}

eot::Grid build_grid(const RunConfig& cfg) {
    if (cfg.grid_dim == 1) return eot::Grid::line(cfg.x_min, cfg.x_max, cfg.x_n);
    return eot::Grid::rect(cfg.x_min, cfg.x_max, cfg.x_n, cfg.y_min, cfg.y_max, cfg.y_n);
}

namespace {

std::vector<eot::Atom> parse_atoms(const std::string& text, int dim) {
    std::vector<eot::Atom> atoms;
    std::stringstream groups(text);
    std::string group;
    while (std::getline(groups, group, ';')) {
        std::istringstream gs(group);
        std::vector<double> nums;
        double v;
        while (gs >> v) nums.push_back(v);
        if (nums.empty()) continue;
        if (static_cast<int>(nums.size()) != dim + 1)
            throw std::runtime_error("config: atom '" + group + "' needs " +
                                     std::to_string(dim + 1) + " numbers");
        eot::Atom a;
        a.x = nums[0];
        a.y = dim == 2 ? nums[1] : 0.0;
        a.weight = nums.back();
        atoms.push_back(a);
    }
    if (atoms.empty()) throw std::runtime_error("config: empty atom list");
    return atoms;
}

}  // namespace

eot::DiscreteMeasure load_measure(const RunConfig& cfg, const eot::Grid& g,
                                  const std::string& which) {
    const std::string& atoms = which == "mu" ? cfg.mu_atoms : cfg.nu_atoms;
    const std::string& file = which == "mu" ? cfg.mu_file : cfg.nu_file;
    if (!atoms.empty()) return eot::measure_from_atoms(g, parse_atoms(atoms, g.dim));
    return eot::read_measure(g, join_path(cfg.config_dir, file));
}

eot::Cost load_cost(const RunConfig& cfg) {
    std::string name = cfg.cost_name;
    if (name.rfind("custom:", 0) == 0)
        name = "custom:" + join_path(cfg.config_dir, name.substr(7));
    eot::Cost cost = eot::Cost::parse(name);
    if (cost.variant() == eot::CostVariant::Custom) {
        const auto [coercivity, growth] = cost.sample_growth_bounds();
        if (coercivity <= 0.0)
            std::fprintf(stderr,
                         "warning: custom cost is not coercive on sampled matrices "
                         "(min f/|M| = %g); results may be meaningless\n",
                         coercivity);
        else
            std::fprintf(stderr, "custom cost: sampled growth constant f <= %.3g tr\n", growth);
    }
    return cost;
}

eot::ScalarField load_scalar_field(const RunConfig& cfg, const eot::Grid& g,
                                   const std::string& path) {
    const std::string full = join_path(cfg.config_dir, path);
    std::ifstream in(full);
    if (!in) throw std::runtime_error("field: cannot open " + full);
    std::vector<std::string> items;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string t;
        while (ls >> t) items.push_back(t);
    }
    if (items.empty()) throw std::runtime_error("field: empty file " + full);
    eot::ScalarField f(g);
    std::size_t pos = 0;
    auto next_value = [&]() {
        if (pos >= items.size()) throw std::runtime_error("field: truncated file " + full);
        return std::stod(items[pos++]);
    };
    if (items[0] == "dense") {
        ++pos;
        for (int i = 0; i < g.num_nodes(); ++i) f.v[i] = next_value();
        if (pos != items.size()) throw std::runtime_error("field: trailing data in " + full);
        return f;
    }
    std::vector<bool> seen(g.num_nodes(), false);
    const double tol = 1e-9 * std::min(g.h[0], g.dim == 2 ? g.h[1] : g.h[0]);
    while (pos < items.size()) {
        const double x = next_value();
        const double y = g.dim == 2 ? next_value() : 0.0;
        const double v = next_value();
        const int idx = g.nearest_node(x, y, tol);
        if (idx < 0) throw std::runtime_error("field: coordinates off the grid in " + full);
        f.v[idx] = v;
        seen[idx] = true;
    }
    for (int i = 0; i < g.num_nodes(); ++i) {
        if (!seen[i]) throw std::runtime_error("field: node values missing in " + full);
    }
    return f;
}

}  // namespace eotcli
