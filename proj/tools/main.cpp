#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "config.hpp"
#include "eot/dynamics.hpp"
#include "eot/orders.hpp"
#include "eot/solver.hpp"
#include "eot/transform.hpp"
#include "verify.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace eot;
using namespace eotcli;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitMaxIter = 3;

json number_or_inf(double v) {
    if (std::isfinite(v)) return v;
    return v > 0 ? "Infinity" : "-Infinity";
}

void write_report(const RunConfig& cfg, const json& j) {
    std::filesystem::create_directories(cfg.output_dir);
    std::ofstream out(join_path(cfg.output_dir, "report.json"));
    out << j.dump(2) << '\n';
}

json base_report(const RunConfig& cfg) {
    json j;
    j["command"] = cfg.command;
    j["grid.dim"] = cfg.grid_dim;
    j["grid.x.n"] = cfg.x_n;
    if (cfg.grid_dim == 2) j["grid.y.n"] = cfg.y_n;
    return j;
}

void write_fields_csv(const RunConfig& cfg, const SolveResult& r) {
    std::ofstream out(join_path(cfg.output_dir, "fields.csv"));
    out.precision(17);
    const Grid& g = r.psi.grid;
    out << (g.dim == 1 ? "node_index,x,psi,lambda_xx,interior"
                       : "node_index,x,y,psi,lambda_xx,lambda_xy,lambda_yy,interior")
        << '\n';
    for (int i = 0; i < g.num_nodes(); ++i) {
        const auto p = g.node(i);
        const int k = g.interior_index(i);
        out << i << ',' << p[0];
        if (g.dim == 2) out << ',' << p[1];
        out << ',' << r.psi.v[i];
        if (g.dim == 1) {
            out << ',' << (k >= 0 ? r.lambda.m[k](0, 0) : 0.0);
        } else {
            const SymMat m = k >= 0 ? r.lambda.m[k] : SymMat(2);
            out << ',' << m(0, 0) << ',' << m(0, 1) << ',' << m(1, 1);
        }
        out << ',' << (k >= 0 ? 1 : 0) << '\n';
    }
}

void write_trace_csv(const RunConfig& cfg, const SolveReport& rep) {
    std::ofstream out(join_path(cfg.output_dir, "convergence.csv"));
    out.precision(17);
    out << "iteration,primal,dual,residual\n";
    for (const TraceRow& row : rep.trace)
        out << row.iteration << ',' << row.primal << ',' << row.dual << ',' << row.residual
            << '\n';
}

int run_solve(const RunConfig& cfg) {
    const Grid g = build_grid(cfg);
    const DiscreteMeasure mu = load_measure(cfg, g, "mu");
    const DiscreteMeasure nu = load_measure(cfg, g, "nu");
    const Cost cost = load_cost(cfg);

    const auto t0 = std::chrono::steady_clock::now();
    const SolveResult r = solve_dynamic(mu, nu, cost, cfg.solver);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    json j = base_report(cfg);
    j["cost"] = cost.name();
    j["status"] = to_string(r.report.status);
    j["primal_value"] = number_or_inf(r.report.primal_value);
    j["dual_value"] = number_or_inf(r.report.dual_value);
    j["gap_rel"] = number_or_inf(r.report.gap);
    j["feas_residual_rel"] = number_or_inf(r.report.feas_residual);
    j["iterations"] = r.report.iterations;
    j["lower_bound"] = number_or_inf(lower_bound(mu, nu, cost));
    j["runtime_sec"] = seconds;
    j["infeasibility_reason"] = r.report.infeasibility_reason;
    write_report(cfg, j);

    if (r.report.status != SolveStatus::Infeasible) {
        std::filesystem::create_directories(cfg.output_dir);
        write_fields_csv(cfg, r);
    }
    if (cfg.solver.record_trace) {
        std::filesystem::create_directories(cfg.output_dir);
        write_trace_csv(cfg, r.report);
    }
    std::cout << "status " << to_string(r.report.status) << ", primal "
              << r.report.primal_value << ", dual " << r.report.dual_value << ", gap "
              << r.report.gap << ", residual " << r.report.feas_residual << ", iterations "
              << r.report.iterations << "\n";
    switch (r.report.status) {
        case SolveStatus::Optimal: return kExitOk;
        case SolveStatus::Infeasible: return kExitInfeasible;
        default: return kExitMaxIter;
    }
}

int run_check_order(const RunConfig& cfg) {
    const Grid g = build_grid(cfg);
    const DiscreteMeasure mu = load_measure(cfg, g, "mu");
    const DiscreteMeasure nu = load_measure(cfg, g, "nu");
    OrderOptions opts;
    opts.solver = cfg.solver;
    opts.tol_feas = cfg.solver.tol_feas;

    OrderReport rep;
    if (cfg.order_kind == "convex_1d")
        rep = convex_order_1d(mu, nu, opts);
    else if (cfg.order_kind == "convex")
        rep = convex_order(mu, nu, opts);
    else
        rep = subharmonic_order(mu, nu, opts);

    json j = base_report(cfg);
    j["order"] = cfg.order_kind;
    j["holds"] = rep.holds;
    j["decided"] = rep.decided;
    j["residual"] = number_or_inf(rep.residual);
    j["threshold"] = rep.threshold_note;
    j["certificate"] = rep.violation ? *rep.violation : "";
    write_report(cfg, j);

    if (rep.witness_field || rep.coupling) {
        std::filesystem::create_directories(cfg.output_dir);
        std::ofstream out(join_path(cfg.output_dir, "witness.csv"));
        out.precision(17);
        if (rep.witness_field) {
            out << "node_index,value\n";
            for (std::size_t i = 0; i < rep.witness_field->size(); ++i)
                out << i << ',' << (*rep.witness_field)[i] << '\n';
        } else {
            out << "entry,value\n";
            for (std::size_t i = 0; i < rep.coupling->size(); ++i)
                out << i << ',' << (*rep.coupling)[i] << '\n';
        }
    }
    std::cout << cfg.order_kind << " order " << (rep.holds ? "holds" : "fails")
              << (rep.decided ? "" : " (undecided: iteration limit)") << "\n";
    if (!rep.decided) return kExitMaxIter;
    return rep.holds ? kExitOk : kExitInfeasible;
}

int run_g_transform(const RunConfig& cfg) {
    const Grid g = build_grid(cfg);
    const ScalarField phi = load_scalar_field(cfg, g, cfg.phi_file);
    const Cost cost = load_cost(cfg);
    TransformOptions opts;
    opts.solver = cfg.solver;

    const GTransformResult g1 = g_transform(phi, cost, opts);
    const GTransformResult g2 = g_transform(g1.values, cost, opts);
    double idempotence_dev = 0.0;
    double max_drop = 0.0;
    for (int n : g1.admissible_nodes) {
        idempotence_dev = std::max(idempotence_dev, std::abs(g2.values.v[n] - g1.values.v[n]));
        max_drop = std::max(max_drop, phi.v[n] - g1.values.v[n]);
    }
    std::filesystem::create_directories(cfg.output_dir);
    write_transform_csv(phi, g1, g2, join_path(cfg.output_dir, "gtransform.csv"));

    json j = base_report(cfg);
    j["cost"] = cost.name();
    j["admissible_nodes"] = g1.admissible_nodes.size();
    j["max_drop"] = max_drop;
    j["is_invariant"] = max_drop <= g1.per_solve_tol;
    j["idempotence_deviation"] = idempotence_dev;
    j["per_solve_tol"] = g1.per_solve_tol;
    write_report(cfg, j);
    std::cout << "transform written; max drop " << max_drop << ", idempotence deviation "
              << idempotence_dev << "\n";
    return kExitOk;
}

int run_interpolate(const RunConfig& cfg) {
    const Grid g = build_grid(cfg);
    const DiscreteMeasure mu = load_measure(cfg, g, "mu");
    const DiscreteMeasure nu = load_measure(cfg, g, "nu");
    const DiscreteMeasure mid = interpolate(mu, nu, cfg.interpolate_t);

    std::filesystem::create_directories(cfg.output_dir);
    write_measure(mid, join_path(cfg.output_dir, "interpolated.txt"));
    const Trajectory tr = make_trajectory(mu, nu, {0.0, cfg.interpolate_t, 1.0});
    export_trajectory(tr, join_path(cfg.output_dir, "trajectory.csv"));

    const auto b = barycenter(mid);
    json j = base_report(cfg);
    j["t"] = cfg.interpolate_t;
    j["mass"] = total_mass(mid);
    j["barycenter_x"] = b[0];
    if (g.dim == 2) j["barycenter_y"] = b[1];
    j["output_measure"] = "interpolated.txt";
    j["output_trajectory"] = "trajectory.csv";
    write_report(cfg, j);
    std::cout << "interpolated measure written (t = " << cfg.interpolate_t << ")\n";
    return kExitOk;
}

int run_verify_command(const RunConfig& cfg) {
    const auto checks = run_verify(cfg);
    int failed = 0;
    json j = base_report(cfg);
    for (const CheckResult& c : checks) {
        j["check." + c.name] = c.passed;
        if (!c.passed) ++failed;
    }
    j["checks_total"] = checks.size();
    j["checks_failed"] = failed;
    write_report(cfg, j);
    return failed == 0 ? kExitOk : kExitInfeasible;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Grid solver for Hessian-constrained optimal transport"};
    std::string config_path;
    int threads = 1;
    bool trace = false;
    double tol_gap_override = -1.0, tol_feas_override = -1.0;
    app.add_option("--config", config_path, "Run configuration file (key = value lines)");
    app.add_option("--threads", threads, "Worker threads for node-parallel loops")
        ->check(CLI::PositiveNumber);
    app.add_flag("--trace", trace, "Emit convergence.csv for solves");
    app.add_option("--tol-gap", tol_gap_override, "Override solver.tol_gap");
    app.add_option("--tol-feas", tol_feas_override, "Override solver.tol_feas");
    CLI11_PARSE(app, argc, argv);

    try {
        RunConfig cfg;
        if (!config_path.empty()) {
            cfg = parse_config(config_path);
        } else {
            cfg.command = "verify";  // default self-check run
        }
        cfg.solver.threads = threads;
        cfg.solver.record_trace = trace;
        if (tol_gap_override > 0.0) cfg.solver.tol_gap = tol_gap_override;
        if (tol_feas_override > 0.0) cfg.solver.tol_feas = tol_feas_override;

        if (cfg.command == "solve") return run_solve(cfg);
        if (cfg.command == "check-order") return run_check_order(cfg);
        if (cfg.command == "g-transform") return run_g_transform(cfg);
        if (cfg.command == "interpolate") return run_interpolate(cfg);
        return run_verify_command(cfg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
}
