#include "cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#include "rde/certify.hpp"
#include "rde/demos.hpp"
#include "rde/errors.hpp"
#include "rde/lqmc.hpp"
#include "rde/problem_io.hpp"
#include "rde/riccati.hpp"

namespace rde::cli {

namespace {

struct Flags {
    std::string problem_path;
    int grid = kDefaultGridSteps;
    bool grid_set = false;
    std::optional<double> tol;
    std::optional<double> alpha;
    bool alpha_scan = false;
    int coarse = 64;
    std::optional<std::uint64_t> seed;
    int paths = 10000;
    std::optional<int> sim_steps;
    std::vector<double> x0;
    std::string out_path;
    std::string gain_out_path;
    std::string format = "csv";
    std::string emit_path;

    Rotation2dParams rotation;
    General1dParams general;
    double r_constant = -0.05;
};

std::string num(double v) {
    std::ostringstream os;
    os << std::setprecision(10) << v;
    return os.str();
}

void print_matrix(std::ostream& out, const std::string& label, const Matrix& m) {
    out << label << ": [";
    for (int i = 0; i < m.rows(); ++i) {
        out << (i ? ", [" : "[");
        for (int j = 0; j < m.cols(); ++j) out << (j ? ", " : "") << num(m(i, j));
        out << "]";
    }
    out << "]\n";
}

void add_grid(CLI::App* cmd, Flags& f) {
    cmd->add_option_function<int>(
           "--grid", [&f](int n) { f.grid = n; f.grid_set = true; },
           "number of uniform time steps (default 1000)")
        ->check(CLI::Range(2, 10'000'000));
}

void add_solve_flags(CLI::App* cmd, Flags& f) {
    cmd->add_option("--tol", f.tol, "convergence tolerance on sup |P_n - P_{n-1}|");
    cmd->add_option("--out", f.out_path, "write the trajectory to this file");
    cmd->add_option("--gain-out", f.gain_out_path, "write the feedback gain trajectory (CSV)");
    cmd->add_option("--format", f.format, "trajectory format")
        ->check(CLI::IsMember({"csv", "json"}));
}

void add_certify_flags(CLI::App* cmd, Flags& f) {
    cmd->add_option("--alpha", f.alpha, "certificate parameter in (0,1)");
    cmd->add_flag("--alpha-scan", f.alpha_scan, "maximize the margin over alpha");
    cmd->add_option("--coarse", f.coarse, "coarse alpha grid size for scans")
        ->check(CLI::Range(8, 100000));
}

void add_simulate_flags(CLI::App* cmd, Flags& f) {
    cmd->add_option("--seed", f.seed, "RNG seed (required for simulate)");
    cmd->add_option("--paths", f.paths, "number of Monte Carlo paths")->check(CLI::PositiveNumber);
    cmd->add_option("--sim-steps", f.sim_steps, "Euler-Maruyama steps (default: grid steps)");
    cmd->add_option("--x0", f.x0, "initial state (default: all ones)")->delimiter(',');
}

SolverOptions solver_options(const Flags& f) {
    SolverOptions opts;
    opts.conv_tol = f.tol;
    return opts;
}

int report_failure(const SolveFailure& fail, std::ostream& out) {
    out << "status: failed\n";
    out << "kind: " << to_string(fail.kind) << "\n";
    if (fail.at_time) out << "at_time: " << num(*fail.at_time) << "\n";
    out << "iteration: " << fail.at_iteration << "\n";
    out << "diagnostics: " << fail.diagnostics << "\n";
    return kSolverFailure;
}

int cmd_solve(const RiccatiProblem& prob, const Flags& f, std::ostream& out, std::ostream& err) {
    const SolveResult result = quasilinearize(prob, solver_options(f));
    if (const auto* fail = std::get_if<SolveFailure>(&result)) return report_failure(*fail, out);
    const auto& sol = std::get<RiccatiSolution>(result);

    double min_gap = sol.gap.scalar_at_node(0);
    for (int k = 0; k < sol.gap.grid().n_nodes(); ++k) min_gap = std::min(min_gap, sol.gap.scalar_at_node(k));
    out << "status: converged\n";
    out << "iterations: " << sol.iterations << "\n";
    print_matrix(out, "P(0)", sol.P.at_node(0));
    out << "min_gap: " << num(min_gap) << "\n";
    out << "sup_residual: " << num(sol.sup_residual) << "\n";
    out << "iterate_history:";
    for (double h : sol.iterate_history_norms) out << " " << num(h);
    out << "\n";
    if (!sol.residual_ok) err << "warning: residual exceeds the configured tolerance\n";

    if (!f.out_path.empty()) {
        std::ofstream file(f.out_path);
        if (!file) throw ParseError("--out", "cannot write " + f.out_path);
        if (f.format == "json") {
            file << solution_json(sol) << "\n";
        } else {
            write_solution_csv(file, sol);
        }
    }
    if (!f.gain_out_path.empty()) {
        std::ofstream file(f.gain_out_path);
        if (!file) throw ParseError("--gain-out", "cannot write " + f.gain_out_path);
        write_gain_csv(file, sol);
    }
    return kOk;
}

void print_certificate(const Certificate& c, std::ostream& out) {
    out << "verdict: " << to_string(c.verdict) << "\n";
    out << "alpha: " << num(c.alpha) << "\n";
    out << "margin: " << num(c.margin) << "\n";
    if (c.phi_path) {
        double phi_min = c.phi_path->scalar_at_node(0);
        for (int k = 0; k < c.phi_path->grid().n_nodes(); ++k)
            phi_min = std::min(phi_min, c.phi_path->scalar_at_node(k));
        out << "phi_min: " << num(phi_min) << "\n";
    }
}

int cmd_certify(const RiccatiProblem& prob, const Flags& f, std::ostream& out) {
    Certificate cert;
    if (f.alpha_scan) {
        cert = alpha_scan(prob, f.coarse).best;
    } else {
        cert = certify_thm11(prob, f.alpha.value_or(0.5));
    }
    print_certificate(cert, out);
    return cert.certified() ? kOk : kRejected;
}

int cmd_scan(const RiccatiProblem& prob, const Flags& f, std::ostream& out) {
    const AlphaScan scan = alpha_scan(prob, f.coarse);
    out << "best_alpha: " << num(scan.best_alpha) << "\n";
    print_certificate(scan.best, out);
    out << "curve:\nalpha,margin\n";
    for (const auto& [a, m] : scan.curve) out << num(a) << "," << num(m) << "\n";
    return scan.best.certified() ? kOk : kRejected;
}

int cmd_simulate(const RiccatiProblem& prob, const Flags& f, std::ostream& out) {
    if (!f.seed) throw ValidationError("--seed", "simulate requires --seed");
    const SolveResult result = quasilinearize(prob, solver_options(f));
    if (const auto* fail = std::get_if<SolveFailure>(&result)) return report_failure(*fail, out);
    const auto& sol = std::get<RiccatiSolution>(result);

    SimConfig cfg;
    cfg.n_paths = f.paths;
    cfg.n_steps_sim = f.sim_steps.value_or(prob.grid.n_steps());
    cfg.seed = *f.seed;
    cfg.x0 = f.x0.empty() ? std::vector<double>(static_cast<std::size_t>(prob.dim()), 1.0) : f.x0;
    if (static_cast<int>(cfg.x0.size()) != prob.dim()) {
        throw ValidationError("--x0", "expected " + std::to_string(prob.dim()) + " entries");
    }
    if (cfg.n_steps_sim < prob.grid.n_steps()) {
        throw ValidationError("--sim-steps", "must be at least the grid step count");
    }

    const OptimalityReport report = verify_optimality(prob, sol, cfg, {});
    out << "estimate: " << num(report.optimal.mean) << "\n";
    out << "std_error: " << num(report.optimal.std_error) << "\n";
    out << "paths: " << report.optimal.n_paths << "\n";
    out << "predicted: " << num(report.predicted) << "\n";
    out << "allowance: " << num(report.allowance) << "\n";
    out << "match: " << (report.matches_prediction ? "yes" : "no") << "\n";
    return kOk;
}

RiccatiProblem make_demo(const std::string& name, const Flags& f) {
    if (name == "2d-rotation") return demo_2d_rotation(f.rotation, f.grid);
    if (name == "1d-general") return demo_1d_general(f.general, f.grid);
    if (name == "1d-constant") return demo_1d_constant(f.r_constant, f.grid);
    throw ValidationError("demo", "unknown demo \"" + name + "\"");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Indefinite matrix Riccati differential equations: solve, certify, simulate"};
    app.require_subcommand(1);
    Flags f;

    auto* solve = app.add_subcommand("solve", "solve a problem file by quasi-linearization");
    solve->add_option("problem", f.problem_path, "problem JSON")->required();
    add_grid(solve, f);
    add_solve_flags(solve, f);

    auto* certify = app.add_subcommand("certify", "check the scalar solvability certificate");
    certify->add_option("problem", f.problem_path, "problem JSON")->required();
    add_grid(certify, f);
    add_certify_flags(certify, f);

    auto* scan = app.add_subcommand("scan", "maximize the certificate margin over alpha");
    scan->add_option("problem", f.problem_path, "problem JSON")->required();
    add_grid(scan, f);
    add_certify_flags(scan, f);

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo cost of the optimal feedback");
    simulate->add_option("problem", f.problem_path, "problem JSON")->required();
    add_grid(simulate, f);
    add_solve_flags(simulate, f);
    add_simulate_flags(simulate, f);

    std::string demo_name;
    std::string demo_action = "solve";
    auto* demo = app.add_subcommand("demo", "run a built-in example problem");
    demo->add_option("name", demo_name, "2d-rotation | 1d-general | 1d-constant")
        ->required()
        ->check(CLI::IsMember(demo_names()));
    demo->add_option("action", demo_action, "solve | certify | scan | simulate | emit")
        ->check(CLI::IsMember({"solve", "certify", "scan", "simulate", "emit"}));
    add_grid(demo, f);
    add_solve_flags(demo, f);
    add_certify_flags(demo, f);
    add_simulate_flags(demo, f);
    demo->add_option("--emit", f.emit_path, "also write the problem JSON to this file");
    demo->add_option("--a1", f.rotation.a1, "2d-rotation: drift of x1");
    demo->add_option("--a2", f.rotation.a2, "2d-rotation: drift of x2");
    demo->add_option("--r1", f.rotation.r1, "2d-rotation: weight of u1");
    demo->add_option("--r2", f.rotation.r2, "2d-rotation: weight of u2");
    demo->add_option("--a", f.general.a, "1d-general: drift");
    demo->add_option("--b", f.general.b, "1d-general: control gain in the drift");
    demo->add_option("--c", f.general.c, "1d-general: state diffusion");
    demo->add_option("--q", f.general.q, "1d-general: state weight");
    demo->add_option_function<double>(
        "--r", [&f](double r) { f.general.r = r; f.r_constant = r; },
        "1d-general / 1d-constant: control weight");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(std::move(reversed));
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    }

    try {
        if (demo->parsed()) {
            const RiccatiProblem prob = make_demo(demo_name, f);
            if (!f.emit_path.empty() || demo_action == "emit") {
                if (f.emit_path.empty()) {
                    out << serialize_problem(prob) << "\n";
                    return kOk;
                }
                std::ofstream file(f.emit_path);
                if (!file) throw ParseError("--emit", "cannot write " + f.emit_path);
                file << serialize_problem(prob) << "\n";
                if (demo_action == "emit") return kOk;
            }
            if (demo_action == "certify") return cmd_certify(prob, f, out);
            if (demo_action == "scan") return cmd_scan(prob, f, out);
            if (demo_action == "simulate") return cmd_simulate(prob, f, out);
            return cmd_solve(prob, f, out, err);
        }

        const std::optional<int> grid = f.grid_set ? std::optional<int>(f.grid) : std::nullopt;
        const RiccatiProblem prob = load_problem(f.problem_path, grid);
        if (solve->parsed()) return cmd_solve(prob, f, out, err);
        if (certify->parsed()) return cmd_certify(prob, f, out);
        if (scan->parsed()) return cmd_scan(prob, f, out);
        return cmd_simulate(prob, f, out);
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return kInputError;
    } catch (const ValidationError& e) {
        err << "validation error: " << e.what() << "\n";
        return kInputError;
    } catch (const AlphaOutOfRange& e) {
        err << "input error: " << e.what() << "\n";
        return kInputError;
    } catch (const InvalidArgument& e) {
        err << "input error: " << e.what() << "\n";
        return kInputError;
    } catch (const DimensionMismatch& e) {
        err << "input error: " << e.what() << "\n";
        return kInputError;
    }
}

}  // namespace rde::cli
