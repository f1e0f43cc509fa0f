#include "rde/lqmc.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "rde/errors.hpp"

namespace rde {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
// Stream tag for the Brownian-bridge midpoints of refined simulations.
constexpr std::uint64_t kBridgeStream = 0xB5AD4ECEDA1CE2A9ULL;

std::uint64_t mix64(std::uint64_t z) {
    z += kGolden;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// (0, 1], never zero so the logarithm stays finite.
double to_unit(std::uint64_t bits) {
    return (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53;
}

void validate_config(const RiccatiProblem& prob, const MatrixPath& gain, const SimConfig& cfg) {
    if (cfg.n_paths < 1) throw InvalidArgument("n_paths must be at least 1");
    if (cfg.n_steps_sim < prob.grid.n_steps()) {
        throw InvalidArgument("n_steps_sim must be at least the grid step count");
    }
    if (static_cast<int>(cfg.x0.size()) != prob.dim()) {
        throw DimensionMismatch("x0 has " + std::to_string(cfg.x0.size()) +
                                " entries, problem dimension is " + std::to_string(prob.dim()));
    }
    if (gain.rows() != prob.dim() || gain.cols() != prob.dim() ||
        gain.grid().horizon() != prob.grid.horizon()) {
        throw DimensionMismatch("gain path does not match the problem");
    }
}

// Coefficients frozen at the left end of every simulation step.
struct StepCoeffs {
    std::vector<Matrix> drift;      // A + BK
    std::vector<Matrix> diffusion;  // C + DK
    std::vector<Matrix> running;    // Q + KᵀRK
};

StepCoeffs step_coeffs(const RiccatiProblem& prob, const MatrixPath& gain, int n_steps) {
    StepCoeffs sc;
    const double dt = prob.grid.horizon() / n_steps;
    for (int j = 0; j < n_steps; ++j) {
        const double t = j * dt;
        const Matrix k = gain.eval(t);
        sc.drift.push_back(prob.A.eval(t) + prob.B.eval(t) * k);
        sc.diffusion.push_back(prob.C.eval(t) + prob.D.eval(t) * k);
        sc.running.push_back((symmetrize(prob.Q.eval(t)) + congruence(k, symmetrize(prob.R.eval(t))))
                                 .matrix());
    }
    return sc;
}

double quad_form(const Matrix& m, const std::vector<double>& x) {
    double s = 0.0;
    const int d = m.rows();
    for (int i = 0; i < d; ++i) {
        double row = 0.0;
        for (int j = 0; j < d; ++j) row += m(i, j) * x[static_cast<std::size_t>(j)];
        s += x[static_cast<std::size_t>(i)] * row;
    }
    return s;
}

double simulate_one(const StepCoeffs& sc, const Matrix& terminal, const SimConfig& cfg,
                    double dt, int refine, std::uint64_t path) {
    const int d = terminal.rows();
    std::vector<double> x = cfg.x0;
    std::vector<double> next(static_cast<std::size_t>(d));
    const double sqrt_base = std::sqrt(dt * refine);
    const double sqrt_half = std::sqrt(dt * refine) * 0.5;
    double cost = 0.0;
    const int n = static_cast<int>(sc.drift.size());
    for (int j = 0; j < n; ++j) {
        double dw;
        if (refine == 1) {
            dw = sqrt_base * standard_normal(cfg.seed, path, static_cast<std::uint64_t>(j));
        } else {
            // Coarse increment over [2i, 2i+2] split at its midpoint.
            const auto coarse = static_cast<std::uint64_t>(j / 2);
            const double big = sqrt_base * standard_normal(cfg.seed, path, coarse);
            const double bridge =
                sqrt_half * standard_normal(cfg.seed ^ kBridgeStream, path, coarse);
            dw = (j % 2 == 0) ? 0.5 * big + bridge : 0.5 * big - bridge;
        }
        cost += quad_form(sc.running[static_cast<std::size_t>(j)], x) * dt;
        const Matrix& a = sc.drift[static_cast<std::size_t>(j)];
        const Matrix& c = sc.diffusion[static_cast<std::size_t>(j)];
        for (int i = 0; i < d; ++i) {
            double ax = 0.0, cx = 0.0;
            for (int l = 0; l < d; ++l) {
                ax += a(i, l) * x[static_cast<std::size_t>(l)];
                cx += c(i, l) * x[static_cast<std::size_t>(l)];
            }
            next[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)] + ax * dt + cx * dw;
        }
        x.swap(next);
    }
    return cost + quad_form(terminal, x);
}

}  // namespace

double standard_normal(std::uint64_t seed, std::uint64_t path, std::uint64_t index) {
    const std::uint64_t stream = mix64(seed ^ mix64(path * kGolden + 0x632BE59BD9B4E019ULL));
    const std::uint64_t pair = index >> 1;
    const double u1 = to_unit(mix64(stream + 2 * pair * kGolden));
    const double u2 = to_unit(mix64(stream + (2 * pair + 1) * kGolden));
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    return (index & 1U) ? radius * std::sin(angle) : radius * std::cos(angle);
}

std::vector<double> simulate_path_costs(const RiccatiProblem& prob, const MatrixPath& gain,
                                        const SimConfig& cfg, Execution exec, int refine) {
    validate_config(prob, gain, cfg);
    if (refine != 1 && refine != 2) throw InvalidArgument("refine must be 1 or 2");
    const int n_steps = cfg.n_steps_sim * refine;
    const double dt = prob.grid.horizon() / n_steps;
    const StepCoeffs sc = step_coeffs(prob, gain, n_steps);
    const Matrix terminal = prob.G.matrix();

    std::vector<double> costs(static_cast<std::size_t>(cfg.n_paths));
    if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(static)
        for (int p = 0; p < cfg.n_paths; ++p) {
            costs[static_cast<std::size_t>(p)] =
                simulate_one(sc, terminal, cfg, dt, refine, static_cast<std::uint64_t>(p));
        }
    } else {
        for (int p = 0; p < cfg.n_paths; ++p) {
            costs[static_cast<std::size_t>(p)] =
                simulate_one(sc, terminal, cfg, dt, refine, static_cast<std::uint64_t>(p));
        }
    }
    return costs;
}

CostEstimate summarize(const std::vector<double>& costs) {
    CostEstimate est;
    est.n_paths = static_cast<int>(costs.size());
    if (costs.empty()) return est;
    // Offsets from the first sample: identical samples give an exact mean
    // and a zero standard error.
    const double shift = costs.front();
    double sum = 0.0;
    for (double c : costs) sum += c - shift;
    est.mean = shift + sum / static_cast<double>(costs.size());
    if (costs.size() > 1) {
        double ss = 0.0;
        for (double c : costs) ss += (c - est.mean) * (c - est.mean);
        const double var = ss / static_cast<double>(costs.size() - 1);
        est.std_error = std::sqrt(var / static_cast<double>(costs.size()));
    }
    return est;
}

CostEstimate simulate_cost(const RiccatiProblem& prob, const MatrixPath& gain,
                           const SimConfig& cfg, Execution exec) {
    return summarize(simulate_path_costs(prob, gain, cfg, exec));
}

double discretization_allowance(const RiccatiProblem& prob, const MatrixPath& gain,
                                const SimConfig& cfg, Execution exec) {
    const CostEstimate coarse = summarize(simulate_path_costs(prob, gain, cfg, exec, 1));
    const CostEstimate fine = summarize(simulate_path_costs(prob, gain, cfg, exec, 2));
    return 2.0 * std::abs(coarse.mean - fine.mean);
}

bool OptimalityReport::all_not_beaten() const {
    for (const auto& p : perturbations)
        if (!p.not_beaten) return false;
    return true;
}

bool OptimalityReport::all_strictly_worse() const {
    for (const auto& p : perturbations)
        if (!p.strictly_worse) return false;
    return true;
}

OptimalityReport verify_optimality(const RiccatiProblem& prob, const RiccatiSolution& sol,
                                   const SimConfig& cfg,
                                   const std::vector<MatrixPath>& perturbations,
                                   Execution exec) {
    OptimalityReport report;
    const std::vector<double> base = simulate_path_costs(prob, sol.gain, cfg, exec);
    report.optimal = summarize(base);
    report.predicted = quad_form(sol.P.at_node(0), cfg.x0);
    const CostEstimate fine = summarize(simulate_path_costs(prob, sol.gain, cfg, exec, 2));
    report.allowance = 2.0 * std::abs(report.optimal.mean - fine.mean);
    report.matches_prediction = std::abs(report.optimal.mean - report.predicted) <=
                                4.0 * report.optimal.std_error + report.allowance;

    for (const MatrixPath& delta : perturbations) {
        const std::vector<double> costs =
            simulate_path_costs(prob, add(sol.gain, delta), cfg, exec);
        PerturbationResult r;
        r.estimate = summarize(costs);
        std::vector<double> diff(costs.size());
        for (std::size_t i = 0; i < costs.size(); ++i) diff[i] = costs[i] - base[i];
        const CostEstimate d = summarize(diff);
        r.diff_mean = d.mean;
        r.diff_se = d.std_error;
        const double pooled = std::sqrt(report.optimal.std_error * report.optimal.std_error +
                                        r.estimate.std_error * r.estimate.std_error);
        r.not_beaten = report.optimal.mean <= r.estimate.mean + 3.0 * pooled;
        r.strictly_worse = r.diff_mean > 3.0 * r.diff_se;
        report.perturbations.push_back(r);
    }
    return report;
}

}  // namespace rde
