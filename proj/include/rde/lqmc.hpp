#pragma once

// Monte Carlo check of a Riccati solution through the stochastic LQ problem
//
//   J(u) = E{ ∫₀ᵀ uᵀRu + xᵀQx dt + x(T)ᵀGx(T) },
//   dx = (Ax + Bu)dt + (Cx + Du)dw,  x(0) = x₀,
//
// under linear feedback u = K(t)x, discretized by Euler–Maruyama.

#include <cstdint>
#include <vector>

#include "rde/certify.hpp"
#include "rde/riccati.hpp"

namespace rde {

struct SimConfig {
    int n_paths = 10000;
    int n_steps_sim = 1000;
    std::uint64_t seed = 0;
    std::vector<double> x0;
};

struct CostEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    int n_paths = 0;
};

/// Standard normal number `index` of stream (seed, path). Stateless: a
/// SplitMix64 hash of (seed, path, index / 2) yields two 53-bit uniforms that
/// feed Box–Muller; even indices take the cosine branch, odd the sine branch.
double standard_normal(std::uint64_t seed, std::uint64_t path, std::uint64_t index);

/// Per-path realized costs. Path p only reads stream (seed, p), so the result
/// does not depend on scheduling. `refine` = 2 halves the time step and
/// splits each increment by a Brownian bridge driven by an independent stream,
/// so both resolutions share the same Brownian path.
std::vector<double> simulate_path_costs(const RiccatiProblem& prob, const MatrixPath& gain,
                                        const SimConfig& cfg,
                                        Execution exec = Execution::Parallel, int refine = 1);

/// Sample mean and standard error, reduced in path order.
CostEstimate summarize(const std::vector<double>& costs);

CostEstimate simulate_cost(const RiccatiProblem& prob, const MatrixPath& gain,
                           const SimConfig& cfg, Execution exec = Execution::Parallel);

/// 2·|J(n) − J(2n)|: bias bound for the n-step estimate from a Richardson
/// comparison on a common Brownian path.
double discretization_allowance(const RiccatiProblem& prob, const MatrixPath& gain,
                                const SimConfig& cfg, Execution exec = Execution::Parallel);

struct PerturbationResult {
    CostEstimate estimate;
    double diff_mean = 0.0;  // J(perturbed) − J(optimal), paired
    double diff_se = 0.0;
    bool not_beaten = false;      // J(optimal) ≤ J(perturbed) + 3·pooled SE
    bool strictly_worse = false;  // diff_mean > 3·diff_se
};

struct OptimalityReport {
    CostEstimate optimal;
    double predicted = 0.0;  // x₀ᵀP(0)x₀
    double allowance = 0.0;
    bool matches_prediction = false;  // |J − x₀ᵀP(0)x₀| ≤ 4·SE + allowance
    std::vector<PerturbationResult> perturbations;

    bool all_not_beaten() const;
    bool all_strictly_worse() const;
};

OptimalityReport verify_optimality(const RiccatiProblem& prob, const RiccatiSolution& sol,
                                   const SimConfig& cfg,
                                   const std::vector<MatrixPath>& perturbations,
                                   Execution exec = Execution::Parallel);

}  // namespace rde
