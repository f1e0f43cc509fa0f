#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "rde/errors.hpp"
#include "rde/lqmc.hpp"
#include "test_support.hpp"

using namespace rde;
using namespace rde::testing;

namespace {

SimConfig config(int paths, int steps, std::uint64_t seed, std::vector<double> x0) {
    SimConfig c;
    c.n_paths = paths;
    c.n_steps_sim = steps;
    c.seed = seed;
    c.x0 = std::move(x0);
    return c;
}

MatrixPath zero_gain(const RiccatiProblem& p) { return from_constant(Matrix::zeros(p.dim(), p.dim()), p.grid); }

}  // namespace

TEST_CASE("standard_normal is stateless and roughly standard") {
    CHECK(standard_normal(1, 2, 3) == standard_normal(1, 2, 3));
    CHECK(standard_normal(1, 2, 3) != standard_normal(1, 2, 4));
    CHECK(standard_normal(1, 2, 3) != standard_normal(1, 3, 3));
    CHECK(standard_normal(1, 2, 3) != standard_normal(2, 2, 3));
    double s = 0.0, s2 = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double z = standard_normal(42, static_cast<std::uint64_t>(i / 100), static_cast<std::uint64_t>(i % 100));
        s += z;
        s2 += z * z;
    }
    CHECK(std::abs(s / n) < 5.0 / std::sqrt(n));
    CHECK(std::abs(s2 / n - 1.0) < 5.0 * std::sqrt(2.0 / n));
}

TEST_CASE("deterministic state gives exact cost") {
    RiccatiProblem p = trivial_problem(2, 10);
    p.D = zero_gain(p);
    const CostEstimate est = simulate_cost(p, zero_gain(p), config(50, 10, 1, {0.6, -2.0}));
    CHECK(est.mean == doctest::Approx(0.36 + 4.0).epsilon(1e-15));
    CHECK(est.std_error == 0.0);
    CHECK(est.n_paths == 50);
}

TEST_CASE("trivial problem with zero gain keeps x constant") {
    const RiccatiProblem p = trivial_problem(2, 20);
    const CostEstimate est = simulate_cost(p, zero_gain(p), config(1000, 20, 2, {1.0, 0.0}));
    CHECK(std::abs(est.mean - 1.0) <= 3.0 * est.std_error + 1e-15);
}

TEST_CASE("constant feedback on the trivial problem matches the exact recursion") {
    const RiccatiProblem p = trivial_problem(1, 50);
    const MatrixPath gain = from_constant(Matrix::scalar(0.5), p.grid);
    const CostEstimate est = simulate_cost(p, gain, config(100000, 50, 3, {1.0}));
    const double exact = oracle::trivial_feedback_cost(0.5, 50);
    CHECK(exact > 1.0);
    CHECK(std::abs(est.mean - exact) <= 4.0 * est.std_error);
}

TEST_CASE("serial and parallel runs are bit-identical") {
    std::mt19937_64 rng(1);
    const RiccatiProblem p = random_standard_problem(rng, 3, 50);
    const MatrixPath gain = from_constant(random_matrix(rng, 3, 3, 0.5), p.grid);
    const SimConfig cfg = config(3000, 100, 77, {1.0, -0.5, 0.25});
    const auto a = simulate_path_costs(p, gain, cfg, Execution::Serial);
    const auto b = simulate_path_costs(p, gain, cfg, Execution::Parallel);
    CHECK(a == b);
    const CostEstimate ea = summarize(a), eb = summarize(b);
    CHECK(ea.mean == eb.mean);
    CHECK(ea.std_error == eb.std_error);
}

TEST_CASE("property: costs are nonnegative under PSD weights") {
    std::mt19937_64 rng(2);
    RiccatiProblem p = random_standard_problem(rng, 2, 50);
    const MatrixPath gain = from_constant(random_matrix(rng, 2, 2), p.grid);
    for (double c : simulate_path_costs(p, gain, config(2000, 50, 5, {1.0, 1.0}))) CHECK(c >= 0.0);
}

TEST_CASE("property: standard error shrinks like 1/sqrt(n)") {
    const RiccatiProblem p = trivial_problem(1, 20);
    const MatrixPath gain = from_constant(Matrix::scalar(1.0), p.grid);
    const double se1 = simulate_cost(p, gain, config(5000, 20, 9, {1.0})).std_error;
    const double se4 = simulate_cost(p, gain, config(20000, 20, 9, {1.0})).std_error;
    CHECK(se1 / se4 == doctest::Approx(2.0).epsilon(0.2));
}

TEST_CASE("refined runs share the Brownian path") {
    // With dx = x dw the coarse and refined terminal values differ only by
    // discretization, so their per-path costs are strongly correlated.
    const RiccatiProblem p = trivial_problem(1, 20);
    const MatrixPath gain = from_constant(Matrix::scalar(1.0), p.grid);
    const SimConfig cfg = config(4000, 20, 4, {1.0});
    const auto a = simulate_path_costs(p, gain, cfg, Execution::Serial, 1);
    const auto b = simulate_path_costs(p, gain, cfg, Execution::Serial, 2);
    double diff = 0.0, spread = 0.0;
    const double mean = summarize(a).mean;
    for (std::size_t i = 0; i < a.size(); ++i) {
        diff += (a[i] - b[i]) * (a[i] - b[i]);
        spread += (a[i] - mean) * (a[i] - mean);
    }
    CHECK(diff < 0.1 * spread);
    CHECK_THROWS_AS(simulate_path_costs(p, gain, cfg, Execution::Serial, 3), InvalidArgument);
}

TEST_CASE("configuration checks") {
    const RiccatiProblem p = trivial_problem(2, 20);
    CHECK_THROWS_AS(simulate_cost(p, zero_gain(p), config(0, 20, 1, {1, 1})), InvalidArgument);
    CHECK_THROWS_AS(simulate_cost(p, zero_gain(p), config(10, 10, 1, {1, 1})), InvalidArgument);
    CHECK_THROWS_AS(simulate_cost(p, zero_gain(p), config(10, 20, 1, {1})), DimensionMismatch);
}

TEST_CASE("verify_optimality") {
    const RiccatiProblem p = scalar_problem(0, 1, 0, 1, -0.1, 0, 1, 200);
    const auto res = quasilinearize(p);
    REQUIRE(std::holds_alternative<RiccatiSolution>(res));
    const auto& sol = std::get<RiccatiSolution>(res);
    const SimConfig cfg = config(20000, 200, 11, {1.0});

    const MatrixPath zero = from_constant(Matrix::scalar(0.0), p.grid);
    // +0.3 raises J by only 0.025 against a per-path SD near 9; +1.0 raises
    // it by 0.36 (exact moment computation), well above the noise.
    const MatrixPath bump = from_constant(Matrix::scalar(1.0), p.grid);
    const OptimalityReport rep = verify_optimality(p, sol, cfg, {zero, bump});
    CHECK(rep.matches_prediction);
    CHECK(rep.predicted == sol.P.scalar_at_node(0));

    // Zero perturbation reuses the stream and the gain.
    CHECK(rep.perturbations[0].estimate.mean == rep.optimal.mean);
    CHECK(rep.perturbations[0].estimate.std_error == rep.optimal.std_error);
    CHECK(rep.perturbations[0].diff_mean == 0.0);
    CHECK(rep.perturbations[0].not_beaten);

    CHECK(rep.perturbations[1].strictly_worse);
    CHECK(rep.perturbations[1].not_beaten);
}

TEST_CASE("trivial problem: constant perturbation raises the cost") {
    const RiccatiProblem p = trivial_problem(1, 50);
    const auto res = quasilinearize(p);
    REQUIRE(std::holds_alternative<RiccatiSolution>(res));
    const OptimalityReport rep = verify_optimality(p, std::get<RiccatiSolution>(res), config(20000, 50, 12, {1.0}),
                                                   {from_constant(Matrix::scalar(0.5), p.grid)});
    // Optimal gain is zero, so the optimal cost is exactly 1.
    CHECK(rep.optimal.mean == 1.0);
    const auto& r = rep.perturbations[0];
    CHECK(r.strictly_worse);
    CHECK(std::abs(r.diff_mean - (oracle::trivial_feedback_cost(0.5, 50) - 1.0)) <= 4.0 * r.diff_se);
}
