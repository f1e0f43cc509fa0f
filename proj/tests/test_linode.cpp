#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "rde/linode.hpp"
#include "test_support.hpp"

using namespace rde;
using namespace rde::testing;

namespace {

LyapunovData scalar_data(double a, double c, double q, double g, const TimeGrid& grid) {
    return {from_constant(Matrix::scalar(a), grid), from_constant(Matrix::scalar(c), grid),
            from_constant(Matrix::scalar(q), grid), SymMatrix(1, g)};
}

// Time-varying 2×2 data, linear in t so the interpolant is exact at half-nodes.
LyapunovData smooth_data(const TimeGrid& g) {
    const Matrix a0{{0.3, -0.5}, {0.2, -0.1}}, a1{{0.4, 0.0}, {-0.3, 0.2}};
    const Matrix c0{{0.2, 0.1}, {0.0, 0.3}}, c1{{0.0, 0.2}, {0.1, 0.0}};
    return {linear_path(a0, a1, g), linear_path(c0, c1, g),
            MatrixPath::sample(g, [](double t) { return Matrix{{1 + t, 0.2}, {0.2, 1.0 - 0.5 * t}}; }),
            symmetrize(Matrix{{1.0, 0.3}, {0.3, 2.0}})};
}

}  // namespace

TEST_CASE("zero right-hand side keeps the terminal value") {
    const TimeGrid g(1.0, 20);
    const Matrix z = Matrix::zeros(3, 3);
    std::mt19937_64 rng(1);
    const SymMatrix G = random_symmetric(rng, 3);
    const MatrixPath P = solve_lyapunov_backward({from_constant(z, g), from_constant(z, g), from_constant(z, g), G}, g);
    for (int k = 0; k < g.n_nodes(); ++k) CHECK(P.at_node(k) == G.matrix());
}

TEST_CASE("scalar exponential closed form") {
    const TimeGrid g(1.0, 200);
    const MatrixPath P = solve_lyapunov_backward(scalar_data(1.0, 0.0, 0.0, 1.0, g), g);
    CHECK(std::abs(P.scalar_at_node(0) - std::exp(2.0)) < 1e-6);
    CHECK(P.scalar_at_node(200) == 1.0);
}

TEST_CASE("terminal value is exact and output symmetric at every node") {
    const TimeGrid g(1.0, 40);
    const LyapunovData data = smooth_data(g);
    const MatrixPath P = solve_lyapunov_backward(data, g);
    CHECK(P.at_node(40) == data.terminal.matrix());
    for (int k = 0; k < g.n_nodes(); ++k) CHECK(P.at_node(k) == P.at_node(k).transpose());
}

TEST_CASE("stop_node freezes the early part") {
    const TimeGrid g(1.0, 40);
    const LyapunovData data = smooth_data(g);
    const MatrixPath full = solve_lyapunov_backward(data, g);
    const MatrixPath part = solve_lyapunov_backward(data, g, 10);
    for (int k = 10; k <= 40; ++k) CHECK(part.at_node(k) == full.at_node(k));
    for (int k = 0; k < 10; ++k) CHECK(part.at_node(k) == part.at_node(10));
}

TEST_CASE("property: nonnegative forcing and terminal give nonnegative solutions") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 100; ++trial) {
        const int d = 1 + trial % 4;
        const TimeGrid g(1.0, 100);
        const LyapunovData data{linear_path(random_matrix(rng, d, d), random_matrix(rng, d, d, 0.5), g),
                                constant_path(random_matrix(rng, d, d, 0.7), g),
                                constant_path(random_psd(rng, d), g), random_psd(rng, d)};
        const MatrixPath P = solve_lyapunov_backward(data, g);
        double worst = 0.0;
        for (int k = 0; k < g.n_nodes(); ++k) worst = std::min(worst, min_eigenvalue(symmetrize(P.at_node(k))));
        CHECK(worst >= -1e-8);
    }
}

TEST_CASE("property: solution map is additive in (Q, G)") {
    std::mt19937_64 rng(22);
    for (int trial = 0; trial < 20; ++trial) {
        const int d = 3;
        const TimeGrid g(1.0, 60);
        const MatrixPath a = constant_path(random_matrix(rng, d, d), g);
        const MatrixPath c = constant_path(random_matrix(rng, d, d, 0.5), g);
        const SymMatrix q1 = random_symmetric(rng, d), q2 = random_symmetric(rng, d);
        const SymMatrix g1 = random_symmetric(rng, d), g2 = random_symmetric(rng, d);
        const MatrixPath p1 = solve_lyapunov_backward({a, c, constant_path(q1, g), g1}, g);
        const MatrixPath p2 = solve_lyapunov_backward({a, c, constant_path(q2, g), g2}, g);
        const MatrixPath p12 = solve_lyapunov_backward({a, c, constant_path(q1 + q2, g), g1 + g2}, g);
        CHECK(sup_distance(p12, add(p1, p2)) <= 1e-10);
    }
}

TEST_CASE("property: fourth-order convergence on smooth data") {
    // Reference from a 4x finer grid sampled at the coarse nodes.
    auto p0 = [](int n) {
        const TimeGrid g(1.0, n);
        return solve_lyapunov_backward(smooth_data(g), g).at_node(0);
    };
    const Matrix ref = p0(1280);
    const double e1 = (p0(20) - ref).max_abs();
    const double e2 = (p0(40) - ref).max_abs();
    const double e3 = (p0(80) - ref).max_abs();
    MESSAGE("errors " << e1 << " " << e2 << " " << e3);
    CHECK(e1 / e2 == doctest::Approx(16.0).epsilon(0.2));
    CHECK(e2 / e3 == doctest::Approx(16.0).epsilon(0.2));
}

TEST_CASE("scalar certificate ODE") {
    const TimeGrid g(1.0, 400);
    const MatrixPath zero = scalar_path(g, std::vector<double>(401, 0.0));
    const MatrixPath flat = solve_scalar_backward(zero, zero, 0.7, g);
    for (int k = 0; k < g.n_nodes(); ++k) CHECK(flat.scalar_at_node(k) == 0.7);

    const MatrixPath lam = from_constant(Matrix::scalar(2.0), g);
    const MatrixPath expo = solve_scalar_backward(lam, zero, 0.5, g);
    for (double t : {0.0, 0.25, 0.6}) {
        CHECK(expo.eval_scalar(t) == doctest::Approx(0.5 * std::exp(2.0 * (1.0 - t))).epsilon(1e-9));
    }

    const MatrixPath forced = solve_scalar_backward(lam, from_constant(Matrix::scalar(0.5), g), 0.5, g);
    const double expected = oracle::scalar_certificate(2.0, 1.0, 0.5, 0.0);
    CHECK(expected == doctest::Approx(5.291792).epsilon(1e-6));
    CHECK(std::abs(forced.scalar_at_node(0) - expected) < 1e-4);
}
