#pragma once

// Closed-form and brute-force reference values, independent of the solver
// code paths they check.

#include <cmath>
#include <functional>
#include <stdexcept>

namespace rde::oracle {

/// Root of a monotone function on [lo, hi] by bisection.
inline double bisect(const std::function<double(double)>& f, double lo, double hi,
                     double tol = 1e-14) {
    double flo = f(lo);
    if (flo * f(hi) > 0.0) throw std::runtime_error("bisect: no sign change");
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// Scalar problem a = c = q = 0, b = d = g = 1, T = 1 with control weight r < 0:
// Ṗ = P²/(r + P), separable, giving ln P − r/P = t − (1 + r).

/// P(t) while the solution exists (P > −r).
inline double constant_example_P(double r, double t) {
    const double target = t - (1.0 + r);
    return bisect([&](double p) { return std::log(p) - r / p - target; }, -r + 1e-15, 1.0);
}

/// Time at which P reaches the constraint boundary P = −r.
inline double constant_example_loss_time(double r) { return std::log(-r) + 2.0 + r; }

/// Solvability threshold r₀ = −x with ln x = x − 2, x ∈ (0, 1).
inline double constant_example_threshold() {
    return -bisect([](double x) { return std::log(x) - x + 2.0; }, 1e-6, 0.9);
}

/// φ(t) for φ̇ + λφ + αq = 0, φ(1) = α, constant λ and q:
/// α e^{λ(1−t)}(1 + ∫_t^1 e^{λ(s−1)} q ds) with the integral evaluated exactly.
inline double scalar_certificate(double lambda, double q, double alpha, double t) {
    const double integral =
        lambda == 0.0 ? q * (1.0 - t) : q * (1.0 - std::exp(lambda * (t - 1.0))) / lambda;
    return alpha * std::exp(lambda * (1.0 - t)) * (1.0 + integral);
}

/// sup over α of α e^{−1/(1−α)}, attained at α = (3 − √5)/2.
inline double constant_example_certified_threshold() {
    const double a = (3.0 - std::sqrt(5.0)) / 2.0;
    return -a * std::exp(-1.0 / (1.0 - a));
}

/// Euler–Maruyama cost of u = εx on dx = u dw (A = B = C = Q = 0, D = R = G = 1),
/// x₀ = 1: E x_{k+1}² = (1 + ε²Δt) E x_k².
inline double trivial_feedback_cost(double eps, int n_steps, double horizon = 1.0) {
    const double dt = horizon / n_steps;
    const double m = 1.0 + eps * eps * dt;
    double second_moment = 1.0;
    double cost = 0.0;
    for (int k = 0; k < n_steps; ++k) {
        cost += eps * eps * dt * second_moment;
        second_moment *= m;
    }
    return cost + second_moment;
}

}  // namespace rde::oracle
