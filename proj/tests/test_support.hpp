#pragma once

#include <random>

#include "rde/riccati.hpp"

namespace rde::testing {

inline Matrix random_matrix(std::mt19937_64& rng, int rows, int cols, double scale = 1.0) {
    std::uniform_real_distribution<double> u(-scale, scale);
    Matrix m(rows, cols);
    for (double& v : m.data()) v = u(rng);
    return m;
}

inline SymMatrix random_symmetric(std::mt19937_64& rng, int d, double scale = 1.0) {
    return symmetrize(random_matrix(rng, d, d, scale));
}

/// XᵀX + shift·I.
inline SymMatrix random_spd(std::mt19937_64& rng, int d, double shift = 1.0) {
    const Matrix x = random_matrix(rng, d, d);
    return symmetrize(transpose_times(x, x) + shift * Matrix::identity(d));
}

inline SymMatrix random_psd(std::mt19937_64& rng, int d) {
    const Matrix x = random_matrix(rng, d / 2 + 1, d);
    return symmetrize(transpose_times(x, x));
}

inline MatrixPath constant_path(const Matrix& m, const TimeGrid& g) {
    return MatrixPath::constant(m, g);
}

/// Time-varying path M0 + t·M1.
inline MatrixPath linear_path(const Matrix& m0, const Matrix& m1, const TimeGrid& g) {
    return MatrixPath::sample(g, [&](double t) { return m0 + t * m1; });
}

/// Standard problem: R ≫ 0, Q and G PSD, random time-varying system data.
inline RiccatiProblem random_standard_problem(std::mt19937_64& rng, int d, int n_steps,
                                              double horizon = 1.0) {
    const TimeGrid g(horizon, n_steps);
    const Matrix a0 = random_matrix(rng, d, d, 0.5), a1 = random_matrix(rng, d, d, 0.3);
    const Matrix b0 = random_matrix(rng, d, d, 0.5);
    const Matrix c0 = random_matrix(rng, d, d, 0.3), c1 = random_matrix(rng, d, d, 0.2);
    const Matrix d0 = random_matrix(rng, d, d, 0.3) + Matrix::identity(d);
    const SymMatrix r0 = random_spd(rng, d, 0.5);
    const SymMatrix q0 = random_psd(rng, d);
    const SymMatrix g0 = random_psd(rng, d);
    return RiccatiProblem{g,
                          linear_path(a0, a1, g),
                          constant_path(b0, g),
                          linear_path(c0, c1, g),
                          constant_path(d0, g),
                          constant_path(r0, g),
                          constant_path(q0, g),
                          g0};
}

inline RiccatiProblem scalar_problem(double a, double b, double c, double d, double r, double q,
                                     double g, int n_steps, double horizon = 1.0) {
    const TimeGrid grid(horizon, n_steps);
    auto s = [&](double v) { return MatrixPath::constant(Matrix::scalar(v), grid); };
    return RiccatiProblem{grid, s(a), s(b), s(c), s(d), s(r), s(q), SymMatrix(1, g)};
}

/// A = B = C = Q = 0, D = R = G = I.
inline RiccatiProblem trivial_problem(int d, int n_steps) {
    const TimeGrid g(1.0, n_steps);
    const Matrix z = Matrix::zeros(d, d);
    const Matrix eye = Matrix::identity(d);
    return RiccatiProblem{g,
                          constant_path(z, g),
                          constant_path(z, g),
                          constant_path(z, g),
                          constant_path(eye, g),
                          constant_path(eye, g),
                          constant_path(z, g),
                          SymMatrix::identity(d)};
}

inline double sup_distance(const MatrixPath& a, const MatrixPath& b) {
    double s = 0.0;
    for (int k = 0; k < a.grid().n_nodes(); ++k) {
        s = std::max(s, (a.at_node(k) - b.at_node(k)).norm_inf());
    }
    return s;
}

}  // namespace rde::testing
