#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <random>

#include "rde/errors.hpp"
#include "rde/symlin.hpp"
#include "test_support.hpp"

using namespace rde;
using rde::testing::random_matrix;
using rde::testing::random_spd;
using rde::testing::random_symmetric;

namespace {

// Independent reference spectrum.
Eigen::VectorXd eigen_reference(const SymMatrix& m) {
    Eigen::MatrixXd e(m.dim(), m.dim());
    for (int i = 0; i < m.dim(); ++i)
        for (int j = 0; j < m.dim(); ++j) e(i, j) = m(i, j);
    return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(e).eigenvalues();
}

}  // namespace

TEST_CASE("min_eigenvalue on small closed-form cases") {
    CHECK(min_eigenvalue(symmetrize(Matrix{{2, 0}, {0, 3}})) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(min_eigenvalue(symmetrize(Matrix{{0, 1}, {1, 0}})) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(min_eigenvalue(symmetrize(Matrix{{2, 1}, {1, 2}})) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(max_eigenvalue(symmetrize(Matrix{{2, 1}, {1, 2}})) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("is_definite") {
    CHECK(is_definite(SymMatrix::identity(3), 0.5));
    CHECK_FALSE(is_definite(SymMatrix::zeros(3), 1e-9));
    CHECK_FALSE(is_definite(symmetrize(Matrix{{1, 2}, {2, 1}}), 0.0));
}

TEST_CASE("solve_definite examples") {
    const Matrix b{{1, 2}, {3, 4}};
    CHECK(solve_definite(SymMatrix::identity(2), b) == b);

    const Matrix half = solve_definite(2.0 * SymMatrix::identity(3), Matrix::identity(3));
    CHECK((half - 0.5 * Matrix::identity(3)).max_abs() <= kLinTol);

    const Matrix x = solve_definite(symmetrize(Matrix{{1, 0}, {0, 4}}), Matrix{{1}, {8}});
    CHECK(x(0, 0) == doctest::Approx(1.0));
    CHECK(x(1, 0) == doctest::Approx(2.0));
}

TEST_CASE("solve_definite rejects indefinite and singular systems") {
    CHECK_THROWS_AS(solve_definite(symmetrize(Matrix{{1, 2}, {2, 1}}), Matrix::identity(2)),
                    NotPositiveDefinite);
    CHECK_THROWS_AS(solve_definite(SymMatrix::zeros(2), Matrix::identity(2)), NotPositiveDefinite);
    try {
        solve_definite(symmetrize(Matrix{{1, 0}, {0, -1}}), Matrix::identity(2));
        FAIL("expected NotPositiveDefinite");
    } catch (const NotPositiveDefinite& e) {
        CHECK(e.pivot() == 1);
    }
}

TEST_CASE("symmetrize") {
    CHECK(symmetrize(Matrix{{1, 2}, {0, 1}}).matrix() == Matrix{{1, 1}, {1, 1}});
    const Matrix s{{3, -1}, {-1, 5}};
    CHECK(symmetrize(s).matrix() == s);
    CHECK(symmetrize(Matrix{{0, 4}, {-4, 0}}).matrix() == Matrix::zeros(2, 2));
    CHECK_THROWS_AS(symmetrize(Matrix(2, 3)), NonSquare);
}

TEST_CASE("SymMatrix::from_exact keeps exact symmetry") {
    CHECK_NOTHROW(SymMatrix::from_exact(Matrix{{1, 2}, {2, 1}}));
    CHECK_THROWS_AS(SymMatrix::from_exact(Matrix{{1, 2}, {2.1, 1}}), InvalidArgument);
    SymMatrix s(2);
    s.set(0, 1, 7.0);
    CHECK(s(1, 0) == 7.0);
}

TEST_CASE("Jacobi spectrum agrees with an independent eigensolver") {
    std::mt19937_64 rng(11);
    for (int d : {1, 2, 3, 5, 8, 20, 50}) {
        const SymMatrix m = random_symmetric(rng, d, 3.0);
        const auto ours = eigenvalues(m);
        const Eigen::VectorXd ref = eigen_reference(m);
        const double scale = m.matrix().norm_frobenius();
        for (int i = 0; i < d; ++i) {
            CHECK(std::abs(ours[static_cast<std::size_t>(i)] - ref(i)) <= kEigTol * (1.0 + scale));
        }
    }
}

TEST_CASE("property: spectral shift, trace and Frobenius invariants") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> dim(1, 12);
    std::uniform_real_distribution<double> shift(-5.0, 5.0);
    for (int trial = 0; trial < 200; ++trial) {
        const int d = dim(rng);
        const SymMatrix m = random_symmetric(rng, d, 2.0);
        const double c = shift(rng);
        const SymMatrix shifted = m + c * SymMatrix::identity(d);
        CHECK(std::abs(min_eigenvalue(shifted) - (min_eigenvalue(m) + c)) <= 2.0 * kEigTol);

        const auto ev = eigenvalues(m);
        double sum = 0.0, sum_sq = 0.0;
        for (double v : ev) {
            sum += v;
            sum_sq += v * v;
        }
        const double fro2 = std::pow(m.matrix().norm_frobenius(), 2);
        CHECK(std::abs(sum - m.matrix().trace()) <= 1e-10 * (1.0 + std::abs(m.matrix().trace()) + fro2));
        CHECK(std::abs(sum_sq - fro2) <= 1e-10 * (1.0 + fro2));
    }
}

TEST_CASE("property: eigenvectors are orthonormal and diagonalize") {
    std::mt19937_64 rng(5);
    const SymMatrix m = random_symmetric(rng, 9);
    const EigenSystem es = jacobi_eigen(m);
    const Matrix vtv = transpose_times(es.vectors, es.vectors);
    CHECK((vtv - Matrix::identity(9)).max_abs() < 1e-12);
    const Matrix diag = transpose_times(es.vectors, m.matrix() * es.vectors);
    for (int i = 0; i < 9; ++i) CHECK(diag(i, i) == doctest::Approx(es.values[static_cast<std::size_t>(i)]));
}

TEST_CASE("property: SPD solve residual") {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> dim(1, 50);
    for (int trial = 0; trial < 100; ++trial) {
        const int d = dim(rng);
        const SymMatrix m = random_spd(rng, d);
        const Matrix rhs = random_matrix(rng, d, 3);
        const Matrix x = solve_definite(m, rhs);
        CHECK((m.matrix() * x - rhs).norm_inf() <= kLinTol * rhs.norm_inf());
    }
}

TEST_CASE("property: SPD solve residual at the stated tolerance for small d") {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 200; ++trial) {
        const int d = 1 + trial % 6;
        const SymMatrix m = random_spd(rng, d);
        const Matrix rhs = random_matrix(rng, d, d);
        const Matrix x = solve_definite(m, rhs);
        CHECK((m.matrix() * x - rhs).norm_inf() <= kLinTol * rhs.norm_inf());
    }
}

TEST_CASE("property: symmetrize is idempotent") {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 50; ++trial) {
        const Matrix m = random_matrix(rng, 4, 4);
        const SymMatrix once = symmetrize(m);
        CHECK(symmetrize(once.matrix()) == once);
    }
}

TEST_CASE("non-finite input does not hang the eigensolver") {
    Matrix m{{1, 0}, {0, 1}};
    m(0, 0) = std::nan("");
    CHECK(std::isnan(min_eigenvalue(symmetrize(m))));
}
