#pragma once

// Dense kernels for the small matrices (d <= ~50) that appear in the Riccati
// solver: storage, products, symmetric eigenvalues and SPD solves.

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace rde {

/// Dense row-major real matrix.
class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols, double fill = 0.0);
    Matrix(std::initializer_list<std::initializer_list<double>> rows);

    static Matrix zeros(int rows, int cols) { return Matrix(rows, cols); }
    static Matrix identity(int n);
    static Matrix diagonal(std::span<const double> diag);
    static Matrix scalar(double v) { return Matrix(1, 1, v); }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }
    bool empty() const { return data_.empty(); }

    double& operator()(int i, int j) { return data_[index(i, j)]; }
    double operator()(int i, int j) const { return data_[index(i, j)]; }

    std::span<double> data() { return data_; }
    std::span<const double> data() const { return data_; }

    Matrix transpose() const;

    Matrix& operator+=(const Matrix& other);
    Matrix& operator-=(const Matrix& other);
    Matrix& operator*=(double s);

    /// Max absolute row sum (induced infinity norm).
    double norm_inf() const;
    double norm_frobenius() const;
    double max_abs() const;
    double trace() const;
    bool all_finite() const;

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t index(int i, int j) const {
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(cols_) +
               static_cast<std::size_t>(j);
    }

    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> data_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator-(Matrix a);
Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator*(Matrix a, double s);
Matrix operator*(double s, Matrix a);

/// aᵀ·b without forming the transpose.
Matrix transpose_times(const Matrix& a, const Matrix& b);

/// Symmetric d×d matrix. Both triangles are stored and always agree exactly.
class SymMatrix {
public:
    SymMatrix() = default;
    explicit SymMatrix(int dim, double fill = 0.0) : m_(dim, dim, fill) {}

    static SymMatrix identity(int n);
    static SymMatrix zeros(int n) { return SymMatrix(n); }
    /// Wraps `m` after checking exact symmetry; throws NonSquare or
    /// InvalidArgument.
    static SymMatrix from_exact(Matrix m);

    int dim() const { return m_.rows(); }
    double operator()(int i, int j) const { return m_(i, j); }
    void set(int i, int j, double v) {
        m_(i, j) = v;
        m_(j, i) = v;
    }

    const Matrix& matrix() const { return m_; }
    operator const Matrix&() const { return m_; }

    SymMatrix& operator+=(const SymMatrix& o);
    SymMatrix& operator-=(const SymMatrix& o);
    SymMatrix& operator*=(double s);

    friend bool operator==(const SymMatrix&, const SymMatrix&) = default;

private:
    friend SymMatrix symmetrize(const Matrix& m);
    Matrix m_;
};

SymMatrix operator+(SymMatrix a, const SymMatrix& b);
SymMatrix operator-(SymMatrix a, const SymMatrix& b);
SymMatrix operator*(SymMatrix a, double s);
SymMatrix operator*(double s, SymMatrix a);

/// Returns (M + Mᵀ)/2. Throws NonSquare.
SymMatrix symmetrize(const Matrix& m);

/// Xᵀ·S·X, symmetrized.
SymMatrix congruence(const Matrix& x, const SymMatrix& s);

/// Cyclic Jacobi sweeps stop once the off-diagonal Frobenius mass drops
/// below this fraction of ‖M‖_F.
inline constexpr double kJacobiOffTol = 1e-12;
/// Accuracy of reported eigenvalue extrema.
inline constexpr double kEigTol = 1e-10;
/// Relative residual bound of solve_definite.
inline constexpr double kLinTol = 1e-12;

struct EigenSystem {
    std::vector<double> values;  // ascending
    Matrix vectors;              // columns are eigenvectors
};

/// Full spectrum by cyclic Jacobi rotations.
EigenSystem jacobi_eigen(const SymMatrix& m);
std::vector<double> eigenvalues(const SymMatrix& m);

double min_eigenvalue(const SymMatrix& m);
double max_eigenvalue(const SymMatrix& m);

/// True iff λ_min(M) ≥ margin.
bool is_definite(const SymMatrix& m, double margin);

/// Lower-triangular L with M = L·Lᵀ. Throws NotPositiveDefinite on the
/// first pivot that is not strictly positive.
Matrix cholesky(const SymMatrix& m);

/// Solves M·X = rhs for SPD M via Cholesky. Throws NotPositiveDefinite.
Matrix solve_definite(const SymMatrix& m, const Matrix& rhs);

}  // namespace rde
