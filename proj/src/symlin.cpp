#include "rde/symlin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rde/errors.hpp"

namespace rde {

Matrix::Matrix(int rows, int cols, double fill)
    : rows_(rows), cols_(cols),
      data_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), fill) {
    if (rows < 0 || cols < 0) {
        throw InvalidArgument("matrix dimensions must be non-negative");
    }
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = static_cast<int>(rows.size());
    cols_ = rows_ == 0 ? 0 : static_cast<int>(rows.begin()->size());
    data_.reserve(static_cast<std::size_t>(rows_ * cols_));
    for (const auto& row : rows) {
        if (static_cast<int>(row.size()) != cols_) {
            throw DimensionMismatch("ragged matrix initializer");
        }
        data_.insert(data_.end(), row.begin(), row.end());
    }
}

Matrix Matrix::identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::diagonal(std::span<const double> diag) {
    const int n = static_cast<int>(diag.size());
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = diag[static_cast<std::size_t>(i)];
    return m;
}

Matrix Matrix::transpose() const {
    Matrix t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

Matrix& Matrix::operator+=(const Matrix& other) {
    if (rows_ != other.rows_ || cols_ != other.cols_) {
        throw DimensionMismatch("matrix sum with mismatched shapes");
    }
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
    return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
    if (rows_ != other.rows_ || cols_ != other.cols_) {
        throw DimensionMismatch("matrix difference with mismatched shapes");
    }
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
    return *this;
}

Matrix& Matrix::operator*=(double s) {
    for (double& v : data_) v *= s;
    return *this;
}

double Matrix::norm_inf() const {
    double best = 0.0;
    for (int i = 0; i < rows_; ++i) {
        double row = 0.0;
        for (int j = 0; j < cols_; ++j) row += std::abs((*this)(i, j));
        best = std::max(best, row);
    }
    return best;
}

double Matrix::norm_frobenius() const {
    double s = 0.0;
    for (double v : data_) s += v * v;
    return std::sqrt(s);
}

double Matrix::max_abs() const {
    double best = 0.0;
    for (double v : data_) best = std::max(best, std::abs(v));
    return best;
}

double Matrix::trace() const {
    if (!is_square()) throw NonSquare("trace of a non-square matrix");
    double s = 0.0;
    for (int i = 0; i < rows_; ++i) s += (*this)(i, i);
    return s;
}

bool Matrix::all_finite() const {
    return std::all_of(data_.begin(), data_.end(),
                       [](double v) { return std::isfinite(v); });
}

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
Matrix operator-(Matrix a) { return a *= -1.0; }
Matrix operator*(Matrix a, double s) { return a *= s; }
Matrix operator*(double s, Matrix a) { return a *= s; }

Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) {
        throw DimensionMismatch("matrix product with mismatched inner dimension");
    }
    Matrix c(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i) {
        for (int k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (int j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    }
    return c;
}

Matrix transpose_times(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows()) {
        throw DimensionMismatch("transpose product with mismatched rows");
    }
    Matrix c(a.cols(), b.cols());
    for (int k = 0; k < a.rows(); ++k) {
        for (int i = 0; i < a.cols(); ++i) {
            const double aki = a(k, i);
            if (aki == 0.0) continue;
            for (int j = 0; j < b.cols(); ++j) c(i, j) += aki * b(k, j);
        }
    }
    return c;
}

SymMatrix SymMatrix::identity(int n) {
    SymMatrix s;
    s.m_ = Matrix::identity(n);
    return s;
}

SymMatrix SymMatrix::from_exact(Matrix m) {
    if (!m.is_square()) throw NonSquare("symmetric matrix must be square");
    for (int i = 0; i < m.rows(); ++i)
        for (int j = i + 1; j < m.cols(); ++j)
            if (m(i, j) != m(j, i)) {
                throw InvalidArgument("matrix is not exactly symmetric at (" +
                                      std::to_string(i) + "," + std::to_string(j) + ")");
            }
    SymMatrix s;
    s.m_ = std::move(m);
    return s;
}

SymMatrix& SymMatrix::operator+=(const SymMatrix& o) {
    m_ += o.m_;
    return *this;
}

SymMatrix& SymMatrix::operator-=(const SymMatrix& o) {
    m_ -= o.m_;
    return *this;
}

SymMatrix& SymMatrix::operator*=(double s) {
    m_ *= s;
    return *this;
}

SymMatrix operator+(SymMatrix a, const SymMatrix& b) { return a += b; }
SymMatrix operator-(SymMatrix a, const SymMatrix& b) { return a -= b; }
SymMatrix operator*(SymMatrix a, double s) { return a *= s; }
SymMatrix operator*(double s, SymMatrix a) { return a *= s; }

SymMatrix symmetrize(const Matrix& m) {
    if (!m.is_square()) throw NonSquare("cannot symmetrize a non-square matrix");
    SymMatrix s;
    s.m_ = Matrix(m.rows(), m.cols());
    for (int i = 0; i < m.rows(); ++i) {
        s.m_(i, i) = m(i, i);
        for (int j = i + 1; j < m.cols(); ++j) {
            const double v = 0.5 * (m(i, j) + m(j, i));
            s.m_(i, j) = v;
            s.m_(j, i) = v;
        }
    }
    return s;
}

SymMatrix congruence(const Matrix& x, const SymMatrix& s) {
    return symmetrize(transpose_times(x, s.matrix() * x));
}

EigenSystem jacobi_eigen(const SymMatrix& sym) {
    const int n = sym.dim();
    Matrix a = sym.matrix();
    Matrix v = Matrix::identity(n);

    EigenSystem out;
    if (!a.all_finite()) {
        out.values.assign(static_cast<std::size_t>(n),
                          std::numeric_limits<double>::quiet_NaN());
        out.vectors = std::move(v);
        return out;
    }

    const double scale = a.norm_frobenius();
    auto off_mass = [&] {
        double s = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) s += 2.0 * a(i, j) * a(i, j);
        return std::sqrt(s);
    };

    constexpr int kMaxSweeps = 100;
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        if (off_mass() <= kJacobiOffTol * scale) break;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                double t;
                if (std::abs(theta) > 1e150) {
                    t = 0.5 / theta;
                } else {
                    t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                    if (theta < 0.0) t = -t;
                }
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                a(p, p) -= t * apq;
                a(q, q) += t * apq;
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (int r = 0; r < n; ++r) {
                    if (r != p && r != q) {
                        const double arp = a(r, p);
                        const double arq = a(r, q);
                        a(r, p) = c * arp - s * arq;
                        a(p, r) = a(r, p);
                        a(r, q) = s * arp + c * arq;
                        a(q, r) = a(r, q);
                    }
                    const double vrp = v(r, p);
                    const double vrq = v(r, q);
                    v(r, p) = c * vrp - s * vrq;
                    v(r, q) = s * vrp + c * vrq;
                }
            }
        }
    }

    std::vector<int> order(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
    std::sort(order.begin(), order.end(), [&](int i, int j) { return a(i, i) < a(j, j); });

    out.values.resize(static_cast<std::size_t>(n));
    out.vectors = Matrix(n, n);
    for (int k = 0; k < n; ++k) {
        const int src = order[static_cast<std::size_t>(k)];
        out.values[static_cast<std::size_t>(k)] = a(src, src);
        for (int r = 0; r < n; ++r) out.vectors(r, k) = v(r, src);
    }
    return out;
}

std::vector<double> eigenvalues(const SymMatrix& m) { return jacobi_eigen(m).values; }

double min_eigenvalue(const SymMatrix& m) {
    if (m.dim() == 1) return m(0, 0);
    return jacobi_eigen(m).values.front();
}

double max_eigenvalue(const SymMatrix& m) {
    if (m.dim() == 1) return m(0, 0);
    return jacobi_eigen(m).values.back();
}

bool is_definite(const SymMatrix& m, double margin) {
    return min_eigenvalue(m) >= margin;
}

Matrix cholesky(const SymMatrix& sym) {
    const int n = sym.dim();
    const Matrix& m = sym.matrix();
    Matrix l(n, n);
    for (int j = 0; j < n; ++j) {
        double diag = m(j, j);
        for (int k = 0; k < j; ++k) diag -= l(j, k) * l(j, k);
        if (!(diag > 0.0)) {
            throw NotPositiveDefinite(
                "non-positive pivot " + std::to_string(diag) + " at index " + std::to_string(j),
                j);
        }
        const double ljj = std::sqrt(diag);
        l(j, j) = ljj;
        for (int i = j + 1; i < n; ++i) {
            double s = m(i, j);
            for (int k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            l(i, j) = s / ljj;
        }
    }
    return l;
}

Matrix solve_definite(const SymMatrix& m, const Matrix& rhs) {
    if (rhs.rows() != m.dim()) {
        throw DimensionMismatch("right-hand side rows do not match the system");
    }
    const Matrix l = cholesky(m);
    const int n = m.dim();
    Matrix x = rhs;
    for (int c = 0; c < x.cols(); ++c) {
        for (int i = 0; i < n; ++i) {
            double s = x(i, c);
            for (int k = 0; k < i; ++k) s -= l(i, k) * x(k, c);
            x(i, c) = s / l(i, i);
        }
        for (int i = n - 1; i >= 0; --i) {
            double s = x(i, c);
            for (int k = i + 1; k < n; ++k) s -= l(k, i) * x(k, c);
            x(i, c) = s / l(i, i);
        }
    }
    return x;
}

}  // namespace rde
