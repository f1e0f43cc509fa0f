#pragma once

#include <functional>
#include <vector>

#include "rde/symlin.hpp"

namespace rde {

/// Uniform grid t_k = k·T/n on [0, T], k = 0..n.
class TimeGrid {
public:
    TimeGrid(double horizon, int n_steps);

    double horizon() const { return horizon_; }
    int n_steps() const { return n_steps_; }
    int n_nodes() const { return n_steps_ + 1; }
    double step() const { return horizon_ / n_steps_; }
    /// Exact at both ends: node(0) == 0 and node(n_steps) == T.
    double node(int k) const;

    friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

private:
    double horizon_;
    int n_steps_;
};

enum class Interpolation { Linear, ConstantLeft };

/// Matrix-valued function of time sampled on a TimeGrid. Scalar paths are 1×1.
class MatrixPath {
public:
    MatrixPath(TimeGrid grid, std::vector<Matrix> samples,
               Interpolation interp = Interpolation::Linear);

    static MatrixPath constant(const Matrix& m, const TimeGrid& grid,
                               Interpolation interp = Interpolation::Linear);
    static MatrixPath sample(const TimeGrid& grid, const std::function<Matrix(double)>& f,
                             Interpolation interp = Interpolation::Linear);

    const TimeGrid& grid() const { return grid_; }
    Interpolation interpolation() const { return interp_; }
    int rows() const { return samples_.front().rows(); }
    int cols() const { return samples_.front().cols(); }

    const Matrix& at_node(int k) const { return samples_[static_cast<std::size_t>(k)]; }
    const std::vector<Matrix>& samples() const { return samples_; }

    /// Interpolated value; exact at nodes. Throws OutOfDomain outside [0, T].
    Matrix eval(double t) const;
    /// 1×1 convenience.
    double eval_scalar(double t) const { return eval(t)(0, 0); }
    double scalar_at_node(int k) const { return at_node(k)(0, 0); }

    /// max_k ‖sample_k‖_∞.
    double sup_norm() const;

private:
    TimeGrid grid_;
    std::vector<Matrix> samples_;
    Interpolation interp_;
};

MatrixPath from_constant(const Matrix& m, const TimeGrid& grid);

/// Node-wise a + b; both paths must share grid and shape.
MatrixPath add(const MatrixPath& a, const MatrixPath& b);
MatrixPath scale(const MatrixPath& a, double s);

/// Trapezoidal rule over [0, T].
Matrix quadrature(const MatrixPath& f);

/// Scalar path (1×1 samples) from per-node values.
MatrixPath scalar_path(const TimeGrid& grid, const std::vector<double>& values);

}  // namespace rde
