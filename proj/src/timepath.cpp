#include "rde/timepath.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rde/errors.hpp"

namespace rde {

TimeGrid::TimeGrid(double horizon, int n_steps) : horizon_(horizon), n_steps_(n_steps) {
    if (!(horizon > 0.0) || !std::isfinite(horizon)) {
        throw InvalidArgument("time horizon must be positive and finite");
    }
    if (n_steps < 2) throw InvalidArgument("time grid needs at least 2 steps");
}

double TimeGrid::node(int k) const {
    if (k <= 0) return 0.0;
    if (k >= n_steps_) return horizon_;
    return static_cast<double>(k) * horizon_ / static_cast<double>(n_steps_);
}

MatrixPath::MatrixPath(TimeGrid grid, std::vector<Matrix> samples, Interpolation interp)
    : grid_(grid), samples_(std::move(samples)), interp_(interp) {
    if (static_cast<int>(samples_.size()) != grid_.n_nodes()) {
        throw DimensionMismatch("path needs " + std::to_string(grid_.n_nodes()) +
                                " samples, got " + std::to_string(samples_.size()));
    }
    const int r = samples_.front().rows();
    const int c = samples_.front().cols();
    if (r < 1 || c < 1) throw DimensionMismatch("path samples must be non-empty");
    for (const Matrix& s : samples_) {
        if (s.rows() != r || s.cols() != c) {
            throw DimensionMismatch("path samples have inconsistent shapes");
        }
    }
}

MatrixPath MatrixPath::constant(const Matrix& m, const TimeGrid& grid, Interpolation interp) {
    return MatrixPath(grid, std::vector<Matrix>(static_cast<std::size_t>(grid.n_nodes()), m),
                      interp);
}

MatrixPath MatrixPath::sample(const TimeGrid& grid, const std::function<Matrix(double)>& f,
                              Interpolation interp) {
    std::vector<Matrix> samples;
    samples.reserve(static_cast<std::size_t>(grid.n_nodes()));
    for (int k = 0; k < grid.n_nodes(); ++k) samples.push_back(f(grid.node(k)));
    return MatrixPath(grid, std::move(samples), interp);
}

Matrix MatrixPath::eval(double t) const {
    const double horizon = grid_.horizon();
    if (!(t >= 0.0 && t <= horizon)) {
        throw OutOfDomain("time " + std::to_string(t) + " outside [0, " +
                          std::to_string(horizon) + "]");
    }
    const int n = grid_.n_steps();
    int k = static_cast<int>(std::floor(t / grid_.step()));
    k = std::clamp(k, 0, n);
    while (k > 0 && grid_.node(k) > t) --k;
    while (k < n && grid_.node(k + 1) <= t) ++k;

    if (grid_.node(k) == t || k == n) return samples_[static_cast<std::size_t>(k)];
    if (interp_ == Interpolation::ConstantLeft) return samples_[static_cast<std::size_t>(k)];

    const double t0 = grid_.node(k);
    const double t1 = grid_.node(k + 1);
    const double w = (t - t0) / (t1 - t0);
    const Matrix& a = samples_[static_cast<std::size_t>(k)];
    const Matrix& b = samples_[static_cast<std::size_t>(k + 1)];
    Matrix out(a.rows(), a.cols());
    auto o = out.data();
    auto da = a.data();
    auto db = b.data();
    for (std::size_t i = 0; i < o.size(); ++i) o[i] = (1.0 - w) * da[i] + w * db[i];
    return out;
}

double MatrixPath::sup_norm() const {
    double best = 0.0;
    for (const Matrix& s : samples_) best = std::max(best, s.norm_inf());
    return best;
}

MatrixPath from_constant(const Matrix& m, const TimeGrid& grid) {
    return MatrixPath::constant(m, grid);
}

MatrixPath add(const MatrixPath& a, const MatrixPath& b) {
    if (!(a.grid() == b.grid())) throw DimensionMismatch("paths live on different grids");
    std::vector<Matrix> out;
    out.reserve(a.samples().size());
    for (int k = 0; k < a.grid().n_nodes(); ++k) out.push_back(a.at_node(k) + b.at_node(k));
    return MatrixPath(a.grid(), std::move(out), a.interpolation());
}

MatrixPath scale(const MatrixPath& a, double s) {
    std::vector<Matrix> out;
    out.reserve(a.samples().size());
    for (const Matrix& m : a.samples()) out.push_back(m * s);
    return MatrixPath(a.grid(), std::move(out), a.interpolation());
}

Matrix quadrature(const MatrixPath& f) {
    const TimeGrid& g = f.grid();
    const int n = g.n_steps();
    Matrix sum = f.at_node(0) * 0.5;
    for (int k = 1; k < n; ++k) sum += f.at_node(k);
    sum += f.at_node(n) * 0.5;
    return sum * g.step();
}

MatrixPath scalar_path(const TimeGrid& grid, const std::vector<double>& values) {
    std::vector<Matrix> samples;
    samples.reserve(values.size());
    for (double v : values) samples.push_back(Matrix::scalar(v));
    return MatrixPath(grid, std::move(samples));
}

}  // namespace rde
