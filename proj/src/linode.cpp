#include "rde/linode.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rde/errors.hpp"

namespace rde {

namespace {

// Ṗ = −(ÂᵀP + PÂ + ĈᵀPĈ + Q̂); the caller guarantees P and Q̂ symmetric.
Matrix lyapunov_rhs(const Matrix& a, const Matrix& c, const Matrix& q, const Matrix& p) {
    const Matrix pa = p * a;
    Matrix out = pa.transpose();  // ÂᵀP
    out += pa;
    out += transpose_times(c, p * c);
    out += q;
    out *= -1.0;
    return out;
}

struct Coeffs {
    Matrix a, c, q;
};

void check_lyapunov_shapes(const LyapunovData& data, const TimeGrid& grid) {
    const int d = data.terminal.dim();
    auto check = [&](const MatrixPath& p, const char* name) {
        if (p.rows() != d || p.cols() != d) {
            throw DimensionMismatch(std::string(name) + " has wrong shape");
        }
        if (p.grid().horizon() != grid.horizon()) {
            throw DimensionMismatch(std::string(name) + " has a different horizon");
        }
    };
    check(data.a_hat, "A-hat");
    check(data.c_hat, "C-hat");
    check(data.q_hat, "Q-hat");
}

}  // namespace

MatrixPath solve_lyapunov_backward(const LyapunovData& data, const TimeGrid& grid,
                                   int stop_node) {
    check_lyapunov_shapes(data, grid);
    if (stop_node < 0 || stop_node > grid.n_steps()) {
        throw InvalidArgument("stop node outside the grid");
    }
    const int n = grid.n_steps();
    const double h = grid.step();

    auto coeffs = [&](double t) {
        return Coeffs{data.a_hat.eval(t), data.c_hat.eval(t), data.q_hat.eval(t)};
    };

    std::vector<Matrix> out(static_cast<std::size_t>(grid.n_nodes()));
    out[static_cast<std::size_t>(n)] = data.terminal.matrix();

    Coeffs at_right = coeffs(grid.node(n));
    for (int k = n; k > stop_node; --k) {
        const double t = grid.node(k);
        const double t_left = grid.node(k - 1);
        const double t_mid = 0.5 * (t + t_left);
        const Coeffs mid = coeffs(t_mid);
        Coeffs at_left = coeffs(t_left);

        const Matrix& p = out[static_cast<std::size_t>(k)];
        const Matrix k1 = lyapunov_rhs(at_right.a, at_right.c, at_right.q, p);
        const Matrix k2 = lyapunov_rhs(mid.a, mid.c, mid.q, p - (0.5 * h) * k1);
        const Matrix k3 = lyapunov_rhs(mid.a, mid.c, mid.q, p - (0.5 * h) * k2);
        const Matrix k4 = lyapunov_rhs(at_left.a, at_left.c, at_left.q, p - h * k3);

        Matrix incr = k1;
        incr += 2.0 * k2;
        incr += 2.0 * k3;
        incr += k4;
        out[static_cast<std::size_t>(k - 1)] = symmetrize(p - (h / 6.0) * incr).matrix();
        at_right = std::move(at_left);
    }
    for (int k = stop_node - 1; k >= 0; --k) {
        out[static_cast<std::size_t>(k)] = out[static_cast<std::size_t>(stop_node)];
    }
    return MatrixPath(grid, std::move(out));
}

namespace {
constexpr double kMaxStiffStep = 0.5;
}  // namespace

MatrixPath solve_scalar_backward(const MatrixPath& lambda, const MatrixPath& forcing,
                                 double terminal, const TimeGrid& grid) {
    if (lambda.rows() != 1 || lambda.cols() != 1 || forcing.rows() != 1 ||
        forcing.cols() != 1) {
        throw DimensionMismatch("scalar ODE coefficients must be 1x1 paths");
    }
    const int n = grid.n_steps();
    const double h = grid.step();
    auto rhs = [](double lam, double f, double phi) { return -(lam * phi + f); };

    std::vector<double> phi(static_cast<std::size_t>(grid.n_nodes()));
    phi[static_cast<std::size_t>(n)] = terminal;
    for (int k = n; k >= 1; --k) {
        const double t = grid.node(k);
        const double t_left = grid.node(k - 1);
        const double stiff = std::max({std::abs(lambda.eval_scalar(t)),
                                       std::abs(lambda.eval_scalar(0.5 * (t + t_left))),
                                       std::abs(lambda.eval_scalar(t_left))});
        // Substeps keep |λ|·h inside the RK4 stability interval; large |λ|
        // otherwise produces spurious growth of φ.
        const int m = std::max(1, static_cast<int>(std::ceil(stiff * h / kMaxStiffStep)));
        const double hs = h / m;

        double p = phi[static_cast<std::size_t>(k)];
        for (int j = 0; j < m; ++j) {
            const double tr = t - j * hs;
            const double tl = j + 1 == m ? t_left : t - (j + 1) * hs;
            const double tm = 0.5 * (tr + tl);
            const double lr = lambda.eval_scalar(tr), fr = forcing.eval_scalar(tr);
            const double lm = lambda.eval_scalar(tm), fm = forcing.eval_scalar(tm);
            const double ll = lambda.eval_scalar(tl), fl = forcing.eval_scalar(tl);
            const double k1 = rhs(lr, fr, p);
            const double k2 = rhs(lm, fm, p - 0.5 * hs * k1);
            const double k3 = rhs(lm, fm, p - 0.5 * hs * k2);
            const double k4 = rhs(ll, fl, p - hs * k3);
            p -= (hs / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        phi[static_cast<std::size_t>(k - 1)] = p;
    }
    return scalar_path(grid, phi);
}

}  // namespace rde
