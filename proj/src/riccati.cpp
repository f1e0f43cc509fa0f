#include "rde/riccati.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "rde/errors.hpp"
#include "rde/linode.hpp"

namespace rde {

namespace {

struct NodeCoeffs {
    const Matrix& A;
    const Matrix& B;
    const Matrix& C;
    const Matrix& D;
    const Matrix& R;
    const Matrix& Q;
};

NodeCoeffs node_coeffs(const RiccatiProblem& prob, int k) {
    return {prob.A.at_node(k), prob.B.at_node(k), prob.C.at_node(k),
            prob.D.at_node(k), prob.R.at_node(k), prob.Q.at_node(k)};
}

// R + DᵀPD
SymMatrix control_weight(const Matrix& P, const Matrix& D, const Matrix& R) {
    return symmetrize(R + transpose_times(D, P * D));
}

Matrix feedback_at(const Matrix& P, const Matrix& B, const Matrix& C, const Matrix& D,
                   const Matrix& R) {
    const SymMatrix m = control_weight(P, D, R);
    Matrix numer = transpose_times(B, P);  // BᵀP
    numer += transpose_times(D, P * C);    // DᵀPC
    return -solve_definite(m, numer);
}

SymMatrix phi_form_at(const Matrix& P, const Matrix& U, const Matrix& A, const Matrix& B,
                      const Matrix& C, const Matrix& D) {
    const Matrix a_hat = A + B * U;
    const Matrix c_hat = C + D * U;
    const Matrix pa = P * a_hat;
    Matrix out = pa.transpose();
    out += pa;
    out += transpose_times(c_hat, P * c_hat);
    return symmetrize(out);
}

void check_path(const MatrixPath& p, const RiccatiProblem& prob, const char* name) {
    if (!(p.grid() == prob.grid)) {
        throw DimensionMismatch(std::string(name) + " is not sampled on the problem grid");
    }
    if (p.rows() != prob.dim() || p.cols() != prob.dim()) {
        throw DimensionMismatch(std::string(name) + " must be " + std::to_string(prob.dim()) +
                                "x" + std::to_string(prob.dim()));
    }
}

void check_symmetric_path(const MatrixPath& p, const char* name) {
    for (int k = 0; k < p.grid().n_nodes(); ++k) {
        const Matrix& m = p.at_node(k);
        for (int i = 0; i < m.rows(); ++i)
            for (int j = i + 1; j < m.cols(); ++j)
                if (m(i, j) != m(j, i)) {
                    throw ValidationError(name, "not symmetric at node " + std::to_string(k));
                }
    }
}


}  // namespace

void RiccatiProblem::validate() const {
    if (G.dim() < 1) throw ValidationError("G", "dimension must be at least 1");
    check_path(A, *this, "A");
    check_path(B, *this, "B");
    check_path(C, *this, "C");
    check_path(D, *this, "D");
    check_path(R, *this, "R");
    check_path(Q, *this, "Q");
    check_symmetric_path(R, "R");
    check_symmetric_path(Q, "Q");
}

const char* to_string(FailureKind kind) {
    switch (kind) {
        case FailureKind::ConstraintLoss: return "ConstraintLoss";
        case FailureKind::NoDecrease: return "NoDecrease";
        case FailureKind::MaxIterations: return "MaxIterations";
        case FailureKind::UnboundedBelow: return "UnboundedBelow";
    }
    return "Unknown";
}

ResolvedTolerances resolve_tolerances(const RiccatiProblem& prob, const SolverOptions& opts) {
    const double g_norm = prob.G.matrix().norm_inf();
    ResolvedTolerances tol{};
    tol.conv_tol = opts.conv_tol.value_or(1e-9 * (1.0 + g_norm));
    tol.delta_floor = opts.delta_floor.value_or(1e-8 * (1.0 + prob.R.sup_norm()));
    tol.unbounded_floor = opts.unbounded_floor.value_or(
        1e6 * (1.0 + g_norm + prob.grid.horizon() * prob.Q.sup_norm()));
    return tol;
}

Matrix feedback(const SymMatrix& P, double t, const RiccatiProblem& prob) {
    return feedback_at(P.matrix(), prob.B.eval(t), prob.C.eval(t), prob.D.eval(t),
                       prob.R.eval(t));
}

SymMatrix phi_form(const SymMatrix& P, const Matrix& U, double t, const RiccatiProblem& prob) {
    return phi_form_at(P.matrix(), U, prob.A.eval(t), prob.B.eval(t), prob.C.eval(t),
                       prob.D.eval(t));
}

double completion_identity_residual(const SymMatrix& P, const Matrix& U, double t,
                                    const RiccatiProblem& prob) {
    const Matrix A = prob.A.eval(t), B = prob.B.eval(t), C = prob.C.eval(t), D = prob.D.eval(t);
    const SymMatrix R = symmetrize(prob.R.eval(t));
    const Matrix psi = feedback_at(P.matrix(), B, C, D, R.matrix());

    Matrix lhs = phi_form_at(P.matrix(), U, A, B, C, D).matrix();
    lhs += congruence(U, R).matrix();
    lhs -= phi_form_at(P.matrix(), psi, A, B, C, D).matrix();
    lhs -= congruence(psi, R).matrix();

    const Matrix diff = U - psi;
    const Matrix rhs = congruence(diff, control_weight(P.matrix(), D, R.matrix())).matrix();
    return (lhs - rhs).norm_inf();
}

MatrixPath positivity_gap(const MatrixPath& P, const RiccatiProblem& prob) {
    std::vector<double> gap(static_cast<std::size_t>(P.grid().n_nodes()));
    for (int k = 0; k < P.grid().n_nodes(); ++k) {
        gap[static_cast<std::size_t>(k)] = min_eigenvalue(
            control_weight(P.at_node(k), prob.D.at_node(k), prob.R.at_node(k)));
    }
    return scalar_path(P.grid(), gap);
}

double residual(const MatrixPath& P, const RiccatiProblem& prob) {
    const TimeGrid& grid = P.grid();
    const int n = grid.n_steps();
    const double h = grid.step();
    double sup = 0.0;
    for (int k = 1; k < n; ++k) {
        const NodeCoeffs c = node_coeffs(prob, k);
        const Matrix& p = P.at_node(k);
        Matrix f = (P.at_node(k + 1) - P.at_node(k - 1)) * (0.5 / h);
        const Matrix pa = p * c.A;
        f += pa.transpose();
        f += pa;
        f += transpose_times(c.C, p * c.C);
        f += c.Q;
        Matrix s = p * c.B;                   // PB
        s += transpose_times(c.C, p * c.D);   // CᵀPD
        const SymMatrix m = control_weight(p, c.D, c.R);
        f -= s * solve_definite(m, s.transpose());
        sup = std::max(sup, f.norm_inf());
    }
    return sup;
}

SolveResult quasilinearize(const RiccatiProblem& prob, const SolverOptions& opts) {
    prob.validate();
    const ResolvedTolerances tol = resolve_tolerances(prob, opts);
    const TimeGrid& grid = prob.grid;
    const int n_nodes = grid.n_nodes();
    const int d = prob.dim();

    // Ψ(P_0) with P_0 = 0 has a vanishing numerator, so the first gain is zero.
    std::vector<Matrix> gains(static_cast<std::size_t>(n_nodes), Matrix::zeros(d, d));
    std::optional<MatrixPath> previous;
    std::vector<double> history;
    std::vector<double> mono_history;

    // Once an iterate loses the constraint, iteration continues on [t_start, T],
    // the part of the horizon where the iterate is still admissible. The loss
    // node then moves up towards the point where the limit leaves the
    // admissible region.
    int start = 0;
    std::optional<int> loss_node;
    std::optional<int> loss_iteration;
    std::string loss_message;

    auto loss_result = [&](int iteration) -> SolveResult {
        std::ostringstream os;
        os << loss_message << "; constraint lost below t=" << grid.node(*loss_node + 1)
           << " after " << iteration << " iterations";
        return SolveFailure{FailureKind::ConstraintLoss, grid.node(*loss_node),
                            loss_iteration.value_or(iteration), os.str()};
    };

    for (int iter = 1; iter <= opts.max_iter; ++iter) {
        std::vector<Matrix> a_hat, c_hat, q_hat;
        a_hat.reserve(static_cast<std::size_t>(n_nodes));
        c_hat.reserve(static_cast<std::size_t>(n_nodes));
        q_hat.reserve(static_cast<std::size_t>(n_nodes));
        for (int k = 0; k < n_nodes; ++k) {
            const NodeCoeffs c = node_coeffs(prob, k);
            const Matrix& u = gains[static_cast<std::size_t>(k)];
            a_hat.push_back(c.A + c.B * u);
            c_hat.push_back(c.C + c.D * u);
            q_hat.push_back((symmetrize(c.Q) + congruence(u, symmetrize(c.R))).matrix());
        }
        LyapunovData data{MatrixPath(grid, std::move(a_hat)), MatrixPath(grid, std::move(c_hat)),
                          MatrixPath(grid, std::move(q_hat)), prob.G};
        MatrixPath current = solve_lyapunov_backward(data, grid, start);

        // Scan backward from T: the first node reached by the integration that
        // breaks finiteness or the positivity constraint decides the outcome.
        double min_eig_p = std::numeric_limits<double>::infinity();
        std::optional<int> bad_node;
        for (int k = n_nodes - 1; k >= start; --k) {
            const Matrix& p = current.at_node(k);
            if (!p.all_finite()) {
                if (!loss_node) {
                    std::ostringstream os;
                    os << "iterate " << iter << " diverged (non-finite) at t=" << grid.node(k);
                    return SolveFailure{FailureKind::UnboundedBelow, grid.node(k), iter, os.str()};
                }
                bad_node = k;
                break;
            }
            const double gap = min_eigenvalue(control_weight(p, prob.D.at_node(k),
                                                             prob.R.at_node(k)));
            if (gap < tol.delta_floor) {
                if (!loss_node) {
                    std::ostringstream os;
                    os << "lambda_min(R + D'P D) = " << gap << " < " << tol.delta_floor
                       << " at t=" << grid.node(k) << " in iterate " << iter;
                    loss_message = os.str();
                    loss_iteration = iter;
                }
                bad_node = k;
                break;
            }
            min_eig_p = std::min(min_eig_p, min_eigenvalue(SymMatrix::from_exact(p)));
        }
        if (min_eig_p < -tol.unbounded_floor) {
            std::ostringstream os;
            os << "lambda_min(P) = " << min_eig_p << " below -" << tol.unbounded_floor
               << " in iterate " << iter;
            return SolveFailure{FailureKind::UnboundedBelow, std::nullopt, iter, os.str()};
        }
        if (bad_node) {
            loss_node = std::max(loss_node.value_or(-1), *bad_node);
            if (*bad_node >= n_nodes - 1) return loss_result(iter);
            start = *bad_node + 1;
        }

        bool converged = false;
        if (previous) {
            double increase = -std::numeric_limits<double>::infinity();
            double change = 0.0;
            double increase_time = 0.0;
            for (int k = start; k < n_nodes; ++k) {
                const Matrix delta = current.at_node(k) - previous->at_node(k);
                const double up = max_eigenvalue(SymMatrix::from_exact(delta));
                if (up > increase) {
                    increase = up;
                    increase_time = grid.node(k);
                }
                change = std::max(change, delta.norm_inf());
            }
            if (!loss_node) {
                mono_history.push_back(increase);
                history.push_back(change);
                if (iter >= 3 && increase > opts.mono_tol) {
                    std::ostringstream os;
                    os << "iterate " << iter << " increased by " << increase << " at t="
                       << increase_time;
                    return SolveFailure{FailureKind::NoDecrease, increase_time, iter, os.str()};
                }
            }
            converged = !bad_node && change < tol.conv_tol;
        }

        if (converged && loss_node) return loss_result(iter);
        if (converged) {
            RiccatiSolution sol{current, current, current, iter, 0.0, true, history, mono_history};
            std::vector<Matrix> final_gain;
            final_gain.reserve(static_cast<std::size_t>(n_nodes));
            for (int k = 0; k < n_nodes; ++k) {
                const NodeCoeffs c = node_coeffs(prob, k);
                final_gain.push_back(feedback_at(current.at_node(k), c.B, c.C, c.D, c.R));
            }
            sol.gain = MatrixPath(grid, std::move(final_gain));
            sol.gap = positivity_gap(current, prob);
            sol.sup_residual = residual(current, prob);
            sol.residual_ok = sol.sup_residual <= opts.residual_tol * (1.0 + current.sup_norm());
            return sol;
        }

        for (int k = 0; k < n_nodes; ++k) {
            if (k < start) {
                gains[static_cast<std::size_t>(k)] = Matrix::zeros(d, d);
                continue;
            }
            const NodeCoeffs c = node_coeffs(prob, k);
            gains[static_cast<std::size_t>(k)] =
                feedback_at(current.at_node(k), c.B, c.C, c.D, c.R);
        }
        previous = std::move(current);
    }

    if (loss_node) return loss_result(opts.max_iter);
    std::ostringstream os;
    os << "no convergence after " << opts.max_iter << " iterations";
    if (!history.empty()) os << "; last change " << history.back();
    return SolveFailure{FailureKind::MaxIterations, std::nullopt, opts.max_iter, os.str()};
}

void require_invertible(const Matrix& D, double at_time) {
    if (!D.is_square()) throw NonSquare("D must be square");
    const std::vector<double> ev = eigenvalues(symmetrize(transpose_times(D, D)));
    const double top = ev.back();
    double rel_det = top > 0.0 ? 1.0 : 0.0;
    if (top > 0.0)
        for (double v : ev) rel_det *= v / top;
    if (!(rel_det > kSingularTol)) {
        std::ostringstream os;
        os << "D is singular at t=" << at_time << " (relative det(D'D) = " << rel_det << ")";
        throw SingularD(os.str(), at_time);
    }
}

RiccatiProblem normalize_D(const RiccatiProblem& prob) {
    prob.validate();
    const TimeGrid& grid = prob.grid;
    const int d = prob.dim();
    std::vector<Matrix> b_new, r_new;
    b_new.reserve(static_cast<std::size_t>(grid.n_nodes()));
    r_new.reserve(static_cast<std::size_t>(grid.n_nodes()));
    for (int k = 0; k < grid.n_nodes(); ++k) {
        const Matrix& D = prob.D.at_node(k);
        require_invertible(D, grid.node(k));
        const SymMatrix dtd = symmetrize(transpose_times(D, D));
        const Matrix d_inv = solve_definite(dtd, D.transpose());  // (DᵀD)⁻¹Dᵀ = D⁻¹
        b_new.push_back(prob.B.at_node(k) * d_inv);
        r_new.push_back(congruence(d_inv, symmetrize(prob.R.at_node(k))).matrix());
    }
    RiccatiProblem out = prob;
    out.B = MatrixPath(grid, std::move(b_new), prob.B.interpolation());
    out.R = MatrixPath(grid, std::move(r_new), prob.R.interpolation());
    out.D = MatrixPath::constant(Matrix::identity(d), grid);
    return out;
}

}  // namespace rde
