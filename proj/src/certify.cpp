#include "rde/certify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rde/errors.hpp"
#include "rde/linode.hpp"

namespace rde {

namespace {

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw AlphaOutOfRange("alpha must lie in (0, 1), got " + std::to_string(alpha));
    }
}

// αλ_min(Q(t)) at every node.
MatrixPath certificate_forcing(const RiccatiProblem& prob, double alpha) {
    std::vector<double> f(static_cast<std::size_t>(prob.grid.n_nodes()));
    for (int k = 0; k < prob.grid.n_nodes(); ++k) {
        f[static_cast<std::size_t>(k)] = alpha * min_eigenvalue(symmetrize(prob.Q.at_node(k)));
    }
    return scalar_path(prob.grid, f);
}

double margin_of(const RiccatiProblem& prob, const MatrixPath& phi) {
    double margin = std::numeric_limits<double>::infinity();
    for (int k = 0; k < prob.grid.n_nodes(); ++k) {
        const Matrix& D = prob.D.at_node(k);
        const Matrix m = prob.R.at_node(k) + phi.scalar_at_node(k) * transpose_times(D, D);
        const double e = min_eigenvalue(symmetrize(m));
        if (std::isnan(e)) return e;
        margin = std::min(margin, e);
    }
    return margin;
}

double scan_objective(const RiccatiProblem& prob, double alpha) {
    // Points where φ fails count as worst possible.
    const Certificate c = certify_thm11(prob, alpha);
    const bool usable = c.verdict == Verdict::Certified || c.verdict == Verdict::MarginNegative;
    return usable && std::isfinite(c.margin) ? c.margin : -std::numeric_limits<double>::infinity();
}

}  // namespace

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Certified: return "Certified";
        case Verdict::PhiNotPositive: return "PhiNotPositive";
        case Verdict::MarginNegative: return "MarginNegative";
        case Verdict::DNotInvertible: return "DNotInvertible";
        case Verdict::GNotPositive: return "GNotPositive";
    }
    return "Unknown";
}

const char* to_string(GeneralVerdict v) {
    switch (v) {
        case GeneralVerdict::Certified: return "Certified";
        case GeneralVerdict::GNotPositive: return "GNotPositive";
        case GeneralVerdict::CertificateNotPositive: return "CertificateNotPositive";
        case GeneralVerdict::TerminalTooLarge: return "TerminalTooLarge";
        case GeneralVerdict::InequalityViolated: return "InequalityViolated";
        case GeneralVerdict::RNotDominated: return "RNotDominated";
    }
    return "Unknown";
}

MatrixPath lambda_alpha(const RiccatiProblem& prob, double alpha) {
    check_alpha(alpha);
    const TimeGrid& grid = prob.grid;
    const double inv = 1.0 / (1.0 - alpha);
    std::vector<double> lam(static_cast<std::size_t>(grid.n_nodes()));
    for (int k = 0; k < grid.n_nodes(); ++k) {
        const Matrix& A = prob.A.at_node(k);
        const Matrix& B = prob.B.at_node(k);
        const Matrix& C = prob.C.at_node(k);
        const Matrix& D = prob.D.at_node(k);
        require_invertible(D, grid.node(k));

        Matrix cross = B;                    // B + CᵀD
        cross += transpose_times(C, D);
        const SymMatrix dtd = symmetrize(transpose_times(D, D));
        const Matrix x = solve_definite(dtd, cross.transpose());

        Matrix m = A.transpose();
        m += A;
        m += transpose_times(C, C);
        m -= inv * (cross * x);
        lam[static_cast<std::size_t>(k)] = min_eigenvalue(symmetrize(m));
    }
    return scalar_path(grid, lam);
}

MatrixPath phi_alpha(const RiccatiProblem& prob, double alpha) {
    const MatrixPath lam = lambda_alpha(prob, alpha);
    return solve_scalar_backward(lam, certificate_forcing(prob, alpha),
                                 alpha * min_eigenvalue(prob.G), prob.grid);
}

Certificate certify_thm11(const RiccatiProblem& prob, double alpha) {
    check_alpha(alpha);
    Certificate cert;
    cert.alpha = alpha;
    cert.margin = std::numeric_limits<double>::quiet_NaN();

    const double g_min = min_eigenvalue(prob.G);
    try {
        cert.lambda_path = lambda_alpha(prob, alpha);
    } catch (const SingularD&) {
        cert.verdict = g_min > 0.0 ? Verdict::DNotInvertible : Verdict::GNotPositive;
        return cert;
    }
    cert.phi_path = solve_scalar_backward(*cert.lambda_path, certificate_forcing(prob, alpha),
                                          alpha * g_min, prob.grid);
    cert.margin = margin_of(prob, *cert.phi_path);

    bool phi_positive = true;
    for (int k = 0; k < prob.grid.n_nodes(); ++k) {
        if (!(cert.phi_path->scalar_at_node(k) > 0.0)) phi_positive = false;
    }

    if (!(g_min > 0.0)) {
        cert.verdict = Verdict::GNotPositive;
    } else if (!phi_positive) {
        cert.verdict = Verdict::PhiNotPositive;
    } else if (!(cert.margin >= 0.0)) {
        cert.verdict = Verdict::MarginNegative;
    } else {
        cert.verdict = Verdict::Certified;
    }
    return cert;
}

AlphaScan alpha_scan(const RiccatiProblem& prob, int n_coarse, Execution exec) {
    if (n_coarse < 8) throw InvalidArgument("alpha scan needs at least 8 coarse points");
    prob.validate();

    std::vector<double> alphas(static_cast<std::size_t>(n_coarse));
    std::vector<double> margins(static_cast<std::size_t>(n_coarse));
    for (int i = 0; i < n_coarse; ++i) {
        alphas[static_cast<std::size_t>(i)] =
            kAlphaLo + (kAlphaHi - kAlphaLo) * static_cast<double>(i) / (n_coarse - 1);
    }

    if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic)
        for (int i = 0; i < n_coarse; ++i) {
            margins[static_cast<std::size_t>(i)] =
                scan_objective(prob, alphas[static_cast<std::size_t>(i)]);
        }
    } else {
        for (int i = 0; i < n_coarse; ++i) {
            margins[static_cast<std::size_t>(i)] =
                scan_objective(prob, alphas[static_cast<std::size_t>(i)]);
        }
    }

    // First maximizer in α order, so the result is independent of scheduling.
    int best_i = 0;
    for (int i = 1; i < n_coarse; ++i) {
        if (margins[static_cast<std::size_t>(i)] > margins[static_cast<std::size_t>(best_i)]) {
            best_i = i;
        }
    }

    double best_alpha = alphas[static_cast<std::size_t>(best_i)];
    double best_margin = margins[static_cast<std::size_t>(best_i)];

    double lo = alphas[static_cast<std::size_t>(std::max(best_i - 1, 0))];
    double hi = alphas[static_cast<std::size_t>(std::min(best_i + 1, n_coarse - 1))];
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = scan_objective(prob, x1);
    double f2 = scan_objective(prob, x2);
    while (hi - lo >= 1e-6) {
        if (f1 >= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = scan_objective(prob, x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = scan_objective(prob, x2);
        }
    }
    const double refined = f1 >= f2 ? x1 : x2;
    const double refined_margin = std::max(f1, f2);
    if (refined_margin > best_margin) {
        best_alpha = refined;
        best_margin = refined_margin;
    }

    AlphaScan out;
    out.best_alpha = best_alpha;
    out.best = certify_thm11(prob, best_alpha);
    out.curve.reserve(static_cast<std::size_t>(n_coarse));
    for (int i = 0; i < n_coarse; ++i) {
        out.curve.emplace_back(alphas[static_cast<std::size_t>(i)],
                               margins[static_cast<std::size_t>(i)]);
    }
    return out;
}

GeneralCertificate certify_general(const RiccatiProblem& prob, const MatrixPath& r_alpha,
                                   const MatrixPath& r_alpha_dot, double alpha) {
    check_alpha(alpha);
    const TimeGrid& grid = prob.grid;
    const int d = prob.dim();
    const Matrix eye = Matrix::identity(d);
    for (int k = 0; k < grid.n_nodes(); ++k) {
        if ((prob.D.at_node(k) - eye).max_abs() > 1e-12) {
            throw NotNormalized("certify_general needs D = I; apply normalize_D first");
        }
    }
    if (!(r_alpha.grid() == grid) || !(r_alpha_dot.grid() == grid) || r_alpha.rows() != d ||
        r_alpha_dot.rows() != d) {
        throw DimensionMismatch("certificate paths must live on the problem grid with d x d shape");
    }

    GeneralCertificate out;
    out.alpha = alpha;
    const double data_norm =
        std::max({prob.A.sup_norm(), prob.B.sup_norm(), prob.C.sup_norm(), prob.Q.sup_norm(),
                  prob.R.sup_norm(), prob.G.matrix().norm_inf(), r_alpha.sup_norm(),
                  r_alpha_dot.sup_norm()});
    out.slack = 1e-9 * (1.0 + data_norm);

    const double inf = std::numeric_limits<double>::infinity();
    out.min_certificate_eig = inf;
    out.min_inequality_eig = inf;
    out.min_dominance_eig = inf;

    const double inv = 1.0 / (1.0 - alpha);
    for (int k = 0; k < grid.n_nodes(); ++k) {
        const SymMatrix ra = symmetrize(r_alpha.at_node(k));
        const double ra_min = min_eigenvalue(ra);
        out.min_certificate_eig = std::min(out.min_certificate_eig, ra_min);
        out.min_dominance_eig = std::min(
            out.min_dominance_eig, min_eigenvalue(symmetrize(prob.R.at_node(k) + ra.matrix())));
        if (!(ra_min > 0.0)) continue;

        const Matrix& A = prob.A.at_node(k);
        const Matrix& B = prob.B.at_node(k);
        const Matrix& C = prob.C.at_node(k);
        const Matrix ra_a = ra.matrix() * A;
        Matrix lhs = r_alpha_dot.at_node(k);
        lhs += ra_a.transpose();
        lhs += ra_a;
        lhs += transpose_times(C, ra.matrix() * C);
        lhs += alpha * prob.Q.at_node(k);
        Matrix s = ra.matrix() * B;  // R_αB + CᵀR_α
        s += transpose_times(C, ra.matrix());
        lhs -= inv * (s * solve_definite(ra, s.transpose()));
        out.min_inequality_eig = std::min(out.min_inequality_eig, min_eigenvalue(symmetrize(lhs)));
    }
    out.terminal_excess = max_eigenvalue(
        symmetrize(r_alpha.at_node(grid.n_steps()) - alpha * prob.G.matrix()));

    if (!(min_eigenvalue(prob.G) > 0.0)) {
        out.verdict = GeneralVerdict::GNotPositive;
    } else if (!(out.min_certificate_eig > 0.0)) {
        out.verdict = GeneralVerdict::CertificateNotPositive;
    } else if (out.terminal_excess > out.slack) {
        out.verdict = GeneralVerdict::TerminalTooLarge;
    } else if (out.min_inequality_eig < -out.slack) {
        out.verdict = GeneralVerdict::InequalityViolated;
    } else if (out.min_dominance_eig < -out.slack) {
        out.verdict = GeneralVerdict::RNotDominated;
    } else {
        out.verdict = GeneralVerdict::Certified;
    }
    return out;
}

std::pair<MatrixPath, MatrixPath> scalar_certificate_paths(const RiccatiProblem& prob,
                                                           double alpha) {
    const MatrixPath lam = lambda_alpha(prob, alpha);
    const MatrixPath forcing = certificate_forcing(prob, alpha);
    const MatrixPath phi = solve_scalar_backward(lam, forcing, alpha * min_eigenvalue(prob.G),
                                                 prob.grid);
    const Matrix eye = Matrix::identity(prob.dim());
    std::vector<Matrix> value, rate;
    for (int k = 0; k < prob.grid.n_nodes(); ++k) {
        const double p = phi.scalar_at_node(k);
        const double p_dot = -(lam.scalar_at_node(k) * p + forcing.scalar_at_node(k));
        value.push_back(p * eye);
        rate.push_back(p_dot * eye);
    }
    return {MatrixPath(prob.grid, std::move(value)), MatrixPath(prob.grid, std::move(rate))};
}

bool lower_bound_check(const RiccatiSolution& sol, const MatrixPath& r_alpha, double alpha) {
    check_alpha(alpha);
    for (int k = 0; k < sol.P.grid().n_nodes(); ++k) {
        const Matrix diff = sol.P.at_node(k) - (1.0 / alpha) * r_alpha.at_node(k);
        if (min_eigenvalue(symmetrize(diff)) < -1e-6) return false;
    }
    return true;
}

CostWeights weights_of(const RiccatiProblem& prob) { return {prob.R, prob.Q, prob.G}; }

RiccatiProblem with_weights(const RiccatiProblem& prob, const CostWeights& w) {
    RiccatiProblem out = prob;
    out.R = w.R;
    out.Q = w.Q;
    out.G = w.G;
    out.validate();
    return out;
}

CostWeights scale_weights(const CostWeights& w, double lam) {
    if (!(lam > 0.0)) throw NonPositiveLambda("weight scale must be positive");
    return {scale(w.R, lam), scale(w.Q, lam), w.G * lam};
}

CostWeights add_weights(const CostWeights& w1, const CostWeights& w2) {
    if (w1.G.dim() != w2.G.dim() || !(w1.R.grid() == w2.R.grid()) ||
        !(w1.Q.grid() == w2.Q.grid()) || w1.R.rows() != w2.R.rows() ||
        w1.Q.rows() != w2.Q.rows()) {
        throw DimensionMismatch("cost weights have different grids or dimensions");
    }
    return {add(w1.R, w2.R), add(w1.Q, w2.Q), w1.G + w2.G};
}

}  // namespace rde
