#pragma once

// Sufficient conditions for solvability of the indefinite Riccati equation.
//
// The scalar certificate: for α ∈ (0,1) let
//   λ_α(t) = λ_min(Aᵀ + A + CᵀC − (1−α)⁻¹(B + CᵀD)(DᵀD)⁻¹(Bᵀ + DᵀC)),
//   φ̇_α + λ_α φ_α + α λ_min(Q) = 0,  φ_α(T) = α λ_min(G).
// If G > 0, D is invertible, φ_α > 0 and R ≥ −φ_α DᵀD on [0,T], the equation
// has a solution on [0,T].

#include <utility>
#include <vector>

#include "rde/riccati.hpp"

namespace rde {

enum class Verdict { Certified, PhiNotPositive, MarginNegative, DNotInvertible, GNotPositive };

const char* to_string(Verdict v);

struct Certificate {
    double alpha = 0.0;
    std::optional<MatrixPath> lambda_path;  // absent when D is singular
    std::optional<MatrixPath> phi_path;
    /// min_t λ_min(R + φ_α DᵀD); NaN when φ_α could not be computed.
    double margin = 0.0;
    Verdict verdict = Verdict::GNotPositive;

    bool certified() const { return verdict == Verdict::Certified; }
};

/// Throws AlphaOutOfRange or SingularD.
MatrixPath lambda_alpha(const RiccatiProblem& prob, double alpha);
MatrixPath phi_alpha(const RiccatiProblem& prob, double alpha);

/// Total: every failure mode becomes a verdict.
Certificate certify_thm11(const RiccatiProblem& prob, double alpha);

enum class Execution { Serial, Parallel };

inline constexpr double kAlphaLo = 1e-3;
inline constexpr double kAlphaHi = 1.0 - 1e-3;

struct AlphaScan {
    double best_alpha = 0.0;
    Certificate best;
    /// Coarse grid (α, margin) pairs in increasing α.
    std::vector<std::pair<double, double>> curve;
};

/// Maximizes the margin over α: uniform coarse grid on [kAlphaLo, kAlphaHi]
/// followed by golden-section refinement around the coarse maximizer until
/// the bracket is shorter than 1e−6. Throws InvalidArgument if n_coarse < 8.
AlphaScan alpha_scan(const RiccatiProblem& prob, int n_coarse,
                     Execution exec = Execution::Parallel);

enum class GeneralVerdict {
    Certified,
    GNotPositive,
    CertificateNotPositive,  // R_α ≯ 0 somewhere
    TerminalTooLarge,        // R_α(T) ≰ αG
    InequalityViolated,      // differential inequality fails
    RNotDominated,           // R + R_α ≱ 0
};

const char* to_string(GeneralVerdict v);

struct GeneralCertificate {
    double alpha = 0.0;
    GeneralVerdict verdict = GeneralVerdict::GNotPositive;
    double min_certificate_eig = 0.0;  // min_t λ_min(R_α)
    double terminal_excess = 0.0;      // λ_max(R_α(T) − αG)
    double min_inequality_eig = 0.0;   // min_t λ_min(LHS of the inequality)
    double min_dominance_eig = 0.0;    // min_t λ_min(R + R_α)
    double slack = 0.0;

    bool certified() const { return verdict == GeneralVerdict::Certified; }
};

/// Checks the matrix certificate R_α on a D-normalized problem:
///   R_α > 0,  R_α(T) ≤ αG,  R + R_α ≥ 0,
///   Ṙ_α + AᵀR_α + R_αA + CᵀR_αC + αQ
///     − (1−α)⁻¹(R_αB + CᵀR_α)R_α⁻¹(R_αB + CᵀR_α)ᵀ ≥ 0,
/// at every node. Ṙ_α is supplied by the caller. Throws NotNormalized.
GeneralCertificate certify_general(const RiccatiProblem& prob_normalized,
                                   const MatrixPath& r_alpha, const MatrixPath& r_alpha_dot,
                                   double alpha);

/// φ_α·I and its derivative from the scalar certificate ODE, as inputs for
/// certify_general.
std::pair<MatrixPath, MatrixPath> scalar_certificate_paths(const RiccatiProblem& prob,
                                                           double alpha);

/// λ_min(P(t) − α⁻¹R_α(t)) ≥ −1e−6 at every node.
bool lower_bound_check(const RiccatiSolution& sol, const MatrixPath& r_alpha, double alpha);

struct CostWeights {
    MatrixPath R, Q;
    SymMatrix G;
};

CostWeights weights_of(const RiccatiProblem& prob);
RiccatiProblem with_weights(const RiccatiProblem& prob, const CostWeights& w);

/// Throws NonPositiveLambda.
CostWeights scale_weights(const CostWeights& w, double lam);
/// Throws DimensionMismatch.
CostWeights add_weights(const CostWeights& w1, const CostWeights& w2);

}  // namespace rde
