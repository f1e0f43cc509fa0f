#pragma once

// Indefinite Riccati differential equation
//
//   Ṗ + AᵀP + PA + CᵀPC + Q = (PB + CᵀPD)(R + DᵀPD)⁻¹(PB + CᵀPD)ᵀ,
//   P(T) = G,   R + DᵀPD > 0 on [0, T],
//
// solved by quasi-linearization: each iterate solves a linear Lyapunov ODE
// driven by the feedback of the previous iterate.

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "rde/symlin.hpp"
#include "rde/timepath.hpp"

namespace rde {

struct RiccatiProblem {
    TimeGrid grid;
    MatrixPath A, B, C, D;
    MatrixPath R, Q;  // symmetric at every node
    SymMatrix G;

    int dim() const { return G.dim(); }
    /// Throws DimensionMismatch / ValidationError on broken invariants.
    void validate() const;
};

struct SolverOptions {
    /// Convergence threshold on sup_t ‖P_n − P_{n−1}‖_∞; default 1e−9·(1+‖G‖).
    std::optional<double> conv_tol;
    int max_iter = 200;
    double mono_tol = 1e-7;
    /// Minimal admissible λ_min(R + DᵀPD); default 1e−8·(1+max‖R‖).
    std::optional<double> delta_floor;
    /// Iterates with λ_min(P) below −floor are declared unbounded;
    /// default 1e6·(1+‖G‖+T·max‖Q‖).
    std::optional<double> unbounded_floor;
    /// Relative residual tolerance reported through residual_ok.
    double residual_tol = 1e-3;
};

/// Tolerances after defaults have been resolved against a problem.
struct ResolvedTolerances {
    double conv_tol;
    double delta_floor;
    double unbounded_floor;
};
ResolvedTolerances resolve_tolerances(const RiccatiProblem& prob, const SolverOptions& opts);

struct RiccatiSolution {
    MatrixPath P;
    MatrixPath gain;  // Ψ(P(t))
    MatrixPath gap;   // λ_min(R + DᵀPD)(t), 1×1
    int iterations = 0;
    double sup_residual = 0.0;
    bool residual_ok = true;
    /// sup_t ‖P_n − P_{n−1}‖_∞ for n = 2..iterations.
    std::vector<double> iterate_history_norms;
    /// max_t λ_max(P_{n+1} − P_n) for n = 1..iterations−1.
    std::vector<double> monotonicity_history;
};

enum class FailureKind { ConstraintLoss, NoDecrease, MaxIterations, UnboundedBelow };

const char* to_string(FailureKind kind);

struct SolveFailure {
    FailureKind kind;
    std::optional<double> at_time;
    int at_iteration = 0;
    std::string diagnostics;
};

using SolveResult = std::variant<RiccatiSolution, SolveFailure>;

/// Ψ(P) = −(R + DᵀPD)⁻¹(BᵀP + DᵀPC) at time t. Throws NotPositiveDefinite.
Matrix feedback(const SymMatrix& P, double t, const RiccatiProblem& prob);

/// Φ(P,U) = (A+BU)ᵀP + P(A+BU) + (C+DU)ᵀP(C+DU) at time t.
SymMatrix phi_form(const SymMatrix& P, const Matrix& U, double t, const RiccatiProblem& prob);

/// ‖[Φ(P,U)+UᵀRU − Φ(P,Ψ)−ΨᵀRΨ] − (U−Ψ)ᵀ(R+DᵀPD)(U−Ψ)‖_∞ with Ψ = Ψ(P).
double completion_identity_residual(const SymMatrix& P, const Matrix& U, double t,
                                    const RiccatiProblem& prob);

/// Quasi-linearization from P_0 = 0.
SolveResult quasilinearize(const RiccatiProblem& prob, const SolverOptions& opts = {});

/// sup over interior nodes of the Riccati residual ‖Ṗ + … − (…)(R+DᵀPD)⁻¹(…)ᵀ‖_∞,
/// with Ṗ by central differences.
double residual(const MatrixPath& P, const RiccatiProblem& prob);

/// λ_min(R + DᵀPD) at every node of P.
MatrixPath positivity_gap(const MatrixPath& P, const RiccatiProblem& prob);

/// Change of control variables v = D·u: B' = BD⁻¹, D' = I, R' = D⁻ᵀRD⁻¹.
/// Throws SingularD.
RiccatiProblem normalize_D(const RiccatiProblem& prob);

inline constexpr double kSingularTol = 1e-12;

/// Throws SingularD unless det(DᵀD)/λ_max(DᵀD)^d exceeds kSingularTol.
void require_invertible(const Matrix& D, double at_time);

}  // namespace rde
