#pragma once

#include "rde/symlin.hpp"
#include "rde/timepath.hpp"

namespace rde {

/// Coefficients of the linear matrix ODE
///   Ṗ + ÂᵀP + PÂ + ĈᵀPĈ + Q̂ = 0,  P(T) = G.
struct LyapunovData {
    MatrixPath a_hat;
    MatrixPath c_hat;
    MatrixPath q_hat;  // symmetric at every node
    SymMatrix terminal;
};

/// Integrates the Lyapunov-type ODE backward from P(T) = G with classical
/// RK4 on `grid`, symmetrizing after every step. Coefficients at half-nodes
/// come from the paths' interpolants. P(T) is G bit-exactly.
///
/// With `stop_node` > 0 the integration ends at that node and earlier nodes
/// hold a copy of its value.
MatrixPath solve_lyapunov_backward(const LyapunovData& data, const TimeGrid& grid,
                                   int stop_node = 0);

/// Integrates φ̇ + λ(t)φ + f(t) = 0 backward from φ(T) = terminal (RK4).
/// Steps where |λ|·h > 0.5 are split into equal substeps; the result is
/// still reported on `grid`.
MatrixPath solve_scalar_backward(const MatrixPath& lambda, const MatrixPath& forcing,
                                 double terminal, const TimeGrid& grid);

}  // namespace rde
