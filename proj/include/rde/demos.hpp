#pragma once

// Built-in example problems on [0, 1] with terminal weight G = I.

#include <string>
#include <vector>

#include "rde/riccati.hpp"

namespace rde {

/// Two coupled states, D = I:
///   dx₁ = (a₁x₁ + u₂)dt + (x₂ + u₁)dw,
///   dx₂ = (a₂x₂ − u₁)dt + (x₁ + u₂)dw,
/// control weight diag(r₁, r₂), no state weight.
struct Rotation2dParams {
    double a1 = 2.0;
    double a2 = 0.5;
    double r1 = -0.1;
    double r2 = -0.1;
};

/// dx = (ax + bu)dt + (cx + u)dw with weights r (control) and q (state).
struct General1dParams {
    double a = 1.0;
    double b = 1.0;
    double c = 0.0;
    double q = -0.3;
    double r = -0.1;
};

RiccatiProblem demo_2d_rotation(const Rotation2dParams& p, int n_steps);
RiccatiProblem demo_1d_general(const General1dParams& p, int n_steps);
/// a = c = q = 0, b = 1: dx = u dt + u dw with control weight r.
RiccatiProblem demo_1d_constant(double r, int n_steps);

const std::vector<std::string>& demo_names();

}  // namespace rde
