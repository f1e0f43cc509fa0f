#include "rde/demos.hpp"

namespace rde {

namespace {

MatrixPath constant(const Matrix& m, const TimeGrid& g) { return MatrixPath::constant(m, g); }

}  // namespace

RiccatiProblem demo_2d_rotation(const Rotation2dParams& p, int n_steps) {
    const TimeGrid grid(1.0, n_steps);
    const Matrix A{{p.a1, 0.0}, {0.0, p.a2}};
    const Matrix B{{0.0, 1.0}, {-1.0, 0.0}};
    const Matrix C{{0.0, 1.0}, {1.0, 0.0}};
    const Matrix R{{p.r1, 0.0}, {0.0, p.r2}};
    return RiccatiProblem{grid,
                          constant(A, grid),
                          constant(B, grid),
                          constant(C, grid),
                          constant(Matrix::identity(2), grid),
                          constant(R, grid),
                          constant(Matrix::zeros(2, 2), grid),
                          SymMatrix::identity(2)};
}

RiccatiProblem demo_1d_general(const General1dParams& p, int n_steps) {
    const TimeGrid grid(1.0, n_steps);
    auto s = [&](double v) { return constant(Matrix::scalar(v), grid); };
    return RiccatiProblem{grid, s(p.a), s(p.b), s(p.c), s(1.0), s(p.r), s(p.q),
                          SymMatrix::identity(1)};
}

RiccatiProblem demo_1d_constant(double r, int n_steps) {
    return demo_1d_general(General1dParams{0.0, 1.0, 0.0, 0.0, r}, n_steps);
}

const std::vector<std::string>& demo_names() {
    static const std::vector<std::string> names{"2d-rotation", "1d-general", "1d-constant"};
    return names;
}

}  // namespace rde
