#pragma once

// JSON problem files and trajectory output. The formats are documented in
// FORMATS.md.

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

#include "rde/riccati.hpp"

namespace rde {

inline constexpr int kDefaultGridSteps = 1000;
inline constexpr double kSymmetryTol = 1e-12;

/// Parses a problem document and resamples every matrix onto the uniform
/// grid. `grid_override` replaces the document's "grid_points".
/// Throws ParseError or ValidationError, both carrying a JSON pointer.
RiccatiProblem parse_problem(const std::string& text,
                             std::optional<int> grid_override = std::nullopt);

RiccatiProblem load_problem(const std::filesystem::path& path,
                            std::optional<int> grid_override = std::nullopt);

/// Writes the problem as grid-sampled series (constant matrices as nested
/// arrays). Re-parsing yields bit-identical samples.
std::string serialize_problem(const RiccatiProblem& prob);

/// CSV header + one row per node: t, P row-major, gap.
void write_solution_csv(std::ostream& os, const RiccatiSolution& sol);

/// CSV header + one row per node: t, gain row-major.
void write_gain_csv(std::ostream& os, const RiccatiSolution& sol);

/// JSON document with t, P, gain, gap and the iteration diagnostics.
std::string solution_json(const RiccatiSolution& sol);

}  // namespace rde
