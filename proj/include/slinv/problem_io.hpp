#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "slinv/potential.hpp"
#include "slinv/problem.hpp"
#include "slinv/spectrum.hpp"

namespace slinv {

inline constexpr int kProblemFormatVersion = 1;

/// On-disk problem description. The solver block is optional in the file;
/// absent fields keep the SpectrumOptions defaults.
struct ProblemFile {
  Potential potential;
  BoundaryMatrix boundary;
  SpectrumOptions solver;

  ProblemSpec spec(ProblemKind kind) const { return {potential, boundary, kind}; }
};

/// Parses the JSON problem format. Syntax errors report line and column,
/// schema errors name the offending field; both as InputError.
ProblemFile parse_problem(std::string_view text);
ProblemFile read_problem(const std::filesystem::path& path);

/// Pretty-printed JSON with round-trip doubles.
std::string format_problem(const ProblemFile& problem);

/// index,lambda,sqrt_lambda rows at 17 significant digits, then
/// "# kind: ..." and "# audit: ..." comment lines.
void write_spectrum_csv(std::ostream& out, const Spectrum& sp);
std::string format_spectrum_csv(const Spectrum& sp);

/// Reads a spectrum CSV. Rows must be numbered 0, 1, ... in order; comment
/// lines may appear anywhere. `fallback` is used when no "# kind:" line exists.
Spectrum parse_spectrum_csv(std::string_view text, ProblemKind fallback);
Spectrum read_spectrum_csv(const std::filesystem::path& path, ProblemKind fallback);

}  // namespace slinv
