#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>

#include "slinv/problem.hpp"

namespace slinv::cli {

enum ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kInputError = 2,
  kOverflow = 3,
  kAuditFailure = 4,
  kNotConverged = 5,
  kDegenerate = 6,
  kConditioning = 7,
};

/// Command-line overrides; unset fields fall back to the problem file's
/// solver block, then to the library defaults.
struct SolverFlags {
  std::optional<int> steps;
  std::optional<int> scan_points_per_pi;
  std::optional<double> root_tolerance;
};

inline constexpr int kDefaultDecomposeSteps = 8192;
inline constexpr int kDefaultDecomposeSamples = 200;

using Path = std::filesystem::path;

/// One row per kind: kind,lambda,y1,dy1,y2,dy2,delta (12 significant digits).
int cmd_forward(const Path& problem, double lambda, const SolverFlags& flags,
                std::ostream& out, std::ostream& err);

/// Spectrum CSV to `out_path`, or to `out` when no path is given.
int cmd_spectrum(const Path& problem, ProblemKind kind, int count,
                 const std::optional<Path>& out_path, const SolverFlags& flags,
                 std::ostream& out, std::ostream& err);

/// Recovered problem file to `out_path`; the misfit report goes to `out`.
int cmd_invert(const Path& spectrum_l, const Path& spectrum_l1, const Path& spectrum_l2,
               int basis_size, const Path& out_path, const SolverFlags& flags,
               std::ostream& out, std::ostream& err);

/// Key-value report of the basis coefficients of the full determinant.
/// `steps` defaults to kDefaultDecomposeSteps; s_max to s_min + 10 pi.
int cmd_decompose(const Path& problem, double s_min, std::optional<double> s_max, int samples,
                  const std::optional<Path>& out_path, const SolverFlags& flags,
                  std::ostream& out, std::ostream& err);

}  // namespace slinv::cli
