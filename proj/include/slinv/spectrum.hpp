#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "slinv/errors.hpp"
#include "slinv/fundamental.hpp"
#include "slinv/problem.hpp"

namespace slinv {

struct SpectrumOptions {
  int steps = kDefaultSteps;
  int scan_points_per_pi = 16;
  /// Absolute tolerance in s for lambda >= 0, in lambda below zero.
  double root_tolerance = 1e-10;
  /// Lowest lambda scanned; defaults to default_lambda_floor().
  std::optional<double> lambda_floor;
};

enum class AuditStatus { Complete, SuspectMissing };

/// Closed lambda interval in which a root was expected but no sign change seen.
struct LambdaInterval {
  double lo = 0.0;
  double hi = 0.0;
};

struct Spectrum {
  ProblemKind kind = ProblemKind::FullL;
  std::vector<double> eigenvalues;
  double root_tolerance = 1e-10;
  AuditStatus audit = AuditStatus::Complete;
  std::vector<LambdaInterval> suspect_intervals;

  std::size_t count() const noexcept { return eigenvalues.size(); }
  bool complete() const noexcept { return audit == AuditStatus::Complete; }
};

/// Raised when the scan ceiling is reached with fewer roots than requested
/// and the audit flags gaps (non-real or tangential roots are likely).
class AuditError : public Error {
 public:
  AuditError(const std::string& what, Spectrum partial)
      : Error(what), partial_(std::move(partial)) {}
  const Spectrum& partial() const noexcept { return partial_; }

 private:
  Spectrum partial_;
};

/// -(sum|c_j| + 4 m + 4 m^2 + 10) with m the largest |a_ij| the kind reads.
double default_lambda_floor(const ProblemSpec& spec);

/// First `count` real eigenvalues, located by sign changes of the
/// characteristic determinant and refined by bisection.
Spectrum enumerate_eigenvalues(const ProblemSpec& spec, int count,
                               const SpectrumOptions& opts = {});

struct AsymptoticReport {
  std::vector<int> indices;         // nearest k with sqrt(lambda) ~ k pi
  std::vector<double> deviations;   // sqrt(lambda) - k pi
  std::vector<double> scaled;       // k * deviation
  double predicted_limit = 0.0;     // max |k d| expected from the leading terms
  double bound = 0.0;
  bool bounded = false;
};

/// Checks that the tail of a spectrum sits at kpi + O(1/k) in frequency.
/// `bm` supplies the constants the spectrum's kind reads.
AsymptoticReport verify_spectrum_asymptotics(const Spectrum& sp, double u1,
                                             const BoundaryMatrix& bm);

std::string describe_audit(const Spectrum& sp);

}  // namespace slinv
