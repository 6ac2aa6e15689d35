#include "slinv/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "slinv/charfn.hpp"

namespace slinv {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kMaxBisections = 200;

struct Sample {
  double lambda;
  double value;
};

class DeterminantFn {
 public:
  DeterminantFn(const ProblemSpec& spec, int steps)
      : spec_(spec), propagate_(spec.potential, steps) {}

  double operator()(double lambda) const {
    return sample_determinant(spec_, propagate_, lambda).value;
  }

 private:
  const ProblemSpec& spec_;
  Propagator propagate_;
};

bool opposite_signs(double a, double b) { return (a < 0.0) != (b < 0.0); }

// Bisection in s (lambda = s^2) or in lambda, followed by one secant step
// inside the final bracket. The secant step keeps the estimate inside the
// tolerance window but makes it vary smoothly with the problem data.
double refine_root(const DeterminantFn& det, Sample a, Sample b, double tol) {
  const bool in_frequency = a.lambda >= 0.0;
  auto to_var = [&](double lambda) { return in_frequency ? std::sqrt(lambda) : lambda; };
  auto to_lambda = [&](double v) { return in_frequency ? v * v : v; };

  double lo = to_var(a.lambda), hi = to_var(b.lambda);
  double f_lo = a.value, f_hi = b.value;
  for (int it = 0; it < kMaxBisections && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double f_mid = det(to_lambda(mid));
    if (f_mid == 0.0) return to_lambda(mid);
    if (opposite_signs(f_lo, f_mid)) {
      hi = mid;
      f_hi = f_mid;
    } else {
      lo = mid;
      f_lo = f_mid;
    }
  }
  double root = lo - f_lo * (hi - lo) / (f_hi - f_lo);
  if (!(root >= lo && root <= hi)) root = 0.5 * (lo + hi);
  return to_lambda(root);
}

}  // namespace

double default_lambda_floor(const ProblemSpec& spec) {
  // Only the constants the kind reads, so that decomposed spectra do not
  // depend on a21 (or on the other problem's right constant) at all.
  const auto& bm = spec.boundary;
  double m = 0.0;
  switch (spec.kind) {
    case ProblemKind::FullL: m = bm.max_abs(); break;
    case ProblemKind::DecomposedL1:
    case ProblemKind::DecomposedL2:
      m = std::max(std::abs(bm.a11), std::abs(spec.right_constant()));
      break;
  }
  return -(spec.potential.sup_bound() + 4.0 * m + 4.0 * m * m + 10.0);
}

Spectrum enumerate_eigenvalues(const ProblemSpec& spec, int count,
                               const SpectrumOptions& opts) {
  if (count < 1) throw ContractError("enumerate_eigenvalues: count must be >= 1");
  if (opts.scan_points_per_pi < 8)
    throw ContractError("enumerate_eigenvalues: scan_points_per_pi must be >= 8");
  if (!(opts.root_tolerance > 0.0))
    throw ContractError("enumerate_eigenvalues: root_tolerance must be > 0");

  const DeterminantFn det(spec, opts.steps);
  const double floor = opts.lambda_floor.value_or(default_lambda_floor(spec));
  const double ds = kPi / opts.scan_points_per_pi;
  const double s_ceiling = (count + 0.5) * kPi;

  // Scan grid: below zero uniform in mu = sqrt(-lambda), above zero uniform in s.
  std::vector<double> grid;
  if (floor < 0.0) {
    const double mu_max = std::sqrt(-floor);
    const int n_neg = std::max(1, static_cast<int>(std::ceil(mu_max / ds)));
    for (int i = 0; i < n_neg; ++i) {
      const double mu = mu_max * static_cast<double>(n_neg - i) / n_neg;
      grid.push_back(-mu * mu);
    }
  }
  const int n_pos = static_cast<int>(std::ceil(s_ceiling / ds));
  for (int i = 0; i <= n_pos; ++i) {
    const double s = i * ds;
    if (s * s >= floor) grid.push_back(s * s);
  }

  std::vector<double> roots;
  std::optional<Sample> prev;
  for (double lambda : grid) {
    const Sample cur{lambda, det(lambda)};
    if (cur.value == 0.0) {
      roots.push_back(lambda);
    } else if (prev && prev->value != 0.0 && opposite_signs(prev->value, cur.value)) {
      roots.push_back(refine_root(det, *prev, cur, opts.root_tolerance));
    }
    prev = cur;
  }

  Spectrum out;
  out.kind = spec.kind;
  out.root_tolerance = opts.root_tolerance;

  // Rouche: inside |s| < (n + 1/2) pi the determinant has n + 1 zeros in lambda,
  // as s sin s does. Fewer real roots means some are missing from the real scan.
  const std::size_t expected = static_cast<std::size_t>(count) + 1;
  if (roots.size() < expected) {
    out.audit = AuditStatus::SuspectMissing;
    for (int k = 1; k <= count; ++k) {
      const double lo = (k - 0.5) * kPi, hi = (k + 0.5) * kPi;
      const bool hit = std::any_of(roots.begin(), roots.end(), [&](double r) {
        return r > 0.0 && std::sqrt(r) > lo && std::sqrt(r) <= hi;
      });
      if (!hit) out.suspect_intervals.push_back({lo * lo, hi * hi});
    }
    if (out.suspect_intervals.empty())
      out.suspect_intervals.push_back({floor, 0.25 * kPi * kPi});
  }

  const std::size_t take = std::min(roots.size(), static_cast<std::size_t>(count));
  out.eigenvalues.assign(roots.begin(), roots.begin() + static_cast<std::ptrdiff_t>(take));
  if (take < static_cast<std::size_t>(count) && !out.complete()) {
    throw AuditError("enumerate_eigenvalues: found " + std::to_string(take) + " of " +
                         std::to_string(count) + " eigenvalues; " + describe_audit(out),
                     out);
  }
  return out;
}

AsymptoticReport verify_spectrum_asymptotics(const Spectrum& sp, double u1,
                                             const BoundaryMatrix& bm) {
  if (sp.count() < 5)
    throw ContractError("verify_spectrum_asymptotics: need at least 5 eigenvalues");

  double a = 0.0, b = 0.0;
  switch (sp.kind) {
    case ProblemKind::FullL:
      a = bm.a11 - bm.a22 - u1;
      b = bm.a12 - bm.a21;
      break;
    case ProblemKind::DecomposedL1: a = bm.a11 - bm.a22 - u1; break;
    case ProblemKind::DecomposedL2: a = bm.a11 - bm.a12 - u1; break;
  }

  const std::size_t window = std::max<std::size_t>(5, (sp.count() + 1) / 2);
  const std::size_t first = sp.count() - std::min(window, sp.count());

  AsymptoticReport report;
  // Near s = k pi, s sin s + A cos s + B = 0 gives k d -> -(A + (-1)^k B) / pi.
  report.predicted_limit = (std::abs(a) + std::abs(b)) / kPi;
  report.bound = 1.25 * report.predicted_limit + 0.5;
  report.bounded = true;
  for (std::size_t i = first; i < sp.count(); ++i) {
    const double lambda = sp.eigenvalues[i];
    if (lambda < 0.0)
      throw ContractError("verify_spectrum_asymptotics: negative eigenvalue in tail window");
    const double s = std::sqrt(lambda);
    const int k = static_cast<int>(std::lround(s / kPi));
    const double d = s - k * kPi;
    report.indices.push_back(k);
    report.deviations.push_back(d);
    report.scaled.push_back(k * d);
    if (std::abs(k * d) > report.bound) report.bounded = false;
  }
  return report;
}

std::string describe_audit(const Spectrum& sp) {
  if (sp.complete()) return "Complete";
  std::ostringstream os;
  os.precision(17);
  os << "SuspectMissing";
  for (const auto& iv : sp.suspect_intervals) os << " [" << iv.lo << ", " << iv.hi << "]";
  return os.str();
}

}  // namespace slinv
