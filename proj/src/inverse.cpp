#include "slinv/inverse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>

#include "slinv/levenberg_marquardt.hpp"

namespace slinv {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

Eigen::VectorXd to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

void check_spectrum(const Spectrum& sp, const char* what) {
  for (std::size_t i = 0; i < sp.count(); ++i) {
    if (!std::isfinite(sp.eigenvalues[i]))
      throw ContractError(std::string(what) + ": eigenvalues must be finite");
    if (i > 0 && !(sp.eigenvalues[i] > sp.eigenvalues[i - 1]))
      throw ContractError(std::string(what) + ": eigenvalues must be strictly ascending");
  }
}

/// Forward eigenvalues, or nullopt when the real scan cannot deliver `count`.
std::optional<Eigen::VectorXd> forward_eigenvalues(const ProblemSpec& spec, int count,
                                                   const SpectrumOptions& opts) {
  try {
    const Spectrum sp = enumerate_eigenvalues(spec, count, opts);
    return to_vector(sp.eigenvalues);
  } catch (const AuditError&) {
    return std::nullopt;
  } catch (const NumericOverflowError&) {
    return std::nullopt;
  }
}

// Mean offset of lambda_k - (k pi)^2 over the upper half of a spectrum,
// with k taken as the nearest multiple of pi in frequency.
double tail_offset(const Spectrum& sp, bool alternate) {
  const std::size_t n = sp.count();
  double sum = 0.0;
  int used = 0;
  for (std::size_t i = n / 2; i < n; ++i) {
    const double lambda = sp.eigenvalues[i];
    if (lambda <= 0.0) continue;
    const long k = std::lround(std::sqrt(lambda) / kPi);
    const double offset = lambda - static_cast<double>(k * k) * kPi * kPi;
    sum += alternate && (k % 2) ? -offset : offset;
    ++used;
  }
  return used ? sum / used : 0.0;
}

bool spectra_coincide(const Spectrum& a, const Spectrum& b) {
  if (a.count() != b.count()) return false;
  for (std::size_t i = 0; i < a.count(); ++i) {
    const double scale = std::max(1.0, std::abs(a.eigenvalues[i]));
    if (std::abs(a.eigenvalues[i] - b.eigenvalues[i]) > 1e-12 * scale) return false;
  }
  return true;
}

Potential potential_from(const Eigen::VectorXd& x, int basis_size) {
  return Potential(x.head(basis_size + 1));
}

// sqrt(rho) * j * c_j for j >= 1.
void append_ridge(Eigen::VectorXd& r, Eigen::Index offset, const Eigen::VectorXd& x,
                  int basis_size, double ridge) {
  const double w = std::sqrt(ridge);
  for (int j = 1; j <= basis_size; ++j) r[offset + j - 1] = w * j * x[j];
}

}  // namespace

int ReconstructionTarget::truncation() const {
  const auto n = spectrum_l.count();
  if (spectrum_l1.count() != n || spectrum_l2.count() != n)
    throw ContractError("reconstruction target: the three spectra must have equal length");
  return static_cast<int>(n);
}

BorgResult borg_reconstruct(const Spectrum& sp1, const Spectrum& sp2, int basis_size,
                            const InverseOptions& opts) {
  if (basis_size < 0) throw ContractError("borg_reconstruct: basis_size must be >= 0");
  if (sp1.count() != sp2.count())
    throw ContractError("borg_reconstruct: spectra must have equal length");
  const int n = static_cast<int>(sp1.count());
  if (n < basis_size + 3)
    throw ContractError("borg_reconstruct: need N >= basis_size + 3 eigenvalues");
  check_spectrum(sp1, "borg_reconstruct");
  check_spectrum(sp2, "borg_reconstruct");

  BorgResult out;
  // Identical spectra are one problem's data twice: the two-spectra argument
  // has nothing to work with.
  if (spectra_coincide(sp1, sp2)) {
    out.degenerate = true;
    out.warnings.push_back(kDegeneracyWarning);
    out.potential_hat = Potential(Eigen::VectorXd::Zero(basis_size + 1));
    out.misfit = kInf;
    return out;
  }

  // Parameters: c_0..c_b, a11, beta1, beta2.
  const int np = basis_size + 4;
  const Eigen::VectorXd data1 = to_vector(sp1.eigenvalues);
  const Eigen::VectorXd data2 = to_vector(sp2.eigenvalues);

  auto unpack = [&](const Eigen::VectorXd& x, ProblemKind kind) {
    const double a11 = x[basis_size + 1], b1 = x[basis_size + 2], b2 = x[basis_size + 3];
    // L1 reads (a11, a22), L2 reads (a11, a12).
    return ProblemSpec{potential_from(x, basis_size), BoundaryMatrix(a11, b2, 0.0, b1), kind};
  };

  const ResidualFn residuals = [&](const Eigen::VectorXd& x) -> std::optional<Eigen::VectorXd> {
    const auto l1 = forward_eigenvalues(unpack(x, ProblemKind::DecomposedL1), n, opts.spectrum);
    if (!l1) return std::nullopt;
    const auto l2 = forward_eigenvalues(unpack(x, ProblemKind::DecomposedL2), n, opts.spectrum);
    if (!l2) return std::nullopt;
    Eigen::VectorXd r(2 * n + basis_size);
    r.head(n) = *l1 - data1;
    r.segment(n, n) = *l2 - data2;
    append_ridge(r, 2 * n, x, basis_size, opts.ridge);
    return r;
  };

  // Start: q = c0 flat, a11 = 0, and the tail offsets c0 + 2 (beta - a11)
  // split evenly between c0 and the two betas.
  const double w1 = tail_offset(sp1, false), w2 = tail_offset(sp2, false);
  Eigen::VectorXd x0 = Eigen::VectorXd::Zero(np);
  x0[0] = 0.5 * (w1 + w2) / 2.0;
  x0[basis_size + 2] = (w1 - x0[0]) / 2.0;
  x0[basis_size + 3] = (w2 - x0[0]) / 2.0;

  LmOptions lm;
  lm.max_iterations = opts.max_iterations;
  lm.fd_step = opts.fd_step;
  lm.cost_tolerance = 1e-3 * opts.convergence_threshold;
  const LmResult fit = levenberg_marquardt(residuals, x0, lm);

  out.potential_hat = potential_from(fit.x, basis_size);
  out.a11 = fit.x[basis_size + 1];
  out.beta1 = fit.x[basis_size + 2];
  out.beta2 = fit.x[basis_size + 3];
  out.iterations = fit.iterations;
  if (const auto r = residuals(fit.x)) {
    out.misfit = r->head(2 * n).squaredNorm();
  } else {
    out.misfit = kInf;
  }
  out.converged = out.misfit <= opts.convergence_threshold;
  if (std::abs(out.beta1 - out.beta2) < opts.degeneracy_epsilon) {
    out.degenerate = true;
    out.converged = false;
    out.warnings.push_back(kDegeneracyWarning);
  }
  if (!out.converged && !out.degenerate) {
    std::ostringstream os;
    os << "two-spectra fit did not converge: misfit " << out.misfit << " after "
       << out.iterations << " iterations";
    out.warnings.push_back(os.str());
  }
  return out;
}

double recover_a21(const Spectrum& spL, const Potential& potential_hat, double a11,
                   double a12, double a22, const InverseOptions& opts) {
  const int n = static_cast<int>(spL.count());
  if (n < 3) throw ContractError("recover_a21: need at least 3 eigenvalues");
  check_spectrum(spL, "recover_a21");
  const Eigen::VectorXd data = to_vector(spL.eigenvalues);

  auto objective = [&](double a21) {
    const ProblemSpec spec{potential_hat, BoundaryMatrix(a11, a12, a21, a22), ProblemKind::FullL};
    const auto lam = forward_eigenvalues(spec, n, opts.spectrum);
    return lam ? (*lam - data).squaredNorm() : kInf;
  };

  // lambda_k - (k pi)^2 -> -2 (A + (-1)^k B) with B = a12 - a21, so the
  // alternating part of the tail offsets estimates a21.
  const double b_hat = -0.5 * tail_offset(spL, true);
  const double center = a12 - b_hat;

  struct Point {
    double x, f;
  };
  std::ostringstream trace;
  trace.precision(10);

  // Sample the bracket; accept it if the samples are unimodal with an
  // interior minimum.
  auto scan = [&](double half_width) -> std::optional<std::pair<Point, Point>> {
    constexpr int kSamples = 11;
    std::vector<Point> pts;
    for (int i = 0; i < kSamples; ++i) {
      const double x = center - half_width + 2.0 * half_width * i / (kSamples - 1);
      pts.push_back({x, objective(x)});
      trace << " (" << x << ", " << pts.back().f << ")";
    }
    const auto best = std::min_element(pts.begin(), pts.end(),
                                       [](const Point& a, const Point& b) { return a.f < b.f; });
    const auto m = static_cast<std::size_t>(best - pts.begin());
    if (m == 0 || m + 1 == pts.size() || !std::isfinite(best->f)) return std::nullopt;
    for (std::size_t i = 1; i <= m; ++i)
      if (!(pts[i].f <= pts[i - 1].f)) return std::nullopt;
    for (std::size_t i = m + 1; i < pts.size(); ++i)
      if (!(pts[i].f >= pts[i - 1].f)) return std::nullopt;
    return std::make_pair(pts[m - 1], pts[m + 1]);
  };

  auto bracket = scan(1.0);
  if (!bracket) bracket = scan(4.0);
  if (!bracket)
    throw Error("recover_a21: misfit is not unimodal around a21 = " + std::to_string(center) +
                "; scan:" + trace.str());

  // Golden-section search.
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = bracket->first.x, hi = bracket->second.x;
  double x1 = hi - inv_phi * (hi - lo), x2 = lo + inv_phi * (hi - lo);
  double f1 = objective(x1), f2 = objective(x2);
  while (hi - lo > 1e-9 * (1.0 + std::abs(center))) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = objective(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = objective(x2);
    }
  }

  // Parabola through three points straddling the minimum.
  const double mid = f1 <= f2 ? x1 : x2;
  const double fm = std::min(f1, f2);
  const double h = std::max(hi - lo, 1e-7 * (1.0 + std::abs(mid)));
  const double fl = objective(mid - h), fr = objective(mid + h);
  const double curvature = fl - 2.0 * fm + fr;
  if (curvature > 0.0 && std::isfinite(curvature)) {
    const double x = mid + 0.5 * h * (fl - fr) / curvature;
    if (std::abs(x - mid) <= h && objective(x) <= fm) return x;
  }
  return mid;
}

double reconstruction_misfit(const ReconstructionTarget& target, const Potential& potential,
                             const BoundaryMatrix& boundary, const SpectrumOptions& opts) {
  const int n = target.truncation();
  double total = 0.0;
  const std::pair<ProblemKind, const Spectrum*> parts[] = {
      {ProblemKind::FullL, &target.spectrum_l},
      {ProblemKind::DecomposedL1, &target.spectrum_l1},
      {ProblemKind::DecomposedL2, &target.spectrum_l2}};
  for (const auto& [kind, sp] : parts) {
    const auto lam = forward_eigenvalues({potential, boundary, kind}, n, opts);
    if (!lam) return kInf;
    total += (*lam - to_vector(sp->eigenvalues)).squaredNorm();
  }
  return total;
}

ReconstructionResult joint_refine(const ReconstructionTarget& target,
                                  const Potential& init_potential,
                                  const BoundaryMatrix& init_boundary,
                                  const InverseOptions& opts) {
  const int n = target.truncation();
  check_spectrum(target.spectrum_l, "joint_refine");
  check_spectrum(target.spectrum_l1, "joint_refine");
  check_spectrum(target.spectrum_l2, "joint_refine");
  const int basis_size = static_cast<int>(init_potential.size()) - 1;
  const Eigen::VectorXd data_l = to_vector(target.spectrum_l.eigenvalues);
  const Eigen::VectorXd data_1 = to_vector(target.spectrum_l1.eigenvalues);
  const Eigen::VectorXd data_2 = to_vector(target.spectrum_l2.eigenvalues);

  // Parameters: c_0..c_b, a11, a12, a21, a22.
  auto unpack_boundary = [&](const Eigen::VectorXd& x) {
    return BoundaryMatrix(x[basis_size + 1], x[basis_size + 2], x[basis_size + 3],
                          x[basis_size + 4]);
  };

  const ResidualFn residuals = [&](const Eigen::VectorXd& x) -> std::optional<Eigen::VectorXd> {
    const Potential p = potential_from(x, basis_size);
    const BoundaryMatrix bm = unpack_boundary(x);
    Eigen::VectorXd r(3 * n + basis_size);
    const std::pair<ProblemKind, const Eigen::VectorXd*> parts[] = {
        {ProblemKind::FullL, &data_l},
        {ProblemKind::DecomposedL1, &data_1},
        {ProblemKind::DecomposedL2, &data_2}};
    Eigen::Index offset = 0;
    for (const auto& [kind, data] : parts) {
      const auto lam = forward_eigenvalues({p, bm, kind}, n, opts.spectrum);
      if (!lam) return std::nullopt;
      r.segment(offset, n) = *lam - *data;
      offset += n;
    }
    append_ridge(r, offset, x, basis_size, opts.ridge);
    return r;
  };

  Eigen::VectorXd x0(basis_size + 5);
  x0.head(basis_size + 1) = init_potential.coefficients();
  x0.tail(4) << init_boundary.a11, init_boundary.a12, init_boundary.a21, init_boundary.a22;

  const double initial_misfit =
      reconstruction_misfit(target, init_potential, init_boundary, opts.spectrum);

  LmOptions lm;
  lm.max_iterations = opts.max_iterations;
  lm.fd_step = opts.fd_step;
  lm.cost_tolerance = 1e-3 * opts.convergence_threshold;
  lm.data_rows = 3 * n;
  const LmResult fit = levenberg_marquardt(residuals, x0, lm);

  ReconstructionResult out;
  out.potential_hat = potential_from(fit.x, basis_size);
  out.boundary_hat = unpack_boundary(fit.x);
  out.iterations = fit.iterations;
  out.misfit = reconstruction_misfit(target, out.potential_hat, out.boundary_hat, opts.spectrum);
  // The penalty can trade a little data misfit for smoothness; never hand
  // back something worse than the starting point.
  if (!(out.misfit <= initial_misfit)) {
    out.potential_hat = init_potential;
    out.boundary_hat = init_boundary;
    out.misfit = initial_misfit;
  }
  out.converged = out.misfit <= opts.convergence_threshold;
  if (std::abs(out.boundary_hat.a12 - out.boundary_hat.a22) < opts.degeneracy_epsilon) {
    out.degenerate = true;
    out.converged = false;
    out.warnings.push_back(kDegeneracyWarning);
  }
  if (!out.converged && !out.degenerate) {
    std::ostringstream os;
    os << "joint refinement did not converge: misfit " << out.misfit << " after "
       << out.iterations << " iterations";
    out.warnings.push_back(os.str());
  }
  return out;
}

ReconstructionResult reconstruct(const ReconstructionTarget& target, int basis_size,
                                 const InverseOptions& opts) {
  const int n = target.truncation();
  if (n < basis_size + 3)
    throw ContractError("reconstruct: need N >= basis_size + 3 eigenvalues");

  const BorgResult borg =
      borg_reconstruct(target.spectrum_l1, target.spectrum_l2, basis_size, opts);
  if (borg.degenerate) {
    ReconstructionResult out;
    out.potential_hat = borg.potential_hat;
    out.boundary_hat = BoundaryMatrix(borg.a11, borg.beta2, 0.0, borg.beta1);
    out.misfit = kInf;
    out.iterations = borg.iterations;
    out.degenerate = true;
    out.warnings = borg.warnings;
    return out;
  }

  const double a21 =
      recover_a21(target.spectrum_l, borg.potential_hat, borg.a11, borg.beta2, borg.beta1, opts);
  const BoundaryMatrix staged(borg.a11, borg.beta2, a21, borg.beta1);
  ReconstructionResult out = joint_refine(target, borg.potential_hat, staged, opts);
  out.iterations += borg.iterations;
  if (!borg.converged && out.converged == false) {
    out.warnings.insert(out.warnings.begin(), borg.warnings.begin(), borg.warnings.end());
  }
  return out;
}

}  // namespace slinv
