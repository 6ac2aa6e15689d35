#pragma once

#include <span>
#include <string>
#include <vector>

#include "slinv/errors.hpp"
#include "slinv/potential.hpp"
#include "slinv/problem.hpp"
#include "slinv/spectrum.hpp"

namespace slinv {

struct InverseOptions {
  /// Options for every forward spectrum evaluation inside the optimizers.
  SpectrumOptions spectrum{};
  /// Weight of the smoothness penalty rho * sum_{j>=1} j^2 c_j^2.
  double ridge = 1e-10;
  /// |a12 - a22| below this is treated as the excluded case a12 = a22.
  double degeneracy_epsilon = 1e-6;
  /// Relative finite-difference step for Jacobians.
  double fd_step = 1e-6;
  int max_iterations = 40;
  /// A result is reported converged when its misfit is at most this.
  double convergence_threshold = 1e-10;
};

inline const std::string kDegeneracyWarning =
    "degenerate boundary data: a12 = a22, so L1 and L2 coincide and the "
    "hypothesis a12 != a22 of the three-spectra uniqueness result fails";

/// Output of the two-spectra stage. beta1 and beta2 are the right-endpoint
/// constants of L1 and L2, i.e. estimates of a22 and a12.
struct BorgResult {
  Potential potential_hat;
  double a11 = 0.0;
  double beta1 = 0.0;
  double beta2 = 0.0;
  double misfit = 0.0;
  int iterations = 0;
  bool converged = false;
  bool degenerate = false;
  std::vector<std::string> warnings;
};

/// Recovers q (cosine coefficients c_0..c_basis_size), a11, a22 and a12 from
/// the spectra of L1 and L2 by damped least squares on the eigenvalues.
BorgResult borg_reconstruct(const Spectrum& sp1, const Spectrum& sp2, int basis_size,
                            const InverseOptions& opts = {});

/// One-dimensional fit of a21 to the spectrum of L with everything else fixed.
double recover_a21(const Spectrum& spL, const Potential& potential_hat, double a11,
                   double a12, double a22, const InverseOptions& opts = {});

struct ReconstructionTarget {
  Spectrum spectrum_l;
  Spectrum spectrum_l1;
  Spectrum spectrum_l2;

  /// Common truncation length; throws ContractError if the three differ.
  int truncation() const;
};

struct ReconstructionResult {
  Potential potential_hat;
  BoundaryMatrix boundary_hat;
  double misfit = 0.0;  // sum of squared eigenvalue residuals over all three spectra
  int iterations = 0;
  bool converged = false;
  bool degenerate = false;
  std::vector<std::string> warnings;
};

/// Sum of squared eigenvalue residuals of a candidate against the target.
/// Infinite when a forward spectrum cannot be computed.
double reconstruction_misfit(const ReconstructionTarget& target, const Potential& potential,
                             const BoundaryMatrix& boundary,
                             const SpectrumOptions& opts = {});

/// Polishes all parameters against all three spectra. The returned misfit is
/// never larger than the misfit of the initial guess.
ReconstructionResult joint_refine(const ReconstructionTarget& target,
                                  const Potential& init_potential,
                                  const BoundaryMatrix& init_boundary,
                                  const InverseOptions& opts = {});

/// borg_reconstruct, then recover_a21, then joint_refine.
ReconstructionResult reconstruct(const ReconstructionTarget& target, int basis_size,
                                 const InverseOptions& opts = {});

// Basis decomposition ------------------------------------------------------

struct BasisSample {
  double s = 0.0;
  double value = 0.0;
};

/// Least-squares coefficients on {1, cos s, sin s, s sin s, cos 2s}.
struct BasisCoefficients {
  double c_const = 0.0;
  double c_cos = 0.0;
  double c_sin = 0.0;
  double c_s_sin = 0.0;
  double c_cos2 = 0.0;
  double residual_norm = 0.0;

  double evaluate(double s) const;
};

inline constexpr std::size_t kMinBasisSamples = 25;
inline constexpr double kMinBasisFrequency = 20.0;

/// Projects samples onto the basis. Needs at least 25 samples with s >= 20;
/// samples spanning less than 10 pi or an ill-conditioned design raise
/// ConditioningError.
BasisCoefficients basis_decompose(std::span<const BasisSample> samples);

/// Uniform samples of the full determinant at lambda = s^2, s in [s_min, s_max].
std::vector<BasisSample> sample_full_determinant(const ProblemSpec& spec, double s_min,
                                                 double s_max, int samples,
                                                 int steps = kDefaultSteps);

/// Constant and cos s coefficients of the full determinant predicted by its
/// large-s expansion: c_const = a12 - a21, c_cos = a11 - a22 - u(1).
struct BasisPrediction {
  double c_const = 0.0;
  double c_cos = 0.0;
  double c_s_sin = 1.0;
};

BasisPrediction predicted_basis_coefficients(const BoundaryMatrix& bm, double u1);

}  // namespace slinv
