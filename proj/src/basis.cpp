#include <cmath>
#include <numbers>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "slinv/charfn.hpp"
#include "slinv/inverse.hpp"

namespace slinv {

namespace {
constexpr double kMaxCondition = 1e10;

Eigen::Matrix<double, 1, 5> basis_row(double s) {
  Eigen::Matrix<double, 1, 5> row;
  row << 1.0, std::cos(s), std::sin(s), s * std::sin(s), std::cos(2.0 * s);
  return row;
}
}  // namespace

double BasisCoefficients::evaluate(double s) const {
  Eigen::Matrix<double, 5, 1> c;
  c << c_const, c_cos, c_sin, c_s_sin, c_cos2;
  return basis_row(s) * c;
}

BasisCoefficients basis_decompose(std::span<const BasisSample> samples) {
  if (samples.size() < kMinBasisSamples)
    throw ContractError("basis_decompose: need at least 25 samples");
  double s_lo = samples[0].s, s_hi = samples[0].s;
  for (const auto& sample : samples) {
    if (!std::isfinite(sample.s) || !std::isfinite(sample.value))
      throw ContractError("basis_decompose: non-finite sample");
    s_lo = std::min(s_lo, sample.s);
    s_hi = std::max(s_hi, sample.s);
  }
  if (s_lo < kMinBasisFrequency)
    throw ContractError("basis_decompose: samples must satisfy s >= 20");
  if (s_hi - s_lo < 10.0 * std::numbers::pi)
    throw ConditioningError("basis_decompose: samples span less than 10 pi");

  const auto m = static_cast<Eigen::Index>(samples.size());
  Eigen::MatrixXd design(m, 5);
  Eigen::VectorXd rhs(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto& sample = samples[static_cast<std::size_t>(i)];
    design.row(i) = basis_row(sample.s);
    rhs[i] = sample.value;
  }

  // Conditioning is judged on unit-norm columns so the growth of s sin s
  // does not count against the design.
  const Eigen::VectorXd norms = design.colwise().norm().transpose();
  if ((norms.array() == 0.0).any())
    throw ConditioningError("basis_decompose: a basis column vanishes on the samples");
  const Eigen::MatrixXd scaled = design * norms.cwiseInverse().asDiagonal();
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(scaled);
  const auto& sv = svd.singularValues();
  const double condition = sv[0] / sv[sv.size() - 1];
  if (!(condition < kMaxCondition))
    throw ConditioningError("basis_decompose: design matrix is ill-conditioned (condition " +
                            std::to_string(condition) + ")");

  const Eigen::VectorXd c = design.colPivHouseholderQr().solve(rhs);
  BasisCoefficients out;
  out.c_const = c[0];
  out.c_cos = c[1];
  out.c_sin = c[2];
  out.c_s_sin = c[3];
  out.c_cos2 = c[4];
  out.residual_norm = (design * c - rhs).norm();
  return out;
}

std::vector<BasisSample> sample_full_determinant(const ProblemSpec& spec, double s_min,
                                                 double s_max, int samples, int steps) {
  if (samples < 2) throw ContractError("sample_full_determinant: need at least 2 samples");
  if (!(s_max > s_min)) throw ContractError("sample_full_determinant: s_max must exceed s_min");
  const ProblemSpec full = spec.with_kind(ProblemKind::FullL);
  const Propagator propagate(full.potential, steps);
  std::vector<BasisSample> out;
  out.reserve(static_cast<std::size_t>(samples));
  for (int i = 0; i < samples; ++i) {
    const double s = s_min + (s_max - s_min) * i / (samples - 1);
    out.push_back({s, sample_determinant(full, propagate, s * s).value});
  }
  return out;
}

BasisPrediction predicted_basis_coefficients(const BoundaryMatrix& bm, double u1) {
  return {bm.a12 - bm.a21, bm.a11 - bm.a22 - u1, 1.0};
}

}  // namespace slinv
