#pragma once

#include <cmath>
#include <optional>

#include "slinv/errors.hpp"
#include "slinv/fundamental.hpp"
#include "slinv/problem.hpp"

namespace slinv {

/// Determinant of [U1(y1) U1(y2); U2(y1) U2(y2)] for the non-separated forms.
template <typename Scalar>
Scalar full_determinant(const BasicBoundaryMatrix<Scalar>& bm,
                        const BasicFundamentalAtOne<Scalar>& f) {
  const Scalar u1y1 = bm.a11 + bm.a12 * f.y1;
  const Scalar u1y2 = Scalar(1) + bm.a12 * f.y2;
  const Scalar u2y1 = f.dy1 + bm.a21 + bm.a22 * f.y1;
  const Scalar u2y2 = f.dy2 + bm.a22 * f.y2;
  return u1y1 * u2y2 - u1y2 * u2y1;
}

/// Determinant for y'(0) + a11 y(0) = 0, y'(1) + beta y(1) = 0.
template <typename Scalar>
Scalar decomposed_determinant(Scalar a11, Scalar beta,
                              const BasicFundamentalAtOne<Scalar>& f) {
  return a11 * (f.dy2 + beta * f.y2) - (f.dy1 + beta * f.y1);
}

inline double char_det_full(const ProblemSpec& spec, const FundamentalAtOne& f) {
  if (spec.kind != ProblemKind::FullL)
    throw ContractError("char_det_full: problem kind must be L");
  return full_determinant(spec.boundary, f);
}

inline double char_det_decomposed(const ProblemSpec& spec, const FundamentalAtOne& f) {
  if (spec.kind == ProblemKind::FullL)
    throw ContractError("char_det_decomposed: problem kind must be L1 or L2");
  return decomposed_determinant(spec.boundary.a11, spec.right_constant(), f);
}

/// Dispatches on the problem kind; entries the kind does not use are never read.
inline double characteristic_determinant(const ProblemSpec& spec,
                                         const FundamentalAtOne& f) {
  return spec.kind == ProblemKind::FullL ? char_det_full(spec, f)
                                         : char_det_decomposed(spec, f);
}

/// Leading terms of the full determinant for large real frequency s:
///   s sin s + (a11 - a22 - u1) cos s + (a12 - a21).
/// The remainder is O(1/s).
template <typename Scalar>
Scalar asymptotic_det(const BasicBoundaryMatrix<Scalar>& bm, Scalar u1, Scalar s) {
  using std::cos;
  using std::sin;
  if (!(s > Scalar(0))) throw DomainError("asymptotic_det: s must be > 0");
  return s * sin(s) + (bm.a11 - bm.a22 - u1) * cos(s) + (bm.a12 - bm.a21);
}

/// Leading terms of a decomposed determinant: s sin s + (a11 - beta - u1) cos s.
template <typename Scalar>
Scalar asymptotic_det_decomposed(Scalar a11, Scalar beta, Scalar u1, Scalar s) {
  using std::cos;
  using std::sin;
  if (!(s > Scalar(0))) throw DomainError("asymptotic_det_decomposed: s must be > 0");
  return s * sin(s) + (a11 - beta - u1) * cos(s);
}

/// One sample of a characteristic determinant. Negative-lambda samples carry
/// no frequency.
struct DetSample {
  std::optional<double> s;
  double lambda = 0.0;
  double value = 0.0;
};

inline DetSample sample_determinant(const ProblemSpec& spec, const Propagator& propagate,
                                    double lambda) {
  const double value = characteristic_determinant(spec, propagate(lambda));
  if (!std::isfinite(value))
    throw NumericOverflowError("characteristic determinant is not finite", lambda);
  DetSample out{std::nullopt, lambda, value};
  if (lambda >= 0.0) out.s = std::sqrt(lambda);
  return out;
}

}  // namespace slinv
