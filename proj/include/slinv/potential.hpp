#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include <Eigen/Core>

#include "slinv/errors.hpp"

namespace slinv {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Potential q(x) = sum_j c_j cos(j pi x) on [0,1].
///
/// The cosine series is C^1 for any finite coefficient list, and c_0 is the
/// mean of q. The same coefficients parameterize the inverse problem.
template <typename Scalar>
class BasicPotential {
 public:
  using Coefficients = VectorX<Scalar>;

  BasicPotential() : coefficients_(Coefficients::Zero(1)) {}

  explicit BasicPotential(Coefficients coefficients)
      : coefficients_(std::move(coefficients)) {
    if (coefficients_.size() == 0) coefficients_ = Coefficients::Zero(1);
    if (!coefficients_.allFinite())
      throw DomainError("potential coefficients must be finite");
  }

  BasicPotential(std::initializer_list<Scalar> coefficients)
      : BasicPotential(from_list(coefficients)) {}

  const Coefficients& coefficients() const noexcept { return coefficients_; }
  Eigen::Index size() const noexcept { return coefficients_.size(); }

  /// Bound on sup|q| (sum of absolute coefficients).
  Scalar sup_bound() const { return coefficients_.cwiseAbs().sum(); }

  bool operator==(const BasicPotential& other) const {
    return coefficients_.size() == other.coefficients_.size() &&
           coefficients_ == other.coefficients_;
  }

 private:
  static Coefficients from_list(std::initializer_list<Scalar> list) {
    Coefficients c(static_cast<Eigen::Index>(list.size()));
    Eigen::Index i = 0;
    for (Scalar v : list) c[i++] = v;
    return c;
  }

  Coefficients coefficients_;
};

using Potential = BasicPotential<double>;

namespace detail {
template <typename Scalar>
void check_unit_interval(Scalar x, const char* op) {
  if (!(x >= Scalar(0) && x <= Scalar(1)))
    throw DomainError(std::string(op) + ": x must lie in [0,1]");
}

template <typename Scalar>
Scalar series_cos(const VectorX<Scalar>& c, Scalar x) {
  using std::cos;
  const Scalar pi = std::numbers::pi_v<Scalar>;
  Scalar sum = c[0];
  for (Eigen::Index j = 1; j < c.size(); ++j)
    sum += c[j] * cos(Scalar(j) * pi * x);
  return sum;
}
}  // namespace detail

/// q(x), summed in ascending order of j.
template <typename Scalar>
Scalar evaluate_potential(const BasicPotential<Scalar>& p, Scalar x) {
  detail::check_unit_interval(x, "evaluate_potential");
  return detail::series_cos(p.coefficients(), x);
}

/// u(x) = 1/2 * integral_0^x q(t) dt, in closed form.
template <typename Scalar>
Scalar u_accumulated(const BasicPotential<Scalar>& p, Scalar x) {
  using std::sin;
  detail::check_unit_interval(x, "u_accumulated");
  const auto& c = p.coefficients();
  const Scalar pi = std::numbers::pi_v<Scalar>;
  Scalar integral = c[0] * x;
  // sin(j pi) vanishes exactly at the right endpoint
  if (x == Scalar(1)) return integral / Scalar(2);
  for (Eigen::Index j = 1; j < c.size(); ++j) {
    const Scalar w = Scalar(j) * pi;
    integral += c[j] * sin(w * x) / w;
  }
  return integral / Scalar(2);
}

}  // namespace slinv
