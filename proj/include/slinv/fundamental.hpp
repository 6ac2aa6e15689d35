#pragma once

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "slinv/errors.hpp"
#include "slinv/potential.hpp"

namespace slinv {

inline constexpr int kDefaultSteps = 2048;
inline constexpr int kMinSteps = 16;

/// Endpoint values y1(1), y1'(1), y2(1), y2'(1) of the fundamental system
/// with y1(0)=1, y1'(0)=0, y2(0)=0, y2'(0)=1.
template <typename Scalar>
struct BasicFundamentalAtOne {
  Scalar lambda{};
  Scalar y1{};
  Scalar dy1{};
  Scalar y2{};
  Scalar dy2{};

  /// y1 y2' - y1' y2; identically 1 for the exact solution.
  Scalar wronskian() const { return y1 * dy2 - dy1 * y2; }
};

using FundamentalAtOne = BasicFundamentalAtOne<double>;

/// Fixed-step classical RK4 propagation of -y'' + q y = lambda y over [0,1].
///
/// The potential is sampled once on the node and midpoint grid, so repeated
/// evaluations at different lambda (root scans, bisection) only pay for the
/// stepping itself.
template <typename Scalar>
class BasicPropagator {
 public:
  using Mat2 = Eigen::Matrix<Scalar, 2, 2>;

  BasicPropagator(const BasicPotential<Scalar>& potential, int steps = kDefaultSteps)
      : steps_(steps) {
    if (steps < kMinSteps)
      throw ContractError("integrate_fundamental: steps must be >= " +
                          std::to_string(kMinSteps));
    const auto& c = potential.coefficients();
    const Scalar h = Scalar(1) / Scalar(steps);
    q_node_.resize(static_cast<std::size_t>(steps) + 1);
    q_mid_.resize(static_cast<std::size_t>(steps));
    for (int i = 0; i <= steps; ++i) {
      // The last node is pinned to 1 so that the grid covers [0,1] exactly.
      const Scalar x = i == steps ? Scalar(1) : Scalar(i) * h;
      q_node_[static_cast<std::size_t>(i)] = detail::series_cos(c, x);
      if (i < steps)
        q_mid_[static_cast<std::size_t>(i)] =
            detail::series_cos(c, (Scalar(i) + Scalar(0.5)) * h);
    }
  }

  int steps() const noexcept { return steps_; }

  BasicFundamentalAtOne<Scalar> operator()(Scalar lambda) const {
    const Scalar h = Scalar(1) / Scalar(steps_);
    const Scalar half = h / Scalar(2);
    // Columns are the two solutions, rows are (value, derivative).
    Mat2 y = Mat2::Identity();
    for (int i = 0; i < steps_; ++i) {
      const auto idx = static_cast<std::size_t>(i);
      const Scalar w0 = q_node_[idx] - lambda;
      const Scalar wm = q_mid_[idx] - lambda;
      const Scalar w1 = q_node_[idx + 1] - lambda;
      const Mat2 k1 = rhs(w0, y);
      const Mat2 k2 = rhs(wm, y + half * k1);
      const Mat2 k3 = rhs(wm, y + half * k2);
      const Mat2 k4 = rhs(w1, y + h * k3);
      y += (h / Scalar(6)) * (k1 + Scalar(2) * (k2 + k3) + k4);
    }
    if (!y.allFinite()) {
      throw NumericOverflowError(
          "integrate_fundamental: non-finite values at lambda = " +
              std::to_string(static_cast<double>(lambda)),
          static_cast<double>(lambda));
    }
    return {lambda, y(0, 0), y(1, 0), y(0, 1), y(1, 1)};
  }

 private:
  // d/dx (y, y') = (y', (q - lambda) y)
  static Mat2 rhs(Scalar w, const Mat2& y) {
    Mat2 d;
    d.row(0) = y.row(1);
    d.row(1) = w * y.row(0);
    return d;
  }

  int steps_;
  std::vector<Scalar> q_node_;
  std::vector<Scalar> q_mid_;
};

using Propagator = BasicPropagator<double>;

template <typename Scalar>
BasicFundamentalAtOne<Scalar> integrate_fundamental(const BasicPotential<Scalar>& p,
                                                    Scalar lambda,
                                                    int steps = kDefaultSteps) {
  return BasicPropagator<Scalar>(p, steps)(lambda);
}

/// Leading-order large-frequency model of the fundamental system at x=1,
/// written in the frequency s = sqrt(lambda) with u1 = u(1).
template <typename Scalar>
BasicFundamentalAtOne<Scalar> asymptotic_fundamental(Scalar u1, Scalar s) {
  using std::cos;
  using std::sin;
  if (!(s > Scalar(0))) throw DomainError("asymptotic_fundamental: s must be > 0");
  const Scalar c = cos(s);
  const Scalar sn = sin(s);
  BasicFundamentalAtOne<Scalar> f;
  f.lambda = s * s;
  f.y1 = c + (u1 / s) * sn;
  f.dy1 = -s * sn + u1 * c;
  f.y2 = sn / s - (u1 / (s * s)) * c;
  f.dy2 = c + (u1 / s) * sn;
  return f;
}

}  // namespace slinv
