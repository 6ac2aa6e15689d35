#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "slinv/fundamental.hpp"
#include "slinv/potential.hpp"

using namespace slinv;

namespace {
constexpr double kPi = std::numbers::pi;

Potential random_potential(std::mt19937_64& rng, int terms, double amp) {
  std::uniform_real_distribution<double> coef(-amp, amp);
  Potential::Coefficients c(terms);
  for (int j = 0; j < terms; ++j) c[j] = coef(rng);
  return Potential(c);
}

// Closed-form endpoint values for q = 0: cos(sx), sin(sx)/s, with the
// hyperbolic continuation below zero.
FundamentalAtOne free_solution(double lambda) {
  FundamentalAtOne f;
  f.lambda = lambda;
  if (lambda > 0) {
    const double s = std::sqrt(lambda);
    f = {lambda, std::cos(s), -s * std::sin(s), std::sin(s) / s, std::cos(s)};
  } else if (lambda < 0) {
    const double m = std::sqrt(-lambda);
    f = {lambda, std::cosh(m), m * std::sinh(m), std::sinh(m) / m, std::cosh(m)};
  } else {
    f = {0.0, 1.0, 0.0, 1.0, 1.0};
  }
  return f;
}

double endpoint_error(const FundamentalAtOne& a, const FundamentalAtOne& b) {
  return std::max({std::abs(a.y1 - b.y1), std::abs(a.dy1 - b.dy1), std::abs(a.y2 - b.y2),
                   std::abs(a.dy2 - b.dy2)});
}
}  // namespace

TEST_CASE("evaluate_potential") {
  CHECK(evaluate_potential(Potential{0.0}, 0.5) == 0.0);
  CHECK(evaluate_potential(Potential{3.0}, 0.7) == 3.0);
  CHECK(evaluate_potential(Potential{0.0, 1.0}, 0.5) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(evaluate_potential(Potential{1.0, 2.0, -0.5}, 0.0) == 2.5);
  CHECK_THROWS_AS(evaluate_potential(Potential{1.0}, -0.1), DomainError);
  CHECK_THROWS_AS(evaluate_potential(Potential{1.0}, 1.0001), DomainError);
  CHECK_THROWS_AS(evaluate_potential(Potential{1.0}, std::nan("")), DomainError);
}

TEST_CASE("potential rejects non-finite coefficients") {
  CHECK_THROWS_AS(Potential({1.0, INFINITY}), DomainError);
  CHECK(Potential(Potential::Coefficients()).size() == 1);
}

TEST_CASE("u_accumulated") {
  CHECK(u_accumulated(Potential{0.0}, 1.0) == 0.0);
  CHECK(u_accumulated(Potential{2.0}, 1.0) == 1.0);
  CHECK(u_accumulated(Potential{0.0, 5.0}, 1.0) == 0.0);
  CHECK_THROWS_AS(u_accumulated(Potential{1.0}, 2.0), DomainError);

  // Against composite Simpson on q.
  const Potential p{0.3, -1.2, 0.8, 2.0};
  for (double x : {0.1, 0.37, 0.5, 0.93}) {
    const int n = 2000;
    const double h = x / n;
    double acc = evaluate_potential(p, 0.0) + evaluate_potential(p, x);
    for (int i = 1; i < n; ++i) acc += (i % 2 ? 4.0 : 2.0) * evaluate_potential(p, i * h);
    CHECK(u_accumulated(p, x) == doctest::Approx(0.5 * acc * h / 3.0).epsilon(1e-12));
  }
}

TEST_CASE("integrate_fundamental closed forms") {
  const Potential zero{0.0};
  {
    const auto f = integrate_fundamental(zero, kPi * kPi, 2048);
    CHECK(std::abs(f.y1 + 1.0) < 1e-8);
    CHECK(std::abs(f.dy2 + 1.0) < 1e-8);
    CHECK(std::abs(f.dy1) < 1e-8);
    CHECK(std::abs(f.y2) < 1e-8);
  }
  {
    const auto f = integrate_fundamental(zero, 0.0, 2048);
    CHECK(endpoint_error(f, free_solution(0.0)) < 1e-10);
  }
  {
    // -y'' + 4 y = 4 y is the q = 0, lambda = 0 problem.
    const auto shifted = integrate_fundamental(Potential{4.0}, 4.0, 2048);
    CHECK(endpoint_error(shifted, free_solution(0.0)) < 1e-8);
  }
  for (double lambda : {-30.0, -1.0, 2.0, 50.0, 300.0})
    CHECK(endpoint_error(integrate_fundamental(zero, lambda), free_solution(lambda)) < 1e-7);
}

TEST_CASE("integrate_fundamental errors") {
  CHECK_THROWS_AS(integrate_fundamental(Potential{0.0}, 1.0, 8), ContractError);
  try {
    integrate_fundamental(Potential{0.0}, -1e7, 2048);
    FAIL("expected overflow");
  } catch (const NumericOverflowError& e) {
    CHECK(e.lambda() == -1e7);
    CHECK(std::string(e.what()).find("lambda") != std::string::npos);
  }
}

TEST_CASE("integrate_fundamental is deterministic") {
  const Potential p{0.5, -1.0, 0.25};
  const auto a = integrate_fundamental(p, 37.5);
  const auto b = integrate_fundamental(p, 37.5);
  CHECK(a.y1 == b.y1);
  CHECK(a.dy1 == b.dy1);
  CHECK(a.y2 == b.y2);
  CHECK(a.dy2 == b.dy2);
}

TEST_CASE("Wronskian stays at one") {
  std::mt19937_64 rng(20261016);
  std::uniform_real_distribution<double> lam(-50.0, 400.0);
  for (int trial = 0; trial < 40; ++trial) {
    const Potential p = random_potential(rng, 1 + trial % 6, 5.0);
    const double lambda = lam(rng);
    const auto f = integrate_fundamental(p, lambda, 2048);
    CHECK(std::abs(f.wronskian() - 1.0) <= 1e-8);
  }
}

TEST_CASE("Wronskian in extended precision") {
  const BasicPotential<long double> p{0.5L, 1.0L, -2.0L};
  const auto f = integrate_fundamental(p, 120.0L, 4096);
  CHECK(std::abs(static_cast<double>(f.wronskian() - 1.0L)) < 1e-12);
}

TEST_CASE("fourth-order grid convergence") {
  const Potential zero{0.0};
  const double lambda = kPi * kPi;
  const auto exact = free_solution(lambda);
  double prev = endpoint_error(integrate_fundamental(zero, lambda, 16), exact);
  for (int steps : {32, 64, 128}) {
    const double err = endpoint_error(integrate_fundamental(zero, lambda, steps), exact);
    CHECK(prev / err >= 12.0);
    prev = err;
  }
}

TEST_CASE("shift equivalence") {
  const Potential p{0.2, 1.5, -0.7};
  for (double c : {-3.0, 2.5, 7.0}) {
    Potential::Coefficients shifted = p.coefficients();
    shifted[0] += c;
    for (double lambda : {-10.0, 5.0, 90.0}) {
      const auto a = integrate_fundamental(p, lambda);
      const auto b = integrate_fundamental(Potential(shifted), lambda + c);
      CHECK(endpoint_error(a, b) < 1e-8 * std::max(1.0, std::abs(a.dy1)));
    }
  }
}

TEST_CASE("asymptotic_fundamental") {
  {
    const auto f = asymptotic_fundamental(0.0, kPi);
    CHECK(f.y1 == doctest::Approx(-1.0));
    CHECK(std::abs(f.y2) < 1e-15);
    CHECK(f.dy2 == doctest::Approx(-1.0));
    CHECK(f.lambda == doctest::Approx(kPi * kPi));
  }
  CHECK(asymptotic_fundamental(1.0, 2.0 * kPi).y1 == doctest::Approx(1.0));
  CHECK_THROWS_AS(asymptotic_fundamental(0.0, 0.0), DomainError);
  CHECK_THROWS_AS(asymptotic_fundamental(0.0, -1.0), DomainError);
}

TEST_CASE("asymptotic remainder decays like 1/s") {
  // u(1) = 0.5 for both potentials.
  for (const Potential& p : {Potential{1.0}, Potential{1.0, 0.7, -0.4}}) {
    const double u1 = u_accumulated(p, 1.0);
    REQUIRE(u1 == doctest::Approx(0.5));
    {
      const double s = 100.0;
      const auto num = integrate_fundamental(p, s * s, 4096);
      const auto asym = asymptotic_fundamental(u1, s);
      CHECK(std::abs(num.y1 - asym.y1) < 1e-2);
      CHECK(std::abs(num.dy2 - asym.dy2) < 1e-2);
      CHECK(std::abs(num.dy1 - asym.dy1) < 1e-1);
      CHECK(std::abs(num.y2 - asym.y2) < 1e-3);
    }
    double worst = 0.0;
    for (double s : {20.0, 40.0, 80.0, 160.0}) {
      const auto num = integrate_fundamental(p, s * s, 2048);
      const auto asym = asymptotic_fundamental(u1, s);
      worst = std::max(worst, s * std::abs(num.y1 - asym.y1));
      worst = std::max(worst, s * std::abs(num.dy2 - asym.dy2));
      // y1' remainder is O(1/s) as well.
      worst = std::max(worst, s * std::abs(num.dy1 - asym.dy1) / 10.0);
    }
    CHECK(worst < 5.0);
  }
}
