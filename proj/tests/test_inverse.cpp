#include <cmath>
#include <numbers>

#include "doctest.h"
#include "slinv/charfn.hpp"
#include "slinv/inverse.hpp"

using namespace slinv;

namespace {
constexpr double kPi = std::numbers::pi;

Spectrum spectrum_of(const Potential& p, const BoundaryMatrix& bm, ProblemKind kind, int n) {
  return enumerate_eigenvalues({p, bm, kind}, n);
}

ReconstructionTarget target_of(const Potential& p, const BoundaryMatrix& bm, int n) {
  return {spectrum_of(p, bm, ProblemKind::FullL, n),
          spectrum_of(p, bm, ProblemKind::DecomposedL1, n),
          spectrum_of(p, bm, ProblemKind::DecomposedL2, n)};
}

double coefficient_error(const Potential& estimate, const Potential& truth) {
  const Eigen::Index n = std::max(estimate.size(), truth.size());
  Eigen::VectorXd a = Eigen::VectorXd::Zero(n), b = Eigen::VectorXd::Zero(n);
  a.head(estimate.size()) = estimate.coefficients();
  b.head(truth.size()) = truth.coefficients();
  return (a - b).cwiseAbs().maxCoeff();
}

double sup_error(const Potential& estimate, const Potential& truth) {
  double worst = 0.0;
  for (int i = 0; i <= 400; ++i) {
    const double x = i / 400.0;
    worst = std::max(worst, std::abs(evaluate_potential(estimate, x) - evaluate_potential(truth, x)));
  }
  return worst;
}

double parameter_error(const ReconstructionResult& r, const Potential& p, const BoundaryMatrix& bm) {
  const auto& h = r.boundary_hat;
  return std::max({coefficient_error(r.potential_hat, p), std::abs(h.a11 - bm.a11),
                   std::abs(h.a12 - bm.a12), std::abs(h.a21 - bm.a21), std::abs(h.a22 - bm.a22)});
}

std::vector<BasisSample> sample_fn(double s0, double s1, int n, double (*f)(double)) {
  std::vector<BasisSample> out;
  for (int i = 0; i < n; ++i) {
    const double s = s0 + (s1 - s0) * i / (n - 1);
    out.push_back({s, f(s)});
  }
  return out;
}
}  // namespace

TEST_CASE("basis_decompose recovers exact combinations") {
  const auto samples = sample_fn(20.0, 20.0 + 10 * kPi, 60, [](double s) { return s * std::sin(s); });
  const auto c = basis_decompose(samples);
  CHECK(c.c_s_sin == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(c.c_const) < 1e-10);
  CHECK(std::abs(c.c_cos) < 1e-10);
  CHECK(std::abs(c.c_sin) < 1e-10);
  CHECK(std::abs(c.c_cos2) < 1e-10);
  CHECK(c.residual_norm < 1e-9);

  const auto mixed = sample_fn(25.0, 70.0, 80, [](double s) {
    return 0.3 - 1.5 * std::cos(s) + 2.0 * std::sin(s) + s * std::sin(s) + 0.25 * std::cos(2 * s);
  });
  const auto m = basis_decompose(mixed);
  CHECK(m.c_const == doctest::Approx(0.3).epsilon(1e-10));
  CHECK(m.c_cos == doctest::Approx(-1.5).epsilon(1e-10));
  CHECK(m.c_sin == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(m.c_cos2 == doctest::Approx(0.25).epsilon(1e-10));
  for (const auto& sm : mixed) CHECK(m.evaluate(sm.s) == doctest::Approx(sm.value).epsilon(1e-10));
}

TEST_CASE("basis_decompose preconditions") {
  auto f = [](double s) { return s * std::sin(s); };
  CHECK_THROWS_AS(basis_decompose(sample_fn(20.0, 60.0, 24, f)), ContractError);
  CHECK_THROWS_AS(basis_decompose(sample_fn(10.0, 60.0, 40, f)), ContractError);
  CHECK_THROWS_AS(basis_decompose(sample_fn(20.0, 25.0, 40, f)), ConditioningError);
  // Samples on a 2 pi lattice: cos s, sin s and cos 2s are constant there.
  std::vector<BasisSample> lattice;
  for (int i = 0; i < 30; ++i) {
    const double s = 21.0 + 2.0 * kPi * i;
    lattice.push_back({s, f(s)});
  }
  CHECK_THROWS_AS(basis_decompose(lattice), ConditioningError);
}

TEST_CASE("basis_decompose of closed-form determinants") {
  const double s0 = 20.0, s1 = 20.0 + 10 * kPi;
  {
    // q = 0, a11 = 2: the determinant is s sin s + 2 cos s.
    const ProblemSpec spec{Potential{0.0}, {2.0, 0.0, 0.0, 0.0}, ProblemKind::FullL};
    const auto c = basis_decompose(sample_full_determinant(spec, s0, s1, 120, 8192));
    CHECK(c.c_cos == doctest::Approx(2.0).epsilon(1e-3));
    CHECK(c.c_s_sin == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(std::abs(c.c_const) < 1e-3);
    CHECK(std::abs(c.c_sin) < 1e-2);
    CHECK(std::abs(c.c_cos2) < 1e-3);
  }
  {
    // With a12 = 0, determinants that differ only in a21 differ by -(a21 - a21').
    const Potential p{0.4, 1.0, -0.5};
    const ProblemSpec with{p, {0.5, 0.0, 1.0, 1.0}, ProblemKind::FullL};
    const ProblemSpec without{p, {0.5, 0.0, 0.0, 1.0}, ProblemKind::FullL};
    auto a = sample_full_determinant(with, s0, s1, 120);
    const auto b = sample_full_determinant(without, s0, s1, 120);
    for (std::size_t i = 0; i < a.size(); ++i) a[i].value -= b[i].value;
    const auto c = basis_decompose(a);
    CHECK(c.c_const == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(std::abs(c.c_cos) < 1e-10);
    CHECK(std::abs(c.c_sin) < 1e-10);
    CHECK(std::abs(c.c_s_sin) < 1e-10);
    CHECK(std::abs(c.c_cos2) < 1e-10);
  }
}

TEST_CASE("constant-term identity sharpens with the window") {
  const Potential p{0.7, 1.0, -0.5};
  for (const BoundaryMatrix& bm : {BoundaryMatrix{0.5, -1.0, 2.0, 1.0},
                                   BoundaryMatrix{-1.0, 0.3, 0.8, -0.2}}) {
    const ProblemSpec spec{p, bm, ProblemKind::FullL};
    const auto pred = predicted_basis_coefficients(bm, u_accumulated(p, 1.0));
    double prev = INFINITY;
    for (double s : {20.0, 40.0, 80.0}) {
      const auto c = basis_decompose(sample_full_determinant(spec, s, s + 10 * kPi, 200, 8192));
      const double disc = std::max(std::abs(c.c_const - pred.c_const), std::abs(c.c_cos - pred.c_cos));
      CHECK(disc < 1.0 / s);
      CHECK(disc < prev);
      prev = disc;
    }
  }
}

TEST_CASE("a21 never reaches the decomposed spectra") {
  const Potential p{0.3, 0.8};
  const BoundaryMatrix a{0.5, -1.0, 1.0, 1.0}, b{0.5, -1.0, -4.0, 1.0};
  for (auto kind : {ProblemKind::DecomposedL1, ProblemKind::DecomposedL2})
    CHECK(spectrum_of(p, a, kind, 10).eigenvalues == spectrum_of(p, b, kind, 10).eigenvalues);
}

TEST_CASE("borg_reconstruct round trips") {
  SUBCASE("flat potential, N = 12") {
    const Potential q{0.0};
    const BoundaryMatrix bm{0.0, -1.0, 0.0, 1.0};
    const auto sp1 = spectrum_of(q, bm, ProblemKind::DecomposedL1, 12);
    const auto sp2 = spectrum_of(q, bm, ProblemKind::DecomposedL2, 12);
    const auto r = borg_reconstruct(sp1, sp2, 4);
    CHECK(r.converged);
    CHECK_FALSE(r.degenerate);
    CHECK(coefficient_error(r.potential_hat, q) < 1e-4);
    CHECK(std::abs(r.a11) < 1e-4);
    CHECK(std::abs(r.beta1 - 1.0) < 1e-4);
    CHECK(std::abs(r.beta2 + 1.0) < 1e-4);
  }
  SUBCASE("cos(pi x), N = 16") {
    const Potential q{0.0, 1.0};
    const BoundaryMatrix bm{0.5, 0.0, 0.0, 2.0};
    const auto sp1 = spectrum_of(q, bm, ProblemKind::DecomposedL1, 16);
    const auto sp2 = spectrum_of(q, bm, ProblemKind::DecomposedL2, 16);
    const auto r = borg_reconstruct(sp1, sp2, 6);
    CHECK(r.converged);
    CHECK(coefficient_error(r.potential_hat, q) < 5e-3);
    CHECK(std::abs(r.a11 - 0.5) < 5e-3);
    CHECK(std::abs(r.beta1 - 2.0) < 5e-3);
    CHECK(std::abs(r.beta2) < 5e-3);
  }
}

TEST_CASE("borg_reconstruct flags coincident spectra") {
  const Potential q{0.0, 1.0};
  const BoundaryMatrix bm{0.5, 1.0, 0.0, 1.0};
  const auto sp = spectrum_of(q, bm, ProblemKind::DecomposedL1, 12);
  const auto r = borg_reconstruct(sp, sp, 4);
  CHECK(r.degenerate);
  CHECK_FALSE(r.converged);
  REQUIRE_FALSE(r.warnings.empty());
  CHECK(r.warnings[0].find("a12 != a22") != std::string::npos);
}

TEST_CASE("borg_reconstruct preconditions") {
  const auto sp = spectrum_of(Potential{0.0}, {0.0, 1.0, 0.0, 0.0}, ProblemKind::DecomposedL1, 6);
  const auto sp2 = spectrum_of(Potential{0.0}, {0.0, 1.0, 0.0, 0.0}, ProblemKind::DecomposedL2, 6);
  CHECK_THROWS_AS(borg_reconstruct(sp, sp2, 4), ContractError);
  auto short2 = sp2;
  short2.eigenvalues.pop_back();
  CHECK_THROWS_AS(borg_reconstruct(sp, short2, 2), ContractError);
  auto unsorted = sp2;
  std::swap(unsorted.eigenvalues[0], unsorted.eigenvalues[1]);
  CHECK_THROWS_AS(borg_reconstruct(sp, unsorted, 2), ContractError);
}

TEST_CASE("recover_a21") {
  SUBCASE("flat potential") {
    const Potential q{0.0};
    const auto spL = spectrum_of(q, {0.0, 0.0, 0.3, 0.0}, ProblemKind::FullL, 12);
    CHECK(std::abs(recover_a21(spL, q, 0.0, 0.0, 0.0) - 0.3) < 1e-6);
  }
  SUBCASE("all zero") {
    const Potential q{0.0};
    const auto spL = spectrum_of(q, {}, ProblemKind::FullL, 12);
    CHECK(std::abs(recover_a21(spL, q, 0.0, 0.0, 0.0)) < 1e-8);
  }
  SUBCASE("cos(pi x), non-self-adjoint") {
    const Potential q{0.0, 1.0};
    const auto spL = spectrum_of(q, {0.5, -1.0, 2.0, 1.0}, ProblemKind::FullL, 12);
    CHECK(std::abs(recover_a21(spL, q, 0.5, -1.0, 1.0) - 2.0) < 1e-5);
  }
  SUBCASE("too short") {
    const Potential q{0.0};
    const auto spL = spectrum_of(q, {}, ProblemKind::FullL, 2);
    CHECK_THROWS_AS(recover_a21(spL, q, 0.0, 0.0, 0.0), ContractError);
  }
}

TEST_CASE("joint_refine") {
  const Potential q{0.0, 1.0};
  const BoundaryMatrix bm{0.5, -1.0, 2.0, 1.0};
  const auto target = target_of(q, bm, 16);

  SUBCASE("fixed point at the truth") {
    const Potential q6(Eigen::VectorXd::Zero(7));
    Eigen::VectorXd c = Eigen::VectorXd::Zero(7);
    c[1] = 1.0;
    const auto r = joint_refine(target, Potential(c), bm);
    CHECK(r.iterations <= 2);
    CHECK(r.misfit <= 1e-16);
    CHECK(r.converged);
  }

  SUBCASE("basin of attraction") {
    Eigen::VectorXd c = Eigen::VectorXd::Constant(7, 0.1);
    c[1] += 1.0;
    const BoundaryMatrix init{0.6, -0.9, 2.1, 1.1};
    const double initial = reconstruction_misfit(target, Potential(c), init);
    const auto r = joint_refine(target, Potential(c), init);
    CHECK(r.misfit <= initial);
    CHECK(r.converged);
    CHECK(parameter_error(r, q, bm) < 1e-4);
  }

  SUBCASE("never worse than the start") {
    // A poor start far from the basin; whatever happens the misfit must not grow.
    const Potential start{3.0, -2.0};
    const BoundaryMatrix init{-1.0, 1.0, 0.0, -1.0};
    const double initial = reconstruction_misfit(target, start, init);
    InverseOptions opts;
    opts.max_iterations = 3;
    const auto r = joint_refine(target, start, init, opts);
    CHECK(r.misfit <= initial);
  }
}

TEST_CASE("pipeline improves on the staged estimate") {
  const Potential q{0.0, 1.0};
  const BoundaryMatrix bm{0.5, -1.0, 2.0, 1.0};
  const auto target = target_of(q, bm, 16);
  const auto borg = borg_reconstruct(target.spectrum_l1, target.spectrum_l2, 6);
  const double a21 = recover_a21(target.spectrum_l, borg.potential_hat, borg.a11, borg.beta2, borg.beta1);
  const BoundaryMatrix staged{borg.a11, borg.beta2, a21, borg.beta1};
  ReconstructionResult staged_result;
  staged_result.potential_hat = borg.potential_hat;
  staged_result.boundary_hat = staged;
  const auto refined = joint_refine(target, borg.potential_hat, staged);
  CHECK(parameter_error(refined, q, bm) <= parameter_error(staged_result, q, bm));
  CHECK(refined.misfit <= reconstruction_misfit(target, borg.potential_hat, staged));
  CHECK(sup_error(refined.potential_hat, q) < 1e-3);
}

TEST_CASE("pipeline detects a12 = a22") {
  const Potential q{0.2, 0.5};
  const BoundaryMatrix bm{0.5, 1.0, -1.0, 1.0};
  CHECK_FALSE(bm.is_borg_separated());
  const auto r = reconstruct(target_of(q, bm, 10), 4);
  CHECK(r.degenerate);
  CHECK_FALSE(r.converged);
  REQUIRE_FALSE(r.warnings.empty());
  CHECK(r.warnings[0].find("a12 != a22") != std::string::npos);
}

TEST_CASE("reconstruction target requires equal truncations") {
  auto target = target_of(Potential{0.0}, {0.0, 1.0, -1.0, 0.0}, 6);
  target.spectrum_l.eigenvalues.pop_back();
  CHECK_THROWS_AS(target.truncation(), ContractError);
  CHECK_THROWS_AS(reconstruct(target, 2), ContractError);
}
