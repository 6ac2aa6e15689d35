#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <string_view>

#include "slinv/errors.hpp"
#include "slinv/potential.hpp"

namespace slinv {

/// Constants of the boundary forms
///   U1(y) = y'(0) + a11 y(0) + a12 y(1)
///   U2(y) = y'(1) + a21 y(0) + a22 y(1)
template <typename Scalar>
struct BasicBoundaryMatrix {
  Scalar a11{};
  Scalar a12{};
  Scalar a21{};
  Scalar a22{};

  BasicBoundaryMatrix() = default;
  BasicBoundaryMatrix(Scalar a11_, Scalar a12_, Scalar a21_, Scalar a22_)
      : a11(a11_), a12(a12_), a21(a21_), a22(a22_) {
    using std::isfinite;
    if (!(isfinite(a11) && isfinite(a12) && isfinite(a21) && isfinite(a22)))
      throw DomainError("boundary constants must be finite");
  }

  /// The auxiliary problems L1 and L2 differ, which the uniqueness result needs.
  bool is_borg_separated() const { return a12 != a22; }

  Scalar max_abs() const {
    using std::abs;
    using std::max;
    return max(max(abs(a11), abs(a12)), max(abs(a21), abs(a22)));
  }

  bool operator==(const BasicBoundaryMatrix&) const = default;
};

using BoundaryMatrix = BasicBoundaryMatrix<double>;

enum class ProblemKind { FullL, DecomposedL1, DecomposedL2 };

constexpr std::string_view to_string(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::FullL: return "L";
    case ProblemKind::DecomposedL1: return "L1";
    case ProblemKind::DecomposedL2: return "L2";
  }
  return "?";
}

/// Accepts "L", "L1", "L2" (and the enumerator names).
inline std::optional<ProblemKind> parse_problem_kind(std::string_view text) {
  if (text == "L" || text == "FullL") return ProblemKind::FullL;
  if (text == "L1" || text == "DecomposedL1") return ProblemKind::DecomposedL1;
  if (text == "L2" || text == "DecomposedL2") return ProblemKind::DecomposedL2;
  return std::nullopt;
}

struct ProblemSpec {
  Potential potential;
  BoundaryMatrix boundary;
  ProblemKind kind = ProblemKind::FullL;

  /// Right-endpoint Robin constant of a decomposed problem:
  /// a22 for L1, a12 for L2.
  double right_constant() const {
    switch (kind) {
      case ProblemKind::DecomposedL1: return boundary.a22;
      case ProblemKind::DecomposedL2: return boundary.a12;
      case ProblemKind::FullL: break;
    }
    throw ContractError("right_constant: only defined for decomposed problems");
  }

  ProblemSpec with_kind(ProblemKind k) const { return {potential, boundary, k}; }
};

}  // namespace slinv
