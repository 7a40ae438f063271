#pragma once

#include "hkale/common.hpp"

#include <optional>
#include <string>
#include <vector>

namespace hkale {

enum class Family { A, D, E6, E7, E8 };

struct GroupLabel {
  Family family = Family::A;
  int k = 1;  // rank parameter; ignored for the exceptional families

  std::string str() const;  // e.g. "A1", "D2", "E6"
  friend bool operator==(const GroupLabel&, const GroupLabel&) = default;
};

Family parse_family(const std::string& name);
std::string family_name(Family f);

/// Expected |Γ| for a label: A_k -> k+1, D_k -> 4k, E6/E7/E8 -> 24/48/120.
int expected_order(const GroupLabel& label);

/// A finite subgroup of SU(2) stored as explicit matrices.
///
/// Element 0 is the identity. `cayley(a, b)` is the index of
/// elements[a] * elements[b].
struct FiniteSubgroup {
  GroupLabel label;
  std::vector<CMatrix2> elements;
  IMatrix cayley;
  std::vector<int> inverse;
  std::vector<std::vector<int>> conj_classes;
  std::vector<int> class_of;
  std::optional<int> minus_identity;

  int order() const { return static_cast<int>(elements.size()); }
  int mul(int a, int b) const { return cayley(a, b); }
  int element_order(int g) const;
  bool contains_minus_identity() const { return minus_identity.has_value(); }
};

/// Unit quaternion a + bi + cj + dk as the SU(2) matrix (u v; -v* u*)
/// with u = a + bi, v = c + di.
CMatrix2 quaternion_matrix(double a, double b, double c, double d);

/// Generators used by build_group for each family.
std::vector<CMatrix2> standard_generators(const GroupLabel& label);

/// Closure of an arbitrary generator set. Ordering is identity first, then
/// breadth-first over right multiplication by generators.
FiniteSubgroup close_group(const GroupLabel& label, const std::vector<CMatrix2>& generators,
                           const Tolerances& tol = default_tolerances(), int max_order = 200);

FiniteSubgroup build_group(Family family, int k = 1, const Tolerances& tol = default_tolerances());
inline FiniteSubgroup build_group(const GroupLabel& label,
                                  const Tolerances& tol = default_tolerances()) {
  return build_group(label.family, label.k, tol);
}

struct CheckResult {
  std::string name;
  bool pass = false;
  double value = 0.0;
  double tolerance = 0.0;
};

struct GroupReport {
  std::vector<CheckResult> checks;
  int class_count = 0;
  bool all_pass() const;
};

GroupReport verify_group(const FiniteSubgroup& g, const Tolerances& tol = default_tolerances(),
                         unsigned seed = 1);

}  // namespace hkale
