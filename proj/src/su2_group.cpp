#include "hkale/su2_group.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <random>

namespace hkale {

std::string family_name(Family f) {
  switch (f) {
    case Family::A: return "A";
    case Family::D: return "D";
    case Family::E6: return "E6";
    case Family::E7: return "E7";
    case Family::E8: return "E8";
  }
  return "?";
}

Family parse_family(const std::string& name) {
  if (name == "A" || name == "a") return Family::A;
  if (name == "D" || name == "d") return Family::D;
  if (name == "E6" || name == "e6") return Family::E6;
  if (name == "E7" || name == "e7") return Family::E7;
  if (name == "E8" || name == "e8") return Family::E8;
  throw Error(ErrorKind::InvalidArgument, "unknown family '" + name + "'");
}

std::string GroupLabel::str() const {
  if (family == Family::A || family == Family::D) return family_name(family) + std::to_string(k);
  return family_name(family);
}

int expected_order(const GroupLabel& label) {
  switch (label.family) {
    case Family::A: return label.k + 1;
    case Family::D: return 4 * label.k;
    case Family::E6: return 24;
    case Family::E7: return 48;
    case Family::E8: return 120;
  }
  return 0;
}

CMatrix2 quaternion_matrix(double a, double b, double c, double d) {
  const Complex u{a, b};
  const Complex v{c, d};
  CMatrix2 m;
  m << u, v, -std::conj(v), std::conj(u);
  return m;
}

std::vector<CMatrix2> standard_generators(const GroupLabel& label) {
  using std::numbers::pi;
  const double h = 0.5;
  switch (label.family) {
    case Family::A: {
      // cyclic group of order k+1
      const double t = 2.0 * pi / (label.k + 1);
      return {quaternion_matrix(std::cos(t), std::sin(t), 0, 0)};
    }
    case Family::D: {
      // binary dihedral of order 4k: a rotation of order 2k and j
      const double t = pi / label.k;
      return {quaternion_matrix(std::cos(t), std::sin(t), 0, 0), quaternion_matrix(0, 0, 1, 0)};
    }
    case Family::E6:
      // binary tetrahedral: i, j and (1+i+j+k)/2
      return {quaternion_matrix(0, 1, 0, 0), quaternion_matrix(0, 0, 1, 0),
              quaternion_matrix(h, h, h, h)};
    case Family::E7: {
      // binary octahedral: binary tetrahedral plus (1+i)/sqrt 2
      const double s = std::sqrt(0.5);
      return {quaternion_matrix(0, 1, 0, 0), quaternion_matrix(0, 0, 1, 0),
              quaternion_matrix(h, h, h, h), quaternion_matrix(s, s, 0, 0)};
    }
    case Family::E8: {
      // binary icosahedral: (1+i+j+k)/2 and (phi + i/phi + j)/2
      const double phi = std::numbers::phi;
      return {quaternion_matrix(h, h, h, h), quaternion_matrix(h * phi, h / phi, h, 0)};
    }
  }
  return {};
}

namespace {

using Key = std::array<std::int64_t, 8>;

Key make_key(const CMatrix2& m, double grid) {
  Key key{};
  for (int e = 0; e < 4; ++e) {
    const Complex z = m(e / 2, e % 2);
    key[2 * e] = std::llround(z.real() / grid);
    key[2 * e + 1] = std::llround(z.imag() / grid);
  }
  return key;
}

bool in_su2(const CMatrix2& m, double tol) {
  const double unit = (m * m.adjoint() - CMatrix2::Identity()).norm();
  const double det = std::abs(m.determinant() - Complex{1.0, 0.0});
  return unit <= tol && det <= tol;
}

}  // namespace

int FiniteSubgroup::element_order(int g) const {
  int x = g;
  int n = 1;
  while (x != 0) {
    x = cayley(x, g);
    ++n;
  }
  return n;
}

FiniteSubgroup close_group(const GroupLabel& label, const std::vector<CMatrix2>& generators,
                           const Tolerances& tol, int max_order) {
  for (const auto& g : generators) {
    if (!in_su2(g, tol.unitarity)) {
      throw Error(ErrorKind::NotInSU2, "generator fails unitarity/det check for " + label.str());
    }
  }

  FiniteSubgroup group;
  group.label = label;
  std::map<Key, int> index;
  auto add = [&](const CMatrix2& m) {
    auto [it, inserted] = index.emplace(make_key(m, tol.group_dedup_grid), group.order());
    if (inserted) group.elements.push_back(m);
    return inserted;
  };

  add(CMatrix2::Identity());
  for (std::size_t head = 0; head < group.elements.size(); ++head) {
    for (const auto& g : generators) {
      const CMatrix2 next = group.elements[head] * g;
      if (add(next) && group.order() > max_order) {
        throw Error(ErrorKind::NonClosure,
                    "closure of " + label.str() + " exceeds " + std::to_string(max_order));
      }
    }
  }

  const int n = group.order();
  group.cayley.resize(n, n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const auto it = index.find(make_key(group.elements[a] * group.elements[b], tol.group_dedup_grid));
      if (it == index.end()) {
        throw Error(ErrorKind::NonClosure, "product escapes element list for " + label.str());
      }
      group.cayley(a, b) = it->second;
    }
  }

  group.inverse.assign(n, -1);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (group.cayley(a, b) == 0) {
        group.inverse[a] = b;
        break;
      }
    }
  }

  if (const auto it = index.find(make_key(-CMatrix2::Identity(), tol.group_dedup_grid));
      it != index.end()) {
    group.minus_identity = it->second;
  }

  // exact orbits under conjugation
  group.class_of.assign(n, -1);
  for (int g = 0; g < n; ++g) {
    if (group.class_of[g] >= 0) continue;
    const int id = static_cast<int>(group.conj_classes.size());
    std::vector<int> members;
    for (int h = 0; h < n; ++h) {
      const int c = group.cayley(group.cayley(h, g), group.inverse[h]);
      if (group.class_of[c] < 0) {
        group.class_of[c] = id;
        members.push_back(c);
      }
    }
    std::sort(members.begin(), members.end());
    group.conj_classes.push_back(std::move(members));
  }
  return group;
}

FiniteSubgroup build_group(Family family, int k, const Tolerances& tol) {
  if ((family == Family::A || family == Family::D) && k < 1) {
    throw Error(ErrorKind::InvalidArgument, "rank parameter must be >= 1");
  }
  GroupLabel label{family, (family == Family::A || family == Family::D) ? k : 0};
  return close_group(label, standard_generators(label), tol);
}

bool GroupReport::all_pass() const {
  for (const auto& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

GroupReport verify_group(const FiniteSubgroup& g, const Tolerances& tol, unsigned seed) {
  GroupReport report;
  const int n = g.order();
  auto add = [&](std::string name, double value, double tolerance) {
    report.checks.push_back({std::move(name), value <= tolerance, value, tolerance});
  };

  add("identity_first", n > 0 ? (g.elements[0] - CMatrix2::Identity()).norm() : 1.0, tol.unitarity);

  double unit = 0.0;
  double det = 0.0;
  double trace_imag = 0.0;
  for (const auto& m : g.elements) {
    unit = std::max(unit, (m * m.adjoint() - CMatrix2::Identity()).norm());
    det = std::max(det, std::abs(m.determinant() - Complex{1.0, 0.0}));
    trace_imag = std::max(trace_imag, std::abs(m.trace().imag()));
  }
  add("unitary", unit, tol.unitarity);
  add("det_one", det, tol.unitarity);
  add("character_q_real", trace_imag, tol.unitarity);

  bool valid_indices = g.cayley.rows() == n && g.cayley.cols() == n;
  double product = 0.0;
  if (valid_indices) {
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        const int c = g.cayley(a, b);
        if (c < 0 || c >= n) {
          valid_indices = false;
          continue;
        }
        product = std::max(product, (g.elements[a] * g.elements[b] - g.elements[c]).norm());
      }
    }
  }
  add("cayley_indices", valid_indices ? 0.0 : 1.0, 0.0);
  add("cayley_matches_product", valid_indices ? product : 1.0, tol.cayley_check);

  int assoc_failures = 0;
  if (valid_indices && n > 0) {
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> pick(0, n - 1);
    for (int t = 0; t < 256; ++t) {
      const int a = pick(rng), b = pick(rng), c = pick(rng);
      if (g.cayley(g.cayley(a, b), c) != g.cayley(a, g.cayley(b, c))) ++assoc_failures;
    }
  }
  add("associativity", assoc_failures, 0.0);

  int inverse_failures = 0;
  for (int a = 0; a < n && valid_indices; ++a) {
    const int b = g.inverse[a];
    if (b < 0 || g.cayley(a, b) != 0 || g.cayley(b, a) != 0) ++inverse_failures;
  }
  add("two_sided_inverse", inverse_failures, 0.0);

  add("order_matches_family", std::abs(n - expected_order(g.label)), 0.0);

  int lagrange_failures = 0;
  for (int a = 0; a < n && valid_indices; ++a) {
    if (n % g.element_order(a) != 0) ++lagrange_failures;
  }
  add("lagrange", lagrange_failures, 0.0);

  bool has_minus = false;
  for (const auto& m : g.elements) {
    if ((m + CMatrix2::Identity()).norm() <= tol.cayley_check) has_minus = true;
  }
  add("minus_identity_flag", has_minus == g.contains_minus_identity() ? 0.0 : 1.0, 0.0);

  report.class_count = static_cast<int>(g.conj_classes.size());
  return report;
}

}  // namespace hkale
