#include "hkale/moment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace hkale {

FlatModule FlatModule::build(const GroupLabel& label, const Tolerances& tol) {
  FiniteSubgroup group = build_group(label, tol);
  McKayData mckay = mckay_graph(group, tol);
  InvariantBasis basis = invariant_basis(group, mckay, tol);
  return assemble(std::move(group), std::move(mckay), std::move(basis));
}

FlatModule FlatModule::assemble(FiniteSubgroup group, McKayData mckay, InvariantBasis basis) {
  FlatModule m;
  m.rep = adapted_rep(group, mckay.isotypic);
  m.alg = gauge_algebra(mckay.isotypic);
  m.group = std::move(group);
  m.mckay = std::move(mckay);
  m.basis = std::move(basis);
  return m;
}

MomentValue moment_unchecked(const MatrixPair& p) {
  auto raw = raw_moment(p);
  return {{trace_project(raw[0]), trace_project(raw[1]), trace_project(raw[2])}};
}

MomentValue moment(const MatrixPair& p, const AdaptedRep& rep, const Tolerances& tol) {
  const double defect = membership_defect(p, rep);
  if (defect > tol.membership) {
    throw Error(ErrorKind::NotInvariant,
                "pair fails Γ-invariance (defect " + std::to_string(defect) + ")");
  }
  return moment_unchecked(p);
}

MomentCheck check_moment_value(const MomentValue& v, const AdaptedRep& rep, const Tolerances& tol) {
  MomentCheck c;
  for (const auto& m : v.m) {
    c.anti_hermitian = std::max(c.anti_hermitian, (m + m.adjoint()).norm());
    c.trace = std::max(c.trace, std::abs(m.trace()));
    c.commutation = std::max(c.commutation, commutator_defect(m, rep));
  }
  c.pass = c.anti_hermitian <= tol.commutation && c.trace <= tol.commutation &&
           c.commutation <= tol.moment_commutation;
  return c;
}

RVector moment_coordinates(const MomentValue& v, const GaugeAlgebra& alg) {
  const int d = alg.dim_ft();
  RVector out(3 * d);
  for (int a = 0; a < 3; ++a) out.segment(a * d, d) = ft_coordinates(v.m[a], alg);
  return out;
}

RMatrix moment_jacobian(const MatrixPair& p, const InvariantBasis& basis, const GaugeAlgebra& alg) {
  const int d = alg.dim_ft();
  RMatrix jac(3 * d, basis.size());
  for (int k = 0; k < basis.size(); ++k) {
    const auto dm = raw_moment_derivative(p, basis.vector(k));
    for (int a = 0; a < 3; ++a) jac.block(a * d, k, d, 1) = ft_coordinates(dm[a], alg);
  }
  return jac;
}

int numerical_rank(const RMatrix& m, double relative_cut) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<RMatrix> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  return static_cast<int>((s.array() > relative_cut * s(0)).count());
}

Zeta Zeta::traceless(const RMatrix& coeffs, const std::vector<int>& marks) {
  RVector w(static_cast<int>(marks.size()));
  for (int i = 0; i < w.size(); ++i) w(i) = marks[i] * marks[i];
  const double total = w.sum();
  Zeta z{coeffs};
  for (int a = 0; a < z.coeffs.rows(); ++a) {
    const double mean = z.coeffs.row(a).dot(w) / total;
    z.coeffs.row(a).array() -= mean;
  }
  return z;
}

double Zeta::trace_defect(const std::vector<int>& marks) const {
  double worst = 0.0;
  for (int a = 0; a < coeffs.rows(); ++a) {
    double s = 0.0;
    for (int i = 0; i < coeffs.cols(); ++i) s += coeffs(a, i) * marks[i] * marks[i];
    worst = std::max(worst, std::abs(s));
  }
  return worst;
}

Zeta random_zeta(int irreps, const std::vector<int>& marks, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  RMatrix c(3, irreps);
  for (int a = 0; a < 3; ++a) {
    for (int i = 0; i < irreps; ++i) c(a, i) = normal(rng);
  }
  return Zeta::traceless(c, marks);
}

CMatrix zeta_matrix(const Zeta& z, int component, const GaugeAlgebra& alg) {
  const int n = static_cast<int>(alg.center.front().rows());
  CMatrix m = CMatrix::Zero(n, n);
  for (int i = 0; i < z.coeffs.cols(); ++i) m += z.coeffs(component, i) * alg.center[i];
  return m;
}

RVector zeta_coordinates(const Zeta& z, const GaugeAlgebra& alg) {
  const int d = alg.dim_ft();
  RVector out(3 * d);
  for (int a = 0; a < 3; ++a) out.segment(a * d, d) = ft_coordinates(zeta_matrix(z, a, alg), alg);
  return out;
}

CartanImage zeta_to_cartan(const Zeta& z, const McKayData& mckay) {
  const int r = mckay.r;
  const RMatrix cartan = mckay.cartan.cast<double>();
  const Zeta projected = Zeta::traceless(z.coeffs, mckay.marks);
  CartanImage img;
  for (int a = 0; a < 3; ++a) {
    RVector w(r);
    for (int k = 0; k < r; ++k) w(k) = projected.coeffs(a, k + 1) * mckay.marks[k + 1];
    img.components[a] = cartan.partialPivLu().solve(w);
  }
  return img;
}

double cartan_pairing(const std::vector<int>& root, const RVector& h, const IMatrix& cartan) {
  double s = 0.0;
  for (int i = 0; i < static_cast<int>(root.size()); ++i) {
    for (int j = 0; j < h.size(); ++j) s += root[i] * cartan(i, j) * h(j);
  }
  return s;
}

GoodnessVerdict is_good_zeta(const Zeta& z, const McKayData& mckay, const Tolerances& tol) {
  const CartanImage img = zeta_to_cartan(z, mckay);
  GoodnessVerdict v;
  v.good = true;
  v.min_max_pairing = std::numeric_limits<double>::infinity();
  for (const auto& root : mckay.roots) {
    if (std::any_of(root.begin(), root.end(), [](int x) { return x < 0; })) continue;
    double largest = 0.0;
    for (int a = 0; a < 3; ++a) {
      largest = std::max(largest, std::abs(cartan_pairing(root, img.components[a], mckay.cartan)));
    }
    v.min_max_pairing = std::min(v.min_max_pairing, largest);
    if (largest <= tol.good_zeta && v.good) {
      v.good = false;
      v.witness = root;
    }
  }
  return v;
}

}  // namespace hkale
