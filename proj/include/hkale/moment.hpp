#pragma once

#include "hkale/flat_module.hpp"

#include <array>
#include <optional>

namespace hkale {

/// Everything derived from a group that the quotient machinery needs.
struct FlatModule {
  FiniteSubgroup group;
  McKayData mckay;
  AdaptedRep rep;
  InvariantBasis basis;
  GaugeAlgebra alg;

  int order() const { return group.order(); }
  int real_dim() const { return basis.size(); }
  int moment_dim() const { return 3 * alg.dim_ft(); }

  static FlatModule build(const GroupLabel& label, const Tolerances& tol = default_tolerances());
  static FlatModule assemble(FiniteSubgroup group, McKayData mckay, InvariantBasis basis);
};

template <typename Scalar>
CMatrixT<Scalar> commutator(const CMatrixT<Scalar>& a, const CMatrixT<Scalar>& b) {
  return a * b - b * a;
}

/// (μ₁, μ₂, μ₃) without trace projection:
///   μ₁ = (i/2)([α,α*] + [β,β*])
///   μ₂ = (1/2)([α,β] + [α*,β*])
///   μ₃ = (i/2)(−[α,β] + [α*,β*])
template <typename Scalar>
std::array<CMatrixT<Scalar>, 3> raw_moment(const MatrixPairT<Scalar>& p) {
  using C = ComplexT<Scalar>;
  const C half_i{0, Scalar(0.5)};
  const CMatrixT<Scalar> as = p.alpha.adjoint();
  const CMatrixT<Scalar> bs = p.beta.adjoint();
  const CMatrixT<Scalar> ab = commutator<Scalar>(p.alpha, p.beta);
  const CMatrixT<Scalar> asbs = commutator<Scalar>(as, bs);
  return {half_i * (commutator<Scalar>(p.alpha, as) + commutator<Scalar>(p.beta, bs)),
          Scalar(0.5) * (ab + asbs), half_i * (asbs - ab)};
}

/// Directional derivative of raw_moment at p along q.
template <typename Scalar>
std::array<CMatrixT<Scalar>, 3> raw_moment_derivative(const MatrixPairT<Scalar>& p,
                                                      const MatrixPairT<Scalar>& q) {
  using C = ComplexT<Scalar>;
  const C half_i{0, Scalar(0.5)};
  const CMatrixT<Scalar> as = p.alpha.adjoint(), bs = p.beta.adjoint();
  const CMatrixT<Scalar> qas = q.alpha.adjoint(), qbs = q.beta.adjoint();
  const CMatrixT<Scalar> d_aa = commutator<Scalar>(q.alpha, as) + commutator<Scalar>(p.alpha, qas);
  const CMatrixT<Scalar> d_bb = commutator<Scalar>(q.beta, bs) + commutator<Scalar>(p.beta, qbs);
  const CMatrixT<Scalar> d_ab = commutator<Scalar>(q.alpha, p.beta) + commutator<Scalar>(p.alpha, q.beta);
  const CMatrixT<Scalar> d_asbs = commutator<Scalar>(qas, bs) + commutator<Scalar>(as, qbs);
  return {half_i * (d_aa + d_bb), Scalar(0.5) * (d_ab + d_asbs), half_i * (d_asbs - d_ab)};
}

template <typename Scalar>
CMatrixT<Scalar> trace_project(const CMatrixT<Scalar>& m) {
  const auto n = m.rows();
  return m - (m.trace() / Scalar(n)) * CMatrixT<Scalar>::Identity(n, n);
}

struct MomentValue {
  std::array<CMatrix, 3> m;
};

/// Moment triple at p ∈ M, trace-projected. Throws NotInvariant if p fails
/// the membership test.
MomentValue moment(const MatrixPair& p, const AdaptedRep& rep,
                   const Tolerances& tol = default_tolerances());
MomentValue moment_unchecked(const MatrixPair& p);

struct MomentCheck {
  double anti_hermitian = 0.0;
  double trace = 0.0;
  double commutation = 0.0;
  bool pass = false;
};
MomentCheck check_moment_value(const MomentValue& v, const AdaptedRep& rep,
                               const Tolerances& tol = default_tolerances());

/// Stacked (μ₁, μ₂, μ₃) coordinates in ft_basis, length 3(|Γ|−1).
RVector moment_coordinates(const MomentValue& v, const GaugeAlgebra& alg);

/// Real (3(|Γ|−1)) × (4|Γ|) Jacobian in basis / ft_basis coordinates.
RMatrix moment_jacobian(const MatrixPair& p, const InvariantBasis& basis, const GaugeAlgebra& alg);

/// Rank with singular values cut at `relative_cut` times the largest.
int numerical_rank(const RMatrix& m, double relative_cut);

/// ζ = (ζ₁, ζ₂, ζ₃), ζ_a = Σ_i coeffs(a, i) √−1 π_i.
struct Zeta {
  RMatrix coeffs;  // 3 x (r+1)

  static Zeta zero(int irreps) { return {RMatrix::Zero(3, irreps)}; }
  /// Projects each row onto Σ_i c_i n_i² = 0.
  static Zeta traceless(const RMatrix& coeffs, const std::vector<int>& marks);
  double trace_defect(const std::vector<int>& marks) const;
  Zeta scaled(double s) const { return {s * coeffs}; }
};

/// Random ζ with independent normal coefficients, projected traceless.
Zeta random_zeta(int irreps, const std::vector<int>& marks, std::uint64_t seed);

CMatrix zeta_matrix(const Zeta& z, int component, const GaugeAlgebra& alg);
RVector zeta_coordinates(const Zeta& z, const GaugeAlgebra& alg);

/// ι(ζ_a) in simple-root coordinates of h. ι is the inverse transpose of
/// l: √−1 π_i ↦ n_i ξ_i under the trace pairing on Z and the Cartan form
/// on h, so <ξ_k, ι(ζ_a)> = c_{a,k} n_k for each simple root.
struct CartanImage {
  std::array<RVector, 3> components;
};
CartanImage zeta_to_cartan(const Zeta& z, const McKayData& mckay);

/// <ξ, h> with the Cartan matrix as Gram form; root in simple-root coordinates.
double cartan_pairing(const std::vector<int>& root, const RVector& h, const IMatrix& cartan);

struct GoodnessVerdict {
  bool good = false;
  std::optional<std::vector<int>> witness;  // a positive root with all three pairings ~ 0
  double min_max_pairing = 0.0;             // min over roots of the max component modulus
};
GoodnessVerdict is_good_zeta(const Zeta& z, const McKayData& mckay,
                             const Tolerances& tol = default_tolerances());

}  // namespace hkale
