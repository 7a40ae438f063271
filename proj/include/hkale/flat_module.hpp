#pragma once

#include "hkale/mckay.hpp"

#include <utility>
#include <vector>

namespace hkale {

/// A point (α, β) of P = Q ⊗ End(R).
template <typename Scalar>
struct MatrixPairT {
  CMatrixT<Scalar> alpha;
  CMatrixT<Scalar> beta;

  static MatrixPairT zero(int n) {
    return {CMatrixT<Scalar>::Zero(n, n), CMatrixT<Scalar>::Zero(n, n)};
  }
  int dim() const { return static_cast<int>(alpha.rows()); }

  MatrixPairT& operator+=(const MatrixPairT& o) {
    alpha += o.alpha;
    beta += o.beta;
    return *this;
  }
  MatrixPairT& operator-=(const MatrixPairT& o) {
    alpha -= o.alpha;
    beta -= o.beta;
    return *this;
  }
  friend MatrixPairT operator+(MatrixPairT a, const MatrixPairT& b) { return a += b; }
  friend MatrixPairT operator-(MatrixPairT a, const MatrixPairT& b) { return a -= b; }
  friend MatrixPairT operator*(ComplexT<Scalar> s, const MatrixPairT& p) {
    return {s * p.alpha, s * p.beta};
  }
  friend MatrixPairT operator*(Scalar s, const MatrixPairT& p) { return {s * p.alpha, s * p.beta}; }
};

using MatrixPair = MatrixPairT<double>;

/// Tr(α₁α₂*) + Tr(β₁β₂*).
template <typename Scalar>
ComplexT<Scalar> hermitian_pairing(const MatrixPairT<Scalar>& p, const MatrixPairT<Scalar>& q) {
  return (p.alpha.array() * q.alpha.conjugate().array()).sum() +
         (p.beta.array() * q.beta.conjugate().array()).sum();
}

template <typename Scalar>
Scalar real_pairing(const MatrixPairT<Scalar>& p, const MatrixPairT<Scalar>& q) {
  return hermitian_pairing(p, q).real();
}

template <typename Scalar>
Scalar norm(const MatrixPairT<Scalar>& p) {
  return std::sqrt(p.alpha.squaredNorm() + p.beta.squaredNorm());
}

template <typename Scalar>
MatrixPairT<Scalar> quaternion_I(const MatrixPairT<Scalar>& p) {
  const ComplexT<Scalar> i{0, 1};
  return {i * p.alpha, i * p.beta};
}

/// J(α, β) = (−β*, α*).
template <typename Scalar>
MatrixPairT<Scalar> quaternion_J(const MatrixPairT<Scalar>& p) {
  return {-p.beta.adjoint(), p.alpha.adjoint()};
}

template <typename Scalar>
MatrixPairT<Scalar> quaternion_K(const MatrixPairT<Scalar>& p) {
  return quaternion_I(quaternion_J(p));
}

/// (fαf⁻¹, fβf⁻¹) for unitary f, no membership check.
template <typename Scalar>
MatrixPairT<Scalar> conjugate_pair(const CMatrixT<Scalar>& f, const MatrixPairT<Scalar>& p) {
  return {f * p.alpha * f.adjoint(), f * p.beta * f.adjoint()};
}

/// The regular representation written in the isotypic basis, together with
/// the SU(2) matrices it is indexed by.
struct AdaptedRep {
  std::vector<CMatrix2> gammas;
  std::vector<CMatrix> matrices;
  std::vector<int> inverse;

  int order() const { return static_cast<int>(gammas.size()); }
  int dim() const { return matrices.empty() ? 0 : static_cast<int>(matrices.front().rows()); }
};

AdaptedRep adapted_rep(const FiniteSubgroup& g, const IsotypicDecomposition& iso);
/// Same representation in the permutation basis (no change of basis).
AdaptedRep permutation_rep(const FiniteSubgroup& g, const RegularRep& rep);

/// max over γ of the residuals of R(γ⁻¹)αR(γ) = uα + vβ and
/// R(γ⁻¹)βR(γ) = −v̄α + ūβ.
double membership_defect(const MatrixPair& p, const AdaptedRep& rep);

MatrixPair to_permutation_basis(const MatrixPair& p, const IsotypicDecomposition& iso);
MatrixPair from_permutation_basis(const MatrixPair& p, const IsotypicDecomposition& iso);

/// Real-orthonormal basis of M = P^Γ built blockwise from
/// M = ⊕ a_ij Hom(C^{n_i}, C^{n_j}); vectors are stored as atoms
/// E_{row,col} ⊗ Y (times 1 or i) and assembled on demand.
class InvariantBasis {
 public:
  struct Atom {
    int from = 0;  // irrep i (columns)
    int to = 0;    // irrep j (rows)
    int row = 0;   // multiplicity index in C^{n_j}
    int col = 0;   // multiplicity index in C^{n_i}
    int w = 0;     // index into the invariant (Yα, Yβ) pairs of (i, j)
    bool imaginary = false;
  };

  InvariantBasis() = default;
  InvariantBasis(std::vector<int> dims, std::vector<int> offsets,
                 std::vector<std::vector<std::pair<CMatrix, CMatrix>>> hom);

  int size() const { return static_cast<int>(atoms_.size()); }
  int group_order() const { return n_; }
  long ambient_complex_dim() const { return 2L * n_ * n_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  const std::vector<int>& dims() const { return dims_; }
  const std::vector<int>& offsets() const { return offsets_; }
  const std::vector<std::pair<CMatrix, CMatrix>>& hom(int i, int j) const {
    return hom_[i * dims_.size() + j];
  }

  MatrixPair vector(int k) const;
  MatrixPair assemble(const RVector& coords) const;
  RVector coordinates(const MatrixPair& p) const;
  /// Largest |Re<v_a, v_b> − δ_ab| over the basis.
  double orthonormality_defect() const;

 private:
  void add_atom(MatrixPair& p, const Atom& a, Complex c) const;

  int n_ = 0;
  std::vector<int> dims_;
  std::vector<int> offsets_;
  std::vector<std::vector<std::pair<CMatrix, CMatrix>>> hom_;
  std::vector<Atom> atoms_;
};

InvariantBasis invariant_basis(const FiniteSubgroup& g, const McKayData& mckay,
                               const Tolerances& tol = default_tolerances());

/// Rank of the dense Γ-averaging projector on P in the permutation basis.
/// Independent of the isotypic decomposition; meant for |Γ| <= 24.
int dense_invariant_rank(const FiniteSubgroup& g, const RegularRep& rep);

struct GaugeAlgebra {
  std::vector<CMatrix> f_basis;   // anti-Hermitian, commuting with R(γ)
  std::vector<CMatrix> ft_basis;  // orthogonal to the identity direction
  std::vector<CMatrix> center;    // √−1 π_i, i = 0..r
  std::vector<RVector> z_basis;   // coefficients c_i with Σ c_i n_i² = 0
  std::vector<int> marks;

  int dim_f() const { return static_cast<int>(f_basis.size()); }
  int dim_ft() const { return static_cast<int>(ft_basis.size()); }
};

GaugeAlgebra gauge_algebra(const IsotypicDecomposition& iso);

/// Coordinates of a traceless element of f in ft_basis (Re Tr(X Y_k*)).
RVector ft_coordinates(const CMatrix& x, const GaugeAlgebra& alg);

/// max over γ of ‖[Y, R(γ)]‖.
double commutator_defect(const CMatrix& y, const AdaptedRep& rep);

/// exp(Y) for anti-Hermitian Y.
CMatrix unitary_exp(const CMatrix& y);

/// (fαf⁻¹, fβf⁻¹); throws NotInF if f fails to commute with R.
MatrixPair f_action(const CMatrix& f, const MatrixPair& p, const AdaptedRep& rep,
                    const Tolerances& tol = default_tolerances());

/// Infinitesimal F-orbit directions ([Y, α], [Y, β]) for Y in ft_basis.
std::vector<MatrixPair> orbit_directions(const MatrixPair& p, const GaugeAlgebra& alg);

}  // namespace hkale
