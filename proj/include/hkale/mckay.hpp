#pragma once

#include "hkale/su2_group.hpp"

#include <string>
#include <vector>

namespace hkale {

/// Left-regular representation as exact permutations:
/// R(γ) e_h = e_{γh}, i.e. perm[γ][h] = index of γh.
struct RegularRep {
  std::vector<std::vector<int>> perm;

  int dim() const { return static_cast<int>(perm.size()); }
  CMatrix matrix(int g) const;
  int character(int g) const;
};

RegularRep regular_representation(const FiniteSubgroup& g);

/// Unitary change of basis exhibiting R = ⊕ C^{n_i} ⊗ R_i.
///
/// Column layout of `change_of_basis`: block i starts at offsets[i]; inside
/// it the column offsets[i] + a*n_i + b is copy a, irrep basis vector b,
/// so U* R(γ) U = ⊕_i I_{n_i} ⊗ irreps[i][γ].
struct IsotypicDecomposition {
  std::vector<int> dims;
  std::vector<int> offsets;
  std::vector<std::vector<CMatrix>> irreps;  // irreps[i][γ]
  CMatrix characters;                        // (r+1) x |Γ|
  CMatrix change_of_basis;
  double reconstruction_error = 0.0;

  int irrep_count() const { return static_cast<int>(dims.size()); }
  int total_dim() const;
  /// ⊕_i I_{n_i} ⊗ ρ_i(γ), the regular representation in the adapted basis.
  CMatrix block_matrix(int g) const;
};

/// Splits R with a random Hermitian element of its commutant (the
/// right-translation algebra), then aligns copies of the same irrep by
/// Schur intertwiners. Irrep 0 is the trivial representation.
IsotypicDecomposition isotypic_decompose(const FiniteSubgroup& g, const RegularRep& rep,
                                         const Tolerances& tol = default_tolerances(),
                                         unsigned seed = 20240917);

enum class AffineType { A, D, E };

struct DynkinLabel {
  AffineType type = AffineType::A;
  int rank = 1;
  std::string str() const;  // "A~2", "D~4", "E~6"
};

struct McKayData {
  int r = 0;
  std::vector<int> marks;
  IMatrix adjacency;
  IMatrix cartan_ext;
  IMatrix cartan;
  DynkinLabel label;
  std::vector<std::vector<int>> roots;
  IsotypicDecomposition isotypic;
  double rounding_residual = 0.0;
};

/// Character inner products a_ij = <χ_Q χ_i, χ_j>, rounded, matched against
/// the affine ADE templates; roots of the finite diagram attached.
McKayData mckay_graph(const FiniteSubgroup& g, const IsotypicDecomposition& iso,
                      const Tolerances& tol = default_tolerances());
McKayData mckay_graph(const FiniteSubgroup& g, const Tolerances& tol = default_tolerances());

/// Adjacency matrix of the stored affine template (r+1 nodes, node 0 the
/// extending node).
IMatrix affine_template(const DynkinLabel& label);

bool graphs_isomorphic(const IMatrix& a, const IMatrix& b);

/// All roots of a simply-laced Cartan matrix in simple-root coordinates,
/// sorted lexicographically.
std::vector<std::vector<int>> enumerate_roots(const IMatrix& cartan);

int expected_root_count(const DynkinLabel& label);

}  // namespace hkale
