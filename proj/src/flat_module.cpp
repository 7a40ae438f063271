#include "hkale/flat_module.hpp"

#include <algorithm>
#include <cmath>

namespace hkale {

AdaptedRep adapted_rep(const FiniteSubgroup& g, const IsotypicDecomposition& iso) {
  AdaptedRep rep;
  rep.gammas = g.elements;
  rep.inverse = g.inverse;
  rep.matrices.reserve(g.order());
  for (int a = 0; a < g.order(); ++a) rep.matrices.push_back(iso.block_matrix(a));
  return rep;
}

AdaptedRep permutation_rep(const FiniteSubgroup& g, const RegularRep& r) {
  AdaptedRep rep;
  rep.gammas = g.elements;
  rep.inverse = g.inverse;
  for (int a = 0; a < g.order(); ++a) rep.matrices.push_back(r.matrix(a));
  return rep;
}

double membership_defect(const MatrixPair& p, const AdaptedRep& rep) {
  double worst = 0.0;
  for (int a = 0; a < rep.order(); ++a) {
    const CMatrix2& gm = rep.gammas[a];
    const Complex u = gm(0, 0);
    const Complex v = gm(0, 1);
    const CMatrix& r = rep.matrices[a];
    const CMatrix& rinv = rep.matrices[rep.inverse[a]];
    const double da = (rinv * p.alpha * r - (u * p.alpha + v * p.beta)).norm();
    const double db = (rinv * p.beta * r - (-std::conj(v) * p.alpha + std::conj(u) * p.beta)).norm();
    worst = std::max({worst, da, db});
  }
  return worst;
}

MatrixPair to_permutation_basis(const MatrixPair& p, const IsotypicDecomposition& iso) {
  const CMatrix& u = iso.change_of_basis;
  return {u * p.alpha * u.adjoint(), u * p.beta * u.adjoint()};
}

MatrixPair from_permutation_basis(const MatrixPair& p, const IsotypicDecomposition& iso) {
  const CMatrix& u = iso.change_of_basis;
  return {u.adjoint() * p.alpha * u, u.adjoint() * p.beta * u};
}

InvariantBasis::InvariantBasis(std::vector<int> dims, std::vector<int> offsets,
                               std::vector<std::vector<std::pair<CMatrix, CMatrix>>> hom)
    : dims_(std::move(dims)), offsets_(std::move(offsets)), hom_(std::move(hom)) {
  for (int d : dims_) n_ += d * d;
  const int m = static_cast<int>(dims_.size());
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      const int count = static_cast<int>(hom_[i * m + j].size());
      for (int w = 0; w < count; ++w) {
        for (int row = 0; row < dims_[j]; ++row) {
          for (int col = 0; col < dims_[i]; ++col) {
            atoms_.push_back({i, j, row, col, w, false});
            atoms_.push_back({i, j, row, col, w, true});
          }
        }
      }
    }
  }
}

void InvariantBasis::add_atom(MatrixPair& p, const Atom& a, Complex c) const {
  const auto& [ya, yb] = hom(a.from, a.to)[a.w];
  const int dj = dims_[a.to];
  const int di = dims_[a.from];
  const int r0 = offsets_[a.to] + a.row * dj;
  const int c0 = offsets_[a.from] + a.col * di;
  if (a.imaginary) c *= kI;
  p.alpha.block(r0, c0, dj, di) += c * ya;
  p.beta.block(r0, c0, dj, di) += c * yb;
}

MatrixPair InvariantBasis::vector(int k) const {
  MatrixPair p = MatrixPair::zero(n_);
  add_atom(p, atoms_[k], 1.0);
  return p;
}

MatrixPair InvariantBasis::assemble(const RVector& coords) const {
  MatrixPair p = MatrixPair::zero(n_);
  for (int k = 0; k < size(); ++k) {
    if (coords(k) != 0.0) add_atom(p, atoms_[k], coords(k));
  }
  return p;
}

RVector InvariantBasis::coordinates(const MatrixPair& p) const {
  RVector c(size());
  for (int k = 0; k < size(); ++k) {
    const Atom& a = atoms_[k];
    const auto& [ya, yb] = hom(a.from, a.to)[a.w];
    const int dj = dims_[a.to];
    const int di = dims_[a.from];
    const int r0 = offsets_[a.to] + a.row * dj;
    const int c0 = offsets_[a.from] + a.col * di;
    const Complex z = (p.alpha.block(r0, c0, dj, di).array() * ya.conjugate().array()).sum() +
                      (p.beta.block(r0, c0, dj, di).array() * yb.conjugate().array()).sum();
    c(k) = a.imaginary ? z.imag() : z.real();
  }
  return c;
}

double InvariantBasis::orthonormality_defect() const {
  std::vector<MatrixPair> vs;
  vs.reserve(size());
  for (int k = 0; k < size(); ++k) vs.push_back(vector(k));
  double worst = 0.0;
  for (int a = 0; a < size(); ++a) {
    for (int b = a; b < size(); ++b) {
      const double expect = a == b ? 1.0 : 0.0;
      worst = std::max(worst, std::abs(real_pairing(vs[a], vs[b]) - expect));
    }
  }
  return worst;
}

namespace {

// Orthonormal basis of the invariant pairs (Yα, Yβ) ∈ Hom(R_i, R_j)².
std::vector<std::pair<CMatrix, CMatrix>> invariant_hom(const FiniteSubgroup& g,
                                                       const IsotypicDecomposition& iso, int i,
                                                       int j) {
  const int di = iso.dims[i];
  const int dj = iso.dims[j];
  const int block = dj * di;
  const int dim = 2 * block;
  CMatrix proj = CMatrix::Zero(dim, dim);
  for (int a = 0; a < g.order(); ++a) {
    const Complex u = g.elements[a](0, 0);
    const Complex v = g.elements[a](0, 1);
    const CMatrix& rj = iso.irreps[j][a];
    const CMatrix ri_inv = iso.irreps[i][a].adjoint();
    for (int k = 0; k < dim; ++k) {
      CMatrix ya = CMatrix::Zero(dj, di);
      CMatrix yb = CMatrix::Zero(dj, di);
      (k < block ? ya : yb)(k % block % dj, k % block / dj) = 1.0;
      const CMatrix na = rj * (u * ya + v * yb) * ri_inv;
      const CMatrix nb = rj * (-std::conj(v) * ya + std::conj(u) * yb) * ri_inv;
      proj.col(k).head(block) += Eigen::Map<const Eigen::VectorXcd>(na.data(), block);
      proj.col(k).tail(block) += Eigen::Map<const Eigen::VectorXcd>(nb.data(), block);
    }
  }
  proj /= static_cast<double>(g.order());
  const CMatrix herm = 0.5 * (proj + proj.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(herm);
  std::vector<std::pair<CMatrix, CMatrix>> out;
  for (int k = dim - 1; k >= 0; --k) {
    if (eig.eigenvalues()(k) < 0.5) break;
    const Eigen::VectorXcd v = eig.eigenvectors().col(k);
    CMatrix ya = Eigen::Map<const CMatrix>(v.data(), dj, di);
    CMatrix yb = Eigen::Map<const CMatrix>(v.data() + block, dj, di);
    out.emplace_back(std::move(ya), std::move(yb));
  }
  return out;
}

}  // namespace

InvariantBasis invariant_basis(const FiniteSubgroup& g, const McKayData& mckay,
                               const Tolerances& tol) {
  const IsotypicDecomposition& iso = mckay.isotypic;
  const int m = iso.irrep_count();
  std::vector<std::vector<std::pair<CMatrix, CMatrix>>> hom(m * m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      hom[i * m + j] = invariant_hom(g, iso, i, j);
      if (static_cast<int>(hom[i * m + j].size()) != mckay.adjacency(i, j)) {
        throw Error(ErrorKind::DimensionMismatch,
                    "invariant Hom(R_" + std::to_string(i) + ", R_" + std::to_string(j) +
                        ") has dimension " + std::to_string(hom[i * m + j].size()) +
                        ", expected a_ij = " + std::to_string(mckay.adjacency(i, j)));
      }
    }
  }
  InvariantBasis basis(iso.dims, iso.offsets, std::move(hom));
  if (basis.size() != 4 * g.order()) {
    throw Error(ErrorKind::DimensionMismatch, "dim M = " + std::to_string(basis.size()) +
                                                  ", expected " + std::to_string(4 * g.order()));
  }
  (void)tol;
  return basis;
}

int dense_invariant_rank(const FiniteSubgroup& g, const RegularRep& rep) {
  const int n = g.order();
  const int block = n * n;
  const int dim = 2 * block;
  CMatrix proj = CMatrix::Zero(dim, dim);
  // Φ_γ(α, β) = R(γ)(γ·(α, β))R(γ)⁻¹ maps the unit pair at (x, y) to
  // unit pairs at (γx, γy); only two target entries per column.
  for (int a = 0; a < n; ++a) {
    const Complex u = g.elements[a](0, 0);
    const Complex v = g.elements[a](0, 1);
    for (int k = 0; k < dim; ++k) {
      const int e = k % block;
      const int x = e % n;
      const int y = e / n;
      const int target = rep.perm[a][y] * n + rep.perm[a][x];
      if (k < block) {
        proj(target, k) += u;
        proj(block + target, k) += -std::conj(v);
      } else {
        proj(target, k) += v;
        proj(block + target, k) += std::conj(u);
      }
    }
  }
  proj /= static_cast<double>(n);
  const CMatrix herm = 0.5 * (proj + proj.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(herm, Eigen::EigenvaluesOnly);
  return static_cast<int>((eig.eigenvalues().array() > 0.5).count());
}

GaugeAlgebra gauge_algebra(const IsotypicDecomposition& iso) {
  GaugeAlgebra alg;
  alg.marks = iso.dims;
  const int n = iso.total_dim();
  const int m = iso.irrep_count();

  // X ⊗ I_{d} placed in block i, normalized.
  auto lift = [&](int i, const CMatrix& x) {
    const int d = iso.dims[i];
    CMatrix y = CMatrix::Zero(n, n);
    for (int a = 0; a < d; ++a) {
      for (int b = 0; b < d; ++b) {
        if (x(a, b) == Complex{0.0, 0.0}) continue;
        for (int s = 0; s < d; ++s) y(iso.offsets[i] + a * d + s, iso.offsets[i] + b * d + s) = x(a, b);
      }
    }
    return CMatrix(y / y.norm());
  };

  std::vector<CMatrix> diagonal;
  std::vector<CMatrix> off_diagonal;
  for (int i = 0; i < m; ++i) {
    const int d = iso.dims[i];
    for (int a = 0; a < d; ++a) {
      CMatrix x = CMatrix::Zero(d, d);
      x(a, a) = kI;
      diagonal.push_back(lift(i, x));
      for (int b = a + 1; b < d; ++b) {
        CMatrix re = CMatrix::Zero(d, d);
        re(a, b) = 1.0;
        re(b, a) = -1.0;
        off_diagonal.push_back(lift(i, re));
        CMatrix im = CMatrix::Zero(d, d);
        im(a, b) = kI;
        im(b, a) = kI;
        off_diagonal.push_back(lift(i, im));
      }
    }
  }
  alg.f_basis = diagonal;
  alg.f_basis.insert(alg.f_basis.end(), off_diagonal.begin(), off_diagonal.end());

  // Orthogonal complement of i·Id inside the diagonal span.
  const int nd = static_cast<int>(diagonal.size());
  RVector identity_coords(nd);
  const CMatrix ident = kI * CMatrix::Identity(n, n);
  for (int k = 0; k < nd; ++k) {
    identity_coords(k) = (ident.array() * diagonal[k].conjugate().array()).sum().real();
  }
  Eigen::HouseholderQR<RMatrix> qr(identity_coords);
  const RMatrix q = qr.householderQ();
  for (int c = 1; c < nd; ++c) {
    CMatrix y = CMatrix::Zero(n, n);
    for (int k = 0; k < nd; ++k) y += q(k, c) * diagonal[k];
    alg.ft_basis.push_back(y);
  }
  alg.ft_basis.insert(alg.ft_basis.end(), off_diagonal.begin(), off_diagonal.end());

  for (int i = 0; i < m; ++i) {
    CMatrix pi = CMatrix::Zero(n, n);
    const int sz = iso.dims[i] * iso.dims[i];
    pi.block(iso.offsets[i], iso.offsets[i], sz, sz) = kI * CMatrix::Identity(sz, sz);
    alg.center.push_back(pi);
  }

  RVector weights(m);
  for (int i = 0; i < m; ++i) weights(i) = iso.dims[i] * iso.dims[i];
  Eigen::HouseholderQR<RMatrix> zqr(weights);
  const RMatrix zq = zqr.householderQ();
  for (int c = 1; c < m; ++c) alg.z_basis.push_back(zq.col(c));
  return alg;
}

RVector ft_coordinates(const CMatrix& x, const GaugeAlgebra& alg) {
  RVector c(alg.dim_ft());
  for (int k = 0; k < alg.dim_ft(); ++k) {
    c(k) = (x.array() * alg.ft_basis[k].conjugate().array()).sum().real();
  }
  return c;
}

double commutator_defect(const CMatrix& y, const AdaptedRep& rep) {
  double worst = 0.0;
  for (const auto& r : rep.matrices) worst = std::max(worst, (y * r - r * y).norm());
  return worst;
}

CMatrix unitary_exp(const CMatrix& y) {
  // y = iH with H Hermitian
  const CMatrix h = -kI * y;
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(0.5 * (h + h.adjoint()));
  const Eigen::VectorXcd phases = (kI * eig.eigenvalues().cast<Complex>()).array().exp();
  return eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
}

MatrixPair f_action(const CMatrix& f, const MatrixPair& p, const AdaptedRep& rep,
                    const Tolerances& tol) {
  const double unit = (f * f.adjoint() - CMatrix::Identity(f.rows(), f.cols())).norm();
  const double comm = commutator_defect(f, rep);
  if (unit > tol.commutation || comm > tol.commutation) {
    throw Error(ErrorKind::NotInF, "element is not a unitary commuting with R (defects " +
                                       std::to_string(unit) + ", " + std::to_string(comm) + ")");
  }
  return conjugate_pair(f, p);
}

std::vector<MatrixPair> orbit_directions(const MatrixPair& p, const GaugeAlgebra& alg) {
  std::vector<MatrixPair> out;
  out.reserve(alg.ft_basis.size());
  for (const auto& y : alg.ft_basis) {
    out.push_back({y * p.alpha - p.alpha * y, y * p.beta - p.beta * y});
  }
  return out;
}

}  // namespace hkale
