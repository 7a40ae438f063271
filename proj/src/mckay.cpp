#include "hkale/mckay.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <set>

namespace hkale {

CMatrix RegularRep::matrix(int g) const {
  const int n = dim();
  CMatrix m = CMatrix::Zero(n, n);
  for (int h = 0; h < n; ++h) m(perm[g][h], h) = 1.0;
  return m;
}

int RegularRep::character(int g) const {
  int fixed = 0;
  for (int h = 0; h < dim(); ++h) fixed += perm[g][h] == h ? 1 : 0;
  return fixed;
}

RegularRep regular_representation(const FiniteSubgroup& g) {
  RegularRep rep;
  const int n = g.order();
  rep.perm.assign(n, std::vector<int>(n));
  for (int a = 0; a < n; ++a) {
    for (int h = 0; h < n; ++h) rep.perm[a][h] = g.mul(a, h);
  }
  return rep;
}

int IsotypicDecomposition::total_dim() const {
  int s = 0;
  for (int d : dims) s += d * d;
  return s;
}

CMatrix IsotypicDecomposition::block_matrix(int g) const {
  const int n = total_dim();
  CMatrix m = CMatrix::Zero(n, n);
  for (int i = 0; i < irrep_count(); ++i) {
    const int d = dims[i];
    for (int a = 0; a < d; ++a) {
      m.block(offsets[i] + a * d, offsets[i] + a * d, d, d) = irreps[i][g];
    }
  }
  return m;
}

namespace {

// V* R(γ) V for a column block V, using the permutation structure.
CMatrix restrict_rep(const RegularRep& rep, int g, const CMatrix& v) {
  CMatrix rv(v.rows(), v.cols());
  for (int h = 0; h < rep.dim(); ++h) rv.row(rep.perm[g][h]) = v.row(h);
  return v.adjoint() * rv;
}

struct Cluster {
  CMatrix basis;
  Eigen::VectorXcd character;
};

}  // namespace

IsotypicDecomposition isotypic_decompose(const FiniteSubgroup& g, const RegularRep& rep,
                                         const Tolerances& tol, unsigned seed) {
  const int n = g.order();

  // Random Hermitian element of the right-translation algebra.
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<Complex> coeff(n);
  std::vector<bool> set(n, false);
  for (int a = 0; a < n; ++a) {
    if (set[a]) continue;
    const int b = g.inverse[a];
    if (a == b) {
      coeff[a] = normal(rng);
    } else {
      coeff[a] = Complex{normal(rng), normal(rng)};
      coeff[b] = std::conj(coeff[a]);
      set[b] = true;
    }
    set[a] = true;
  }
  CMatrix herm = CMatrix::Zero(n, n);
  for (int a = 0; a < n; ++a) {
    const int ainv = g.inverse[a];
    for (int h = 0; h < n; ++h) herm(g.mul(h, ainv), h) += coeff[a];
  }

  Eigen::SelfAdjointEigenSolver<CMatrix> eig(herm);
  const Eigen::VectorXd& values = eig.eigenvalues();
  const double scale = std::max(1.0, values.cwiseAbs().maxCoeff());

  std::vector<Cluster> clusters;
  for (int start = 0; start < n;) {
    int end = start + 1;
    while (end < n && values(end) - values(end - 1) <= 1e-7 * scale) ++end;
    Cluster c;
    c.basis = eig.eigenvectors().middleCols(start, end - start);
    c.character.resize(n);
    for (int a = 0; a < n; ++a) c.character(a) = restrict_rep(rep, a, c.basis).trace();
    const double norm = c.character.squaredNorm() / n;
    if (std::abs(norm - 1.0) > 1e-6) {
      throw Error(ErrorKind::DecompositionFailed,
                  "commutant eigenspace is not irreducible (character norm " +
                      std::to_string(norm) + ")");
    }
    clusters.push_back(std::move(c));
    start = end;
  }

  // Group eigenspaces by character.
  std::vector<std::vector<int>> types;
  for (int c = 0; c < static_cast<int>(clusters.size()); ++c) {
    bool placed = false;
    for (auto& t : types) {
      if ((clusters[t.front()].character - clusters[c].character).norm() <= 1e-6) {
        t.push_back(c);
        placed = true;
        break;
      }
    }
    if (!placed) types.push_back({c});
  }

  // Trivial first, then by dimension, ties by discovery order.
  auto dim_of = [&](const std::vector<int>& t) { return clusters[t.front()].basis.cols(); };
  auto is_trivial = [&](const std::vector<int>& t) {
    return (clusters[t.front()].character - Eigen::VectorXcd::Ones(n)).norm() <= 1e-6;
  };
  std::stable_sort(types.begin(), types.end(), [&](const auto& x, const auto& y) {
    if (is_trivial(x) != is_trivial(y)) return is_trivial(x);
    return dim_of(x) < dim_of(y);
  });

  IsotypicDecomposition iso;
  int squares = 0;
  for (const auto& t : types) {
    const int d = static_cast<int>(dim_of(t));
    if (static_cast<int>(t.size()) != d) {
      throw Error(ErrorKind::DecompositionFailed,
                  "irrep of dimension " + std::to_string(d) + " occurs " +
                      std::to_string(t.size()) + " times");
    }
    squares += d * d;
  }
  if (squares != n || types.empty() || !is_trivial(types.front())) {
    throw Error(ErrorKind::DecompositionFailed, "sum of squared dimensions != |Γ|");
  }

  iso.change_of_basis = CMatrix::Zero(n, n);
  iso.characters = CMatrix::Zero(static_cast<int>(types.size()), n);
  int offset = 0;
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (int i = 0; i < static_cast<int>(types.size()); ++i) {
    const auto& t = types[i];
    const int d = static_cast<int>(t.size());
    iso.dims.push_back(d);
    iso.offsets.push_back(offset);
    const CMatrix& ref = clusters[t.front()].basis;
    std::vector<CMatrix> rho(n);
    for (int a = 0; a < n; ++a) rho[a] = restrict_rep(rep, a, ref);
    iso.characters.row(i) = clusters[t.front()].character.transpose();

    for (int copy = 0; copy < d; ++copy) {
      const CMatrix& v = clusters[t[copy]].basis;
      CMatrix aligned = v;
      if (copy > 0) {
        // Schur intertwiner A with σ(γ) A = A ρ(γ), scaled to a unitary.
        CMatrix x(d, d);
        for (int p = 0; p < d; ++p) {
          for (int q = 0; q < d; ++q) x(p, q) = Complex{uni(rng), uni(rng)};
        }
        CMatrix inter = CMatrix::Zero(d, d);
        for (int a = 0; a < n; ++a) {
          inter += restrict_rep(rep, a, v) * x * rho[a].adjoint();
        }
        const double c = std::sqrt((inter.adjoint() * inter).trace().real() / d);
        if (c < 1e-8) {
          throw Error(ErrorKind::DecompositionFailed, "degenerate intertwiner");
        }
        aligned = v * (inter / c);
      }
      iso.change_of_basis.middleCols(offset + copy * d, d) = aligned;
    }
    iso.irreps.push_back(std::move(rho));
    offset += d * d;
  }

  const CMatrix& u = iso.change_of_basis;
  double err = (u.adjoint() * u - CMatrix::Identity(n, n)).norm();
  for (int a = 0; a < n; ++a) {
    err = std::max(err, (u.adjoint() * rep.matrix(a) * u - iso.block_matrix(a)).norm());
  }
  iso.reconstruction_error = err;
  if (err > tol.isotypic_reconstruction) {
    throw Error(ErrorKind::DecompositionFailed,
                "reconstruction error " + std::to_string(err) + " above tolerance");
  }
  return iso;
}

std::string DynkinLabel::str() const {
  const char* t = type == AffineType::A ? "A" : type == AffineType::D ? "D" : "E";
  return std::string(t) + "~" + std::to_string(rank);
}

IMatrix affine_template(const DynkinLabel& label) {
  const int r = label.rank;
  IMatrix a = IMatrix::Zero(r + 1, r + 1);
  auto edge = [&](int x, int y) {
    a(x, y) += 1;
    a(y, x) += 1;
  };
  switch (label.type) {
    case AffineType::A:
      if (r == 1) {
        edge(0, 1);
        edge(0, 1);
      } else {
        for (int i = 0; i <= r; ++i) edge(i, (i + 1) % (r + 1));
      }
      break;
    case AffineType::D:
      // forks 0,1 -> 2 and r-1,r -> r-2 joined by a chain
      edge(0, 2);
      edge(1, 2);
      for (int i = 2; i < r - 2; ++i) edge(i, i + 1);
      edge(r - 2, r - 1);
      edge(r - 2, r);
      break;
    case AffineType::E: {
      // star with arms given by node counts away from the centre
      std::vector<int> arms = r == 6 ? std::vector<int>{2, 2, 2}
                              : r == 7 ? std::vector<int>{1, 3, 3}
                                       : std::vector<int>{1, 2, 5};
      int next = 1;
      for (int len : arms) {
        int prev = 0;
        for (int s = 0; s < len; ++s) {
          edge(prev, next);
          prev = next++;
        }
      }
      break;
    }
  }
  return a;
}

bool graphs_isomorphic(const IMatrix& a, const IMatrix& b) {
  const int n = static_cast<int>(a.rows());
  if (b.rows() != n) return false;
  auto degrees = [](const IMatrix& m) {
    std::vector<int> d(m.rows());
    for (int i = 0; i < m.rows(); ++i) d[i] = m.row(i).sum();
    return d;
  };
  const auto da = degrees(a), db = degrees(b);
  {
    auto sa = da, sb = db;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    if (sa != sb) return false;
  }
  std::vector<int> map(n, -1);
  std::vector<bool> used(n, false);
  std::function<bool(int)> extend = [&](int i) {
    if (i == n) return true;
    for (int j = 0; j < n; ++j) {
      if (used[j] || da[i] != db[j] || a(i, i) != b(j, j)) continue;
      bool ok = true;
      for (int p = 0; p < i && ok; ++p) ok = a(i, p) == b(j, map[p]);
      if (!ok) continue;
      map[i] = j;
      used[j] = true;
      if (extend(i + 1)) return true;
      used[j] = false;
    }
    return false;
  };
  return extend(0);
}

std::vector<std::vector<int>> enumerate_roots(const IMatrix& cartan) {
  const int r = static_cast<int>(cartan.rows());
  std::set<std::vector<int>> roots;
  std::vector<std::vector<int>> frontier;
  for (int i = 0; i < r; ++i) {
    std::vector<int> e(r, 0);
    e[i] = 1;
    if (roots.insert(e).second) frontier.push_back(e);
  }
  while (!frontier.empty()) {
    std::vector<std::vector<int>> next;
    for (const auto& v : frontier) {
      for (int j = 0; j < r; ++j) {
        int pairing = 0;
        for (int i = 0; i < r; ++i) pairing += v[i] * cartan(i, j);
        std::vector<int> w = v;
        w[j] -= pairing;
        if (roots.insert(w).second) next.push_back(std::move(w));
      }
    }
    frontier = std::move(next);
  }
  return {roots.begin(), roots.end()};
}

int expected_root_count(const DynkinLabel& label) {
  const int r = label.rank;
  switch (label.type) {
    case AffineType::A: return r * (r + 1);
    case AffineType::D: return 2 * r * (r - 1);
    case AffineType::E: return r == 6 ? 72 : r == 7 ? 126 : 240;
  }
  return 0;
}

McKayData mckay_graph(const FiniteSubgroup& g, const IsotypicDecomposition& iso,
                      const Tolerances& tol) {
  const int n = g.order();
  const int m = iso.irrep_count();
  McKayData data;
  data.r = m - 1;
  data.marks = iso.dims;
  data.adjacency = IMatrix::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      Complex s{0.0, 0.0};
      for (int a = 0; a < n; ++a) {
        s += g.elements[a].trace().real() * iso.characters(i, a) * std::conj(iso.characters(j, a));
      }
      s /= static_cast<double>(n);
      const double rounded = std::round(s.real());
      const double residual = std::abs(s - Complex{rounded, 0.0});
      data.rounding_residual = std::max(data.rounding_residual, residual);
      if (residual > tol.mckay_rounding) {
        throw Error(ErrorKind::DecompositionFailed,
                    "non-integer McKay multiplicity (residual " + std::to_string(residual) + ")");
      }
      data.adjacency(i, j) = static_cast<int>(rounded);
    }
  }

  bool matched = false;
  std::vector<DynkinLabel> candidates = {{AffineType::A, data.r}};
  if (data.r >= 4) candidates.push_back({AffineType::D, data.r});
  if (data.r >= 6 && data.r <= 8) candidates.push_back({AffineType::E, data.r});
  for (const auto& c : candidates) {
    if (graphs_isomorphic(data.adjacency, affine_template(c))) {
      data.label = c;
      matched = true;
      break;
    }
  }
  if (!matched) {
    throw Error(ErrorKind::NotADE, "McKay graph of " + g.label.str() + " matches no template");
  }

  data.cartan_ext = 2 * IMatrix::Identity(m, m) - data.adjacency;
  data.cartan = data.cartan_ext.bottomRightCorner(data.r, data.r);
  data.roots = enumerate_roots(data.cartan);
  data.isotypic = iso;
  return data;
}

McKayData mckay_graph(const FiniteSubgroup& g, const Tolerances& tol) {
  const RegularRep rep = regular_representation(g);
  return mckay_graph(g, isotypic_decompose(g, rep, tol), tol);
}

}  // namespace hkale
