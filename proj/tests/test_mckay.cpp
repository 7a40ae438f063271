#include "hkale/mckay.hpp"

#include <doctest.h>

#include <algorithm>

using namespace hkale;

namespace {

struct Expected {
  Family family;
  int k;
  std::vector<int> marks;
  std::string dynkin;
  int roots;
};

const std::vector<Expected>& table() {
  static const std::vector<Expected> t = {
      {Family::A, 1, {1, 1}, "A~1", 2},
      {Family::A, 2, {1, 1, 1}, "A~2", 6},
      {Family::A, 3, {1, 1, 1, 1}, "A~3", 12},
      {Family::A, 4, {1, 1, 1, 1, 1}, "A~4", 20},
      {Family::D, 2, {1, 1, 1, 1, 2}, "D~4", 24},
      {Family::D, 3, {1, 1, 1, 1, 2, 2}, "D~5", 40},
      {Family::D, 4, {1, 1, 1, 1, 2, 2, 2}, "D~6", 60},
      {Family::E6, 0, {1, 1, 1, 2, 2, 2, 3}, "E~6", 72},
  };
  return t;
}

}  // namespace

TEST_SUITE("mckay") {
  TEST_CASE("marks, labels and root counts") {
    for (const auto& e : table()) {
      CAPTURE(e.dynkin);
      const FiniteSubgroup g = build_group(e.family, e.k);
      const McKayData m = mckay_graph(g);
      CHECK(m.marks == e.marks);
      CHECK(m.label.str() == e.dynkin);
      CHECK(static_cast<int>(m.roots.size()) == e.roots);
      CHECK(expected_root_count(m.label) == e.roots);
      int sum = 0;
      for (int n : m.marks) sum += n * n;
      CHECK(sum == g.order());
      CHECK(m.r + 1 == static_cast<int>(g.conj_classes.size()));
    }
  }

  TEST_CASE("adjacency matches the affine template and the Cartan null vector") {
    for (const auto& e : table()) {
      const McKayData m = mckay_graph(build_group(e.family, e.k));
      CHECK(graphs_isomorphic(m.adjacency, affine_template(m.label)));
      const Eigen::VectorXi n = Eigen::Map<const Eigen::VectorXi>(m.marks.data(), m.marks.size());
      CHECK((m.cartan_ext * n).isZero());
      CHECK(m.rounding_residual <= 1e-6);
      // node 0 is the trivial representation
      CHECK(m.marks[0] == 1);
      // finite Cartan matrix is the extended one without node 0
      CHECK(m.cartan == m.cartan_ext.bottomRightCorner(m.r, m.r));
    }
  }

  TEST_CASE("Q ⊗ R_i decomposes as Σ a_ij R_j pointwise on characters") {
    for (const auto& e : table()) {
      const FiniteSubgroup g = build_group(e.family, e.k);
      const McKayData m = mckay_graph(g);
      const auto& chi = m.isotypic.characters;
      for (int i = 0; i <= m.r; ++i) {
        for (int x = 0; x < g.order(); ++x) {
          Complex rhs = 0.0;
          for (int j = 0; j <= m.r; ++j) rhs += static_cast<double>(m.adjacency(i, j)) * chi(j, x);
          CHECK(std::abs(g.elements[x].trace() * chi(i, x) - rhs) < 1e-9);
        }
      }
    }
  }

  TEST_CASE("character orthogonality") {
    const FiniteSubgroup g = build_group(Family::E6, 0);
    const McKayData m = mckay_graph(g);
    const CMatrix gram = m.isotypic.characters * m.isotypic.characters.adjoint() / double(g.order());
    CHECK((gram - CMatrix::Identity(gram.rows(), gram.cols())).norm() < 1e-10);
  }

  TEST_CASE("isotypic change of basis block-diagonalizes R") {
    const FiniteSubgroup g = build_group(Family::D, 3);
    const RegularRep rep = regular_representation(g);
    const IsotypicDecomposition iso = isotypic_decompose(g, rep);
    const CMatrix& u = iso.change_of_basis;
    CHECK((u.adjoint() * u - CMatrix::Identity(u.rows(), u.cols())).norm() < 1e-10);
    for (int x = 0; x < g.order(); ++x) {
      CHECK((u.adjoint() * rep.matrix(x) * u - iso.block_matrix(x)).norm() < 1e-8);
    }
    // each irrep is a unitary homomorphism
    for (int i = 0; i < iso.irrep_count(); ++i) {
      for (int a = 0; a < g.order(); ++a) {
        const CMatrix& ra = iso.irreps[i][a];
        CHECK((ra * ra.adjoint() - CMatrix::Identity(ra.rows(), ra.cols())).norm() < 1e-10);
        for (int b = 0; b < g.order(); b += 3) {
          CHECK((ra * iso.irreps[i][b] - iso.irreps[i][g.mul(a, b)]).norm() < 1e-9);
        }
      }
    }
    CHECK(iso.total_dim() == g.order());
  }

  TEST_CASE("regular representation") {
    const FiniteSubgroup g = build_group(Family::A, 3);
    const RegularRep rep = regular_representation(g);
    CHECK(rep.character(0) == g.order());
    for (int x = 1; x < g.order(); ++x) CHECK(rep.character(x) == 0);
    CHECK((rep.matrix(1) * rep.matrix(2) - rep.matrix(g.mul(1, 2))).norm() == 0.0);
  }

  TEST_CASE("root enumeration") {
    IMatrix a2(2, 2);
    a2 << 2, -1, -1, 2;
    const auto roots = enumerate_roots(a2);
    CHECK(roots.size() == 6);
    CHECK(std::find(roots.begin(), roots.end(), std::vector<int>{1, 1}) != roots.end());
    CHECK(std::find(roots.begin(), roots.end(), std::vector<int>{-1, -1}) != roots.end());
    // every root has Cartan norm 2
    for (const auto& r : roots) {
      const Eigen::VectorXi v = Eigen::Map<const Eigen::VectorXi>(r.data(), 2);
      CHECK(v.dot(a2 * v) == 2);
    }
  }

  TEST_CASE("graph isomorphism rejects different graphs") {
    IMatrix path = IMatrix::Zero(3, 3), tri = IMatrix::Ones(3, 3) - IMatrix::Identity(3, 3);
    path(0, 1) = path(1, 0) = path(1, 2) = path(2, 1) = 1;
    CHECK_FALSE(graphs_isomorphic(path, tri));
    IMatrix relabeled = IMatrix::Zero(3, 3);
    relabeled(0, 2) = relabeled(2, 0) = relabeled(2, 1) = relabeled(1, 2) = 1;
    CHECK(graphs_isomorphic(path, relabeled));
    CHECK(affine_template({AffineType::E, 8}).rows() == 9);
    CHECK(affine_template({AffineType::D, 4}).rows() == 5);
  }
}
