#include "hkale/moment.hpp"

#include <doctest.h>

#include <random>

using namespace hkale;

namespace {

RVector normal_vector(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> d;
  RVector v(n);
  for (int k = 0; k < n; ++k) v(k) = d(rng);
  return v;
}

CMatrix random_unitary(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> d;
  CMatrix a(n, n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) a(r, c) = {d(rng), d(rng)};
  }
  Eigen::HouseholderQR<CMatrix> qr(a);
  return qr.householderQ();
}

// (α, β) for Γ = Z/2 in the isotypic basis, where R(−1) = diag(1, −1)
MatrixPair a1_pair(Complex a, Complex b, Complex c, Complex d) {
  MatrixPair p = MatrixPair::zero(2);
  p.alpha(0, 1) = a;
  p.alpha(1, 0) = b;
  p.beta(0, 1) = c;
  p.beta(1, 0) = d;
  return p;
}

}  // namespace

TEST_SUITE("flat_module") {
  TEST_CASE("dim M = 4|Γ| and the dense projector agrees") {
    for (auto [f, k] : std::vector<std::pair<Family, int>>{
             {Family::A, 1}, {Family::A, 2}, {Family::A, 3}, {Family::A, 4}, {Family::D, 2},
             {Family::D, 3}, {Family::D, 4}, {Family::E6, 0}}) {
      const FlatModule m = FlatModule::build({f, k});
      CAPTURE(m.group.label.str());
      CHECK(m.real_dim() == 4 * m.order());
      CHECK(m.basis.orthonormality_defect() < 1e-10);
      if (m.order() <= 24) {
        CHECK(2 * dense_invariant_rank(m.group, regular_representation(m.group)) == m.real_dim());
      }
    }
  }

  TEST_CASE("basis vectors are invariant in the permutation basis too") {
    const FlatModule m = FlatModule::build({Family::D, 2});
    const AdaptedRep perm = permutation_rep(m.group, regular_representation(m.group));
    double worst = 0.0, worst_adapted = 0.0;
    for (int k = 0; k < m.real_dim(); ++k) {
      const MatrixPair v = m.basis.vector(k);
      worst_adapted = std::max(worst_adapted, membership_defect(v, m.rep));
      worst = std::max(worst, membership_defect(to_permutation_basis(v, m.mckay.isotypic), perm));
    }
    CHECK(worst_adapted < 1e-12);
    CHECK(worst < 1e-9);
  }

  TEST_CASE("coordinates invert assemble; change of basis round-trips") {
    std::mt19937_64 rng(3);
    const FlatModule m = FlatModule::build({Family::A, 3});
    const RVector c = normal_vector(m.real_dim(), rng);
    const MatrixPair p = m.basis.assemble(c);
    CHECK((m.basis.coordinates(p) - c).norm() < 1e-12);
    CHECK(std::abs(norm(p) - c.norm()) < 1e-12);
    const MatrixPair back = from_permutation_basis(to_permutation_basis(p, m.mckay.isotypic), m.mckay.isotypic);
    CHECK(norm(back - p) < 1e-12);
  }

  TEST_CASE("A1 invariant pairs are exactly the off-diagonal ones") {
    const FlatModule m = FlatModule::build({Family::A, 1});
    CHECK(membership_defect(a1_pair(1.0, 2.0, kI, -3.0), m.rep) < 1e-14);
    MatrixPair bad = MatrixPair::zero(2);
    bad.alpha(0, 0) = 1.0;
    CHECK(membership_defect(bad, m.rep) > 0.5);
    CHECK_THROWS_AS(moment(bad, m.rep), Error);
  }

  TEST_CASE("quaternion relations on pairs") {
    std::mt19937_64 rng(5);
    const FlatModule m = FlatModule::build({Family::D, 2});
    const MatrixPair p = m.basis.assemble(normal_vector(m.real_dim(), rng));
    const MatrixPair q = m.basis.assemble(normal_vector(m.real_dim(), rng));
    CHECK(norm(quaternion_I(quaternion_I(p)) + p) < 1e-13);
    CHECK(norm(quaternion_J(quaternion_J(p)) + p) < 1e-13);
    CHECK(norm(quaternion_K(quaternion_K(p)) + p) < 1e-13);
    CHECK(norm(quaternion_I(quaternion_J(p)) - quaternion_K(p)) < 1e-13);
    CHECK(norm(quaternion_J(quaternion_I(p)) + quaternion_K(p)) < 1e-13);
    // I, J, K preserve M and are isometries
    CHECK(membership_defect(quaternion_I(p), m.rep) < 1e-12);
    CHECK(membership_defect(quaternion_J(p), m.rep) < 1e-12);
    CHECK(membership_defect(quaternion_K(p), m.rep) < 1e-12);
    CHECK(std::abs(real_pairing(quaternion_J(p), quaternion_J(q)) - real_pairing(p, q)) < 1e-12);
    CHECK(std::abs(real_pairing(quaternion_K(p), quaternion_K(q)) - real_pairing(p, q)) < 1e-12);
  }

  TEST_CASE("gauge algebra shapes") {
    for (auto [f, k] : std::vector<std::pair<Family, int>>{{Family::A, 2}, {Family::D, 3}, {Family::E6, 0}}) {
      const FlatModule m = FlatModule::build({f, k});
      const GaugeAlgebra& alg = m.alg;
      CHECK(alg.dim_f() == m.order());
      CHECK(alg.dim_ft() == m.order() - 1);
      CHECK(static_cast<int>(alg.z_basis.size()) == m.mckay.r);
      CMatrix sum = CMatrix::Zero(m.order(), m.order());
      for (const auto& c : alg.center) sum += c;
      CHECK((sum - kI * CMatrix::Identity(m.order(), m.order())).norm() < 1e-14);
      for (int a = 0; a < alg.dim_ft(); ++a) {
        const CMatrix& y = alg.ft_basis[a];
        CHECK((y + y.adjoint()).norm() < 1e-14);
        CHECK(std::abs(y.trace()) < 1e-12);
        CHECK(commutator_defect(y, m.rep) < 1e-10);
        for (int b = 0; b < alg.dim_ft(); b += 5) {
          const double ip = (y.array() * alg.ft_basis[b].conjugate().array()).sum().real();
          CHECK(std::abs(ip - (a == b ? 1.0 : 0.0)) < 1e-12);
        }
      }
      for (const auto& z : alg.z_basis) {
        double s = 0.0;
        for (int i = 0; i < z.size(); ++i) s += z(i) * alg.marks[i] * alg.marks[i];
        CHECK(std::abs(s) < 1e-12);
      }
    }
  }

  TEST_CASE("F preserves M and non-commuting unitaries are rejected") {
    std::mt19937_64 rng(11);
    const FlatModule m = FlatModule::build({Family::D, 2});
    const MatrixPair p = m.basis.assemble(normal_vector(m.real_dim(), rng));
    CMatrix y = CMatrix::Zero(m.order(), m.order());
    for (const auto& b : m.alg.f_basis) y += std::normal_distribution<double>()(rng) * b;
    const CMatrix f = unitary_exp(y);
    CHECK((f * f.adjoint() - CMatrix::Identity(f.rows(), f.cols())).norm() < 1e-12);
    const MatrixPair fp = f_action(f, p, m.rep);
    CHECK(membership_defect(fp, m.rep) < 1e-10);
    CHECK(std::abs(norm(fp) - norm(p)) < 1e-12);
    try {
      f_action(random_unitary(m.order(), rng), p, m.rep);
      FAIL("expected NotInF");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::NotInF);
    }
  }

  TEST_CASE("unitary_exp matches the series on a small element") {
    CMatrix y(2, 2);
    y << Complex(0, 0.3), Complex(0.1, 0.2), Complex(-0.1, 0.2), Complex(0, -0.4);
    CMatrix series = CMatrix::Identity(2, 2), term = CMatrix::Identity(2, 2);
    for (int n = 1; n < 30; ++n) {
      term = term * y / double(n);
      series += term;
    }
    CHECK((unitary_exp(y) - series).norm() < 1e-14);
  }

  TEST_CASE("orbit directions lie in M") {
    std::mt19937_64 rng(2);
    const FlatModule m = FlatModule::build({Family::A, 3});
    const MatrixPair p = m.basis.assemble(normal_vector(m.real_dim(), rng));
    for (const auto& d : orbit_directions(p, m.alg)) CHECK(membership_defect(d, m.rep) < 1e-12);
  }
}
