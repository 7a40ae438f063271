#include "hkale/gauge_bridge.hpp"

#include "hkale/moment.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace hkale {

namespace {

std::uint64_t fingerprint_of(const SphereSample& s) {
  std::uint64_t h = fnv1a(strategy_name(s.strategy));
  for (const auto& p : s.points) h = fnv1a(p.data(), sizeof(Complex) * 2, h);
  for (double w : s.weights) h = fnv1a(&w, sizeof w, h);
  return h;
}

void normalize(SphereSample& s) {
  double m1 = 0.0;
  for (const auto& p : s.points) m1 += std::norm(p(0));
  s.weights.assign(s.points.size(), 1.0 / m1);
  s.fingerprint = fingerprint_of(s);
}

void require_same_sample(const SectionSample& sec, const SphereSample& s) {
  if (sec.size() != s.size() || sec.fingerprint != s.fingerprint) {
    throw Error(ErrorKind::SampleMismatch, "section was tabulated on a different sample");
  }
}

Complex pairing(const CMatrix& a, const CMatrix& b) {
  return (a.array() * b.conjugate().array()).sum();
}

}  // namespace

std::string strategy_name(SampleStrategy s) {
  return s == SampleStrategy::Design ? "design" : "uniform-random";
}

SampleStrategy parse_strategy(const std::string& s) {
  if (s == "design") return SampleStrategy::Design;
  if (s == "uniform-random" || s == "random") return SampleStrategy::UniformRandom;
  throw Error(ErrorKind::InvalidArgument, "unknown sample strategy '" + s + "'");
}

SphereSample build_sphere_sample(int n, SampleStrategy strategy, std::uint64_t seed) {
  if (n < 100) {
    throw Error(ErrorKind::InvalidArgument, "sample size must be at least 100");
  }
  const int base = (n + 1) / 2;
  std::vector<Point> seeds;
  seeds.reserve(base);
  if (strategy == SampleStrategy::UniformRandom) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    while (static_cast<int>(seeds.size()) < base) {
      Eigen::Vector4d v;
      for (int c = 0; c < 4; ++c) v(c) = normal(rng);
      const double r = v.norm();
      if (r < 1e-12) continue;
      v /= r;
      seeds.emplace_back(Complex(v(0), v(1)), Complex(v(2), v(3)));
    }
  } else {
    // spherical Fibonacci lattice on S², lifted through the Hopf map
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int k = 0; k < base; ++k) {
      const double x3 = 1.0 - (2.0 * k + 1.0) / base;
      const double r = std::sqrt(std::max(0.0, 1.0 - x3 * x3));
      const double phi = golden * k;
      const double z1 = std::sqrt((1.0 + x3) / 2.0);
      const Complex z2 = Complex(r * std::cos(phi), -r * std::sin(phi)) / (2.0 * z1);
      seeds.emplace_back(Complex(z1, 0.0), z2);
    }
  }

  SphereSample s;
  s.strategy = strategy;
  for (int k = 0; k < base; ++k) {
    s.points.push_back(seeds[k]);
    s.points.push_back(antipode(seeds[k]));
    s.tau.push_back(2 * k + 1);
    s.tau.push_back(2 * k);
    // τ(p) = q and τ(q) = τ²(p) = −p
    s.tau_sign.push_back(1);
    s.tau_sign.push_back(-1);
  }
  normalize(s);
  return s;
}

SphereSample close_under_group(const SphereSample& s, const FiniteSubgroup& g) {
  if (s.group_order != 1) {
    throw Error(ErrorKind::InvalidArgument, "sample is already group-closed");
  }
  const int order = g.order();
  SphereSample out;
  out.strategy = s.strategy;
  out.group_order = order;
  for (int k = 0; k < s.size(); ++k) {
    for (int e = 0; e < order; ++e) {
      out.points.push_back(right_act(s.points[k], g.elements[e]));
      // τ(pγ) = τ(p)γ
      out.tau.push_back(s.tau[k] * order + e);
      out.tau_sign.push_back(s.tau_sign[k]);
    }
  }
  normalize(out);
  return out;
}

std::vector<int> group_relabeling(const SphereSample& s, const FiniteSubgroup& g, int gamma) {
  if (s.group_order != g.order()) {
    throw Error(ErrorKind::SampleMismatch, "sample is not closed under this group");
  }
  const int order = g.order();
  std::vector<int> map(s.size());
  for (int k = 0; k < s.size(); ++k) map[k] = (k / order) * order + g.mul(k % order, gamma);
  return map;
}

SampleChecks check_sample(const SphereSample& s) {
  SampleChecks c;
  double m1 = 0.0, m2 = 0.0;
  Complex odd = 0.0;
  for (int k = 0; k < s.size(); ++k) {
    const Point& p = s.points[k];
    m1 += s.weights[k] * std::norm(p(0));
    m2 += s.weights[k] * std::norm(p(1));
    odd += s.weights[k] * p(0) * std::conj(p(1));
    c.unit_defect = std::max(c.unit_defect, std::abs(p.squaredNorm() - 1.0));
    const Point expect = static_cast<double>(s.tau_sign[k]) * s.points[s.tau[k]];
    c.tau_defect = std::max(c.tau_defect, (antipode(p) - expect).norm());
  }
  c.normalization = std::abs(m1 - 1.0);
  c.balance = std::abs(m1 - m2);
  c.odd_moment = std::abs(odd);
  c.odd_moment_tolerance = s.strategy == SampleStrategy::Design
                               ? 1e-10
                               : 3.0 / std::sqrt(static_cast<double>(s.size()));
  return c;
}

SectionSample section_values(const MatrixPair& p, const SphereSample& s) {
  SectionSample sec;
  sec.pair = p;
  sec.fingerprint = s.fingerprint;
  sec.values.reserve(s.points.size());
  for (const auto& z : s.points) sec.values.push_back(evaluate_section(p, z));
  return sec;
}

SectionSample section_from_pair(const MatrixPair& p, const SphereSample& s, const AdaptedRep& rep,
                                const Tolerances& tol) {
  const double defect = membership_defect(p, rep);
  if (defect > tol.membership) {
    throw Error(ErrorKind::NotInvariant,
                "pair fails Γ-invariance (defect " + std::to_string(defect) + ")");
  }
  return section_values(p, s);
}

SectionSample j_on_section(const SectionSample& sec, const SphereSample& s) {
  require_same_sample(sec, s);
  SectionSample out;
  out.pair = quaternion_J(sec.pair);
  out.fingerprint = sec.fingerprint;
  out.values.reserve(sec.values.size());
  // λ(τ p_k) = sign_k λ(p_τ(k)) by linearity
  for (int k = 0; k < sec.size(); ++k) {
    out.values.push_back(-static_cast<double>(s.tau_sign[k]) * sec.values[s.tau[k]].adjoint());
  }
  return out;
}

QuadratureForms quadrature_forms(const SectionSample& a, const SectionSample& b,
                                 const SphereSample& s) {
  require_same_sample(a, s);
  require_same_sample(b, s);
  const SectionSample ja = j_on_section(a, s);
  QuadratureForms f;
  for (int k = 0; k < s.size(); ++k) {
    const double w = s.weights[k];
    const Complex h = pairing(a.values[k], b.values[k]);
    const Complex hj = pairing(ja.values[k], b.values[k]);
    f.g += w * h.real();
    f.omega1 -= w * h.imag();
    f.omega2 += w * hj.real();
    f.omega3 -= w * hj.imag();
  }
  return f;
}

QuadratureForms flat_forms(const MatrixPair& p, const MatrixPair& q) {
  const Complex h = hermitian_pairing(p, q);
  const Complex hj = hermitian_pairing(quaternion_J(p), q);
  return {-h.imag(), hj.real(), -hj.imag(), h.real()};
}

ReducedMoment reduced_moment_integrands(const SectionSample& sec, const SphereSample& s) {
  const SectionSample js = j_on_section(sec, s);
  const int n = sec.pair.dim();
  const Complex quarter_i{0.0, 0.25};
  std::vector<CMatrix> f2, f3;
  f2.reserve(sec.values.size());
  f3.reserve(sec.values.size());
  ReducedMoment r;
  r.integral2 = CMatrix::Zero(n, n);
  r.integral3 = CMatrix::Zero(n, n);
  double total = 0.0;
  for (int k = 0; k < sec.size(); ++k) {
    const CMatrix& th = sec.values[k];
    const CMatrix& jt = js.values[k];
    const CMatrix a = commutator<double>(jt, th.adjoint());
    const CMatrix b = commutator<double>(th, jt.adjoint());
    f2.push_back(-0.25 * (a - b));
    f3.push_back(-quarter_i * (a + b));
    r.integral2 += s.weights[k] * f2.back();
    r.integral3 += s.weights[k] * f3.back();
    total += s.weights[k];
  }
  const CMatrix mean2 = r.integral2 / total;
  const CMatrix mean3 = r.integral3 / total;
  for (int k = 0; k < sec.size(); ++k) {
    r.constancy2 = std::max(r.constancy2, (f2[k] - mean2).norm());
    r.constancy3 = std::max(r.constancy3, (f3[k] - mean3).norm());
  }
  const auto mu = raw_moment(sec.pair);
  r.defect2_same_sign = (r.integral2 - mu[1]).norm();
  r.defect2_flipped = (r.integral2 + mu[1]).norm();
  r.defect3_same_sign = (r.integral3 - mu[2]).norm();
  r.defect3_flipped = (r.integral3 + mu[2]).norm();
  return r;
}

Mu1Reduction mu1_reduction_check(const SectionSample& sec, const SphereSample& s) {
  require_same_sample(sec, s);
  const int n = sec.pair.dim();
  const Complex half_i{0.0, 0.5};
  Mu1Reduction r;
  r.integral = CMatrix::Zero(n, n);
  for (int k = 0; k < sec.size(); ++k) {
    const CMatrix& th = sec.values[k];
    r.integral -= s.weights[k] * half_i * commutator<double>(th, th.adjoint());
  }
  const CMatrix mu1 = raw_moment(sec.pair)[0];
  r.defect_same_sign = (r.integral - mu1).norm();
  r.defect_flipped = (r.integral + mu1).norm();
  return r;
}

double quadrature_tolerance(const SphereSample&) { return 1e-10; }

}  // namespace hkale
