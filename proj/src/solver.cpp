#include "hkale/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace hkale {

namespace {

RVector residual_vector(const FlatModule& m, const RVector& coords, const RVector& target) {
  return moment_coordinates(moment_unchecked(m.basis.assemble(coords)), m.alg) - target;
}

RVector target_coordinates(const FlatModule& m, const Zeta& z, const SolverOptions& opts) {
  RVector t = zeta_coordinates(z, m.alg);
  return opts.flip_zeta_sign ? RVector(-t) : t;
}

}  // namespace

RVector seed_coordinates(const FlatModule& m, const Zeta& z, std::uint64_t seed,
                         const SolverOptions& opts) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  RVector c(m.real_dim());
  for (int k = 0; k < c.size(); ++k) c(k) = normal(rng);
  const double zn = zeta_coordinates(z, m.alg).norm();
  const double scale = zn > 0.0 ? opts.seed_scale * std::sqrt(zn) : opts.seed_scale;
  return c * (scale / c.norm());
}

SolveResult solve_moment(const FlatModule& m, const Zeta& z, const Seed& seed,
                         const SolverOptions& opts) {
  RVector x = std::holds_alternative<MatrixPair>(seed)
                  ? m.basis.coordinates(std::get<MatrixPair>(seed))
                  : seed_coordinates(m, z, std::get<std::uint64_t>(seed), opts);
  const RVector target = target_coordinates(m, z, opts);

  RVector r = residual_vector(m, x, target);
  double rn = r.norm();
  double lambda = opts.damping_init;
  int it = 0;
  for (; it < opts.max_iter && rn > opts.stop_residual; ++it) {
    const RMatrix jac = moment_jacobian(m.basis.assemble(x), m.basis, m.alg);
    // Minimum-norm damped step: δ = −Jᵀ(JJᵀ + λI)⁻¹ r.
    RMatrix normal = jac * jac.transpose();
    normal.diagonal().array() += lambda;
    const RVector step = -jac.transpose() * normal.ldlt().solve(r);
    const RVector trial = x + step;
    const RVector tr = residual_vector(m, trial, target);
    if (tr.norm() < rn) {
      x = trial;
      r = tr;
      rn = tr.norm();
      lambda *= opts.damping_decrease;
    } else {
      lambda *= opts.damping_increase;
      if (lambda > opts.damping_max) break;
    }
  }

  SolveResult res;
  res.coords = x;
  res.point = m.basis.assemble(x);
  res.residual = moment_residual(res.point, z, m.alg, opts.flip_zeta_sign);
  res.iterations = it;
  res.converged = res.residual <= opts.converged_residual;
  return res;
}

double moment_residual(const MatrixPair& p, const Zeta& z, const GaugeAlgebra& alg,
                       bool flip_zeta_sign) {
  const MomentValue v = moment_unchecked(p);
  double sq = 0.0;
  for (int a = 0; a < 3; ++a) {
    const CMatrix zm = zeta_matrix(z, a, alg);
    sq += (v.m[a] - (flip_zeta_sign ? CMatrix(-zm) : zm)).squaredNorm();
  }
  return std::sqrt(sq);
}

double stabilizer_check(const MatrixPair& p, const GaugeAlgebra& alg) {
  const auto dirs = orbit_directions(p, alg);
  const long n2 = p.alpha.size();
  RMatrix map(4 * n2, static_cast<long>(dirs.size()));
  for (int k = 0; k < static_cast<int>(dirs.size()); ++k) {
    Eigen::Map<const Eigen::VectorXcd> a(dirs[k].alpha.data(), n2);
    Eigen::Map<const Eigen::VectorXcd> b(dirs[k].beta.data(), n2);
    map.col(k) << a.real(), a.imag(), b.real(), b.imag();
  }
  if (map.cols() == 0) return std::numeric_limits<double>::infinity();
  Eigen::JacobiSVD<RMatrix> svd(map);
  return svd.singularValues().minCoeff();
}

DiscreteStabilizerReport discrete_stabilizer_check(const MatrixPair& p, const GaugeAlgebra& alg,
                                                   std::uint64_t seed, int samples,
                                                   double tolerance) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_int_distribution<int> order(2, 6);
  DiscreteStabilizerReport rep;
  rep.samples = samples;
  rep.min_displacement = std::numeric_limits<double>::infinity();
  if (alg.dim_ft() == 0) {
    rep.pass = true;
    return rep;
  }
  for (int s = 0; s < samples; ++s) {
    CMatrix y = CMatrix::Zero(p.dim(), p.dim());
    if (s % 2 == 0) {
      for (const auto& b : alg.ft_basis) y += normal(rng) * b;
    } else {
      // finite-order central phase on one isotypic block, off the scalars
      const int block = static_cast<int>(rng() % alg.center.size());
      y = (2.0 * std::numbers::pi / order(rng)) * alg.center[block];
    }
    const CMatrix f = unitary_exp(y);
    // scalars act trivially; skip draws that land in T
    const Complex phase = f.trace() / static_cast<double>(f.rows());
    if ((f - phase * CMatrix::Identity(f.rows(), f.cols())).norm() < 1e-9) continue;
    rep.min_displacement = std::min(rep.min_displacement, norm(conjugate_pair(f, p) - p));
  }
  rep.pass = rep.min_displacement > tolerance;
  return rep;
}

HorizontalFrame horizontal_frame(const MatrixPair& p, const FlatModule& m, const Tolerances& tol) {
  const RMatrix jac = moment_jacobian(p, m.basis, m.alg);
  const auto dirs = orbit_directions(p, m.alg);
  const int dim = m.real_dim();
  RMatrix stacked(jac.rows() + static_cast<long>(dirs.size()), dim);
  stacked.topRows(jac.rows()) = jac;
  for (int k = 0; k < static_cast<int>(dirs.size()); ++k) {
    stacked.row(jac.rows() + k) = m.basis.coordinates(dirs[k]).transpose();
  }

  Eigen::JacobiSVD<RMatrix> svd(stacked, Eigen::ComputeFullV);
  const RVector s = svd.singularValues();
  const double cut = s.size() > 0 ? tol.kernel_cut * s(0) : 0.0;
  const int rank = s.size() > 0 && s(0) > 0.0 ? static_cast<int>((s.array() > cut).count()) : 0;
  const int kernel = dim - rank;
  if (kernel != 4) {
    throw Error(ErrorKind::WrongDimension,
                "horizontal space has dimension " + std::to_string(kernel) + ", expected 4");
  }

  HorizontalFrame frame;
  frame.at = p;
  frame.singular_values = s;
  frame.coords = svd.matrixV().rightCols(4);
  for (int c = 0; c < 4; ++c) frame.vectors.push_back(m.basis.assemble(frame.coords.col(c)));
  return frame;
}

MetricSample metric_sample(const HorizontalFrame& frame, const Tolerances& tol) {
  MetricSample s;
  const auto& v = frame.vectors;
  auto project = [&](auto op, Eigen::Matrix4d& out) {
    for (int b = 0; b < 4; ++b) {
      const MatrixPair image = op(v[b]);
      MatrixPair rest = image;
      for (int a = 0; a < 4; ++a) {
        out(a, b) = real_pairing(v[a], image);
        rest -= out(a, b) * v[a];
      }
      s.projection_defect = std::max(s.projection_defect, norm(rest));
    }
  };
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) s.gram(a, b) = real_pairing(v[a], v[b]);
  }
  project([](const MatrixPair& x) { return quaternion_I(x); }, s.iq);
  project([](const MatrixPair& x) { return quaternion_J(x); }, s.jq);
  project([](const MatrixPair& x) { return quaternion_K(x); }, s.kq);
  if (s.projection_defect > tol.projection_defect) {
    throw Error(ErrorKind::ProjectionDefect,
                "complex structure leaves the horizontal space (defect " +
                    std::to_string(s.projection_defect) + ")");
  }
  return s;
}

double MetricChecks::max_defect() const {
  return std::max({gram_symmetry, i_squared, j_squared, k_squared, ijk, i_isometry, j_isometry,
                   k_isometry});
}

MetricChecks check_metric(const MetricSample& s) {
  const Eigen::Matrix4d id = Eigen::Matrix4d::Identity();
  MetricChecks c;
  c.gram_symmetry = (s.gram - s.gram.transpose()).norm();
  c.gram_min_eigenvalue =
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d>(0.5 * (s.gram + s.gram.transpose()))
          .eigenvalues()
          .minCoeff();
  c.i_squared = (s.iq * s.iq + id).norm();
  c.j_squared = (s.jq * s.jq + id).norm();
  c.k_squared = (s.kq * s.kq + id).norm();
  c.ijk = (s.iq * s.jq * s.kq + id).norm();
  c.i_isometry = (s.iq.transpose() * s.gram * s.iq - s.gram).norm();
  c.j_isometry = (s.jq.transpose() * s.gram * s.jq - s.gram).norm();
  c.k_isometry = (s.kq.transpose() * s.gram * s.kq - s.gram).norm();
  return c;
}

double cone_oracle_a1(const MatrixPair& p) {
  const Complex ta = (p.alpha * p.alpha).trace();
  const Complex tb = (p.beta * p.beta).trace();
  const Complex tab = (p.alpha * p.beta).trace();
  return std::abs(ta * tb - tab * tab);
}

}  // namespace hkale
