#pragma once

#include "hkale/moment.hpp"

#include <cstdint>
#include <variant>

namespace hkale {

struct SolverOptions {
  int max_iter = 500;
  double damping_init = 1e-3;
  double damping_decrease = 0.3;
  double damping_increase = 3.0;
  double damping_max = 1e12;
  double stop_residual = 1e-10;
  double converged_residual = 1e-8;
  double seed_scale = 0.5;  // seed norm = seed_scale * ‖ζ‖^{1/2}
  /// Solve μ = −ζ instead of μ = ζ (the ζ̃ = −ζ orientation).
  bool flip_zeta_sign = false;
};

struct SolveResult {
  MatrixPair point;
  RVector coords;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

using Seed = std::variant<MatrixPair, std::uint64_t>;

/// Seed pair drawn from `seed`: normal coordinates in the invariant basis,
/// rescaled to norm seed_scale·‖ζ‖^{1/2} (seed_scale when ζ = 0).
RVector seed_coordinates(const FlatModule& m, const Zeta& z, std::uint64_t seed,
                         const SolverOptions& opts = {});

/// Levenberg–Marquardt on the stacked residual μ(p) − ζ over invariant-basis
/// coordinates. Returns the best iterate; `converged` reports whether the
/// residual reached opts.converged_residual.
SolveResult solve_moment(const FlatModule& m, const Zeta& z, const Seed& seed,
                         const SolverOptions& opts = {});

/// Frobenius norm of μ(p) − ζ across all three components, recomputed
/// directly from the matrices.
double moment_residual(const MatrixPair& p, const Zeta& z, const GaugeAlgebra& alg,
                       bool flip_zeta_sign = false);

/// Smallest singular value of Y ↦ ([Y,α], [Y,β]) on ft_basis.
double stabilizer_check(const MatrixPair& p, const GaugeAlgebra& alg);

struct DiscreteStabilizerReport {
  int samples = 0;
  double min_displacement = 0.0;  // min over sampled f of ‖f·p − p‖
  bool pass = false;
};

/// Heuristic: no sampled f = exp(Y) (Y ∈ f/t, plus finite-order central
/// phases) fixes p.
DiscreteStabilizerReport discrete_stabilizer_check(const MatrixPair& p, const GaugeAlgebra& alg,
                                                   std::uint64_t seed, int samples = 64,
                                                   double tolerance = 1e-6);

struct HorizontalFrame {
  MatrixPair at;
  std::vector<MatrixPair> vectors;
  RMatrix coords;          // basis coordinates, one column per frame vector
  RVector singular_values;  // of [dμ; orbit directions]
};

/// Orthonormal basis of ker dμ ∩ (orbit directions)⊥; throws WrongDimension
/// unless it is 4-dimensional.
HorizontalFrame horizontal_frame(const MatrixPair& p, const FlatModule& m,
                                 const Tolerances& tol = default_tolerances());

struct MetricSample {
  Eigen::Matrix4d gram;
  Eigen::Matrix4d iq;
  Eigen::Matrix4d jq;
  Eigen::Matrix4d kq;
  double projection_defect = 0.0;
};

MetricSample metric_sample(const HorizontalFrame& frame,
                           const Tolerances& tol = default_tolerances());

struct MetricChecks {
  double gram_symmetry = 0.0;
  double gram_min_eigenvalue = 0.0;
  double i_squared = 0.0;
  double j_squared = 0.0;
  double k_squared = 0.0;
  double ijk = 0.0;
  double i_isometry = 0.0;
  double j_isometry = 0.0;
  double k_isometry = 0.0;
  double max_defect() const;
};
MetricChecks check_metric(const MetricSample& s);

/// |tr(α²)tr(β²) − tr(αβ)²|, the A1 cone relation xy = z².
double cone_oracle_a1(const MatrixPair& p);

}  // namespace hkale
