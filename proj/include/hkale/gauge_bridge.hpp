#pragma once

#include "hkale/flat_module.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace hkale {

enum class SampleStrategy { UniformRandom, Design };

std::string strategy_name(SampleStrategy s);
SampleStrategy parse_strategy(const std::string& s);

using Point = Eigen::Vector2cd;

/// τ(z₁, z₂) = (−z̄₂, z̄₁).
inline Point antipode(const Point& p) { return {-std::conj(p(1)), std::conj(p(0))}; }

/// Right action (z₁, z₂) ↦ (z₁, z₂)·γ of SU(2) on S³.
inline Point right_act(const Point& p, const CMatrix2& g) { return (p.transpose() * g).transpose(); }

/// Point set on S³ closed under τ. Points come in pairs (p, τp); τ maps
/// sample k to tau_sign[k]·points[tau[k]], with sign −1 on the second
/// member of each pair since τ² = −1.
struct SphereSample {
  std::vector<Point> points;
  std::vector<double> weights;
  std::vector<int> tau;
  std::vector<int> tau_sign;
  SampleStrategy strategy = SampleStrategy::UniformRandom;
  /// Set by close_under_group: point k·|Γ| + g is base point k times γ_g.
  int group_order = 1;
  std::uint64_t fingerprint = 0;

  int size() const { return static_cast<int>(points.size()); }
};

/// n ≥ 100 (rounded up to even). Weights are equal and normalized so that
/// Σ w|z₁|² = 1.
SphereSample build_sphere_sample(int n, SampleStrategy strategy, std::uint64_t seed = 0);

/// Orbit closure under right multiplication by Γ, renormalized.
SphereSample close_under_group(const SphereSample& s, const FiniteSubgroup& g);

/// Index map k ↦ index of points[k]·γ_g on a group-closed sample.
std::vector<int> group_relabeling(const SphereSample& s, const FiniteSubgroup& g, int gamma);

struct SampleChecks {
  double normalization = 0.0;   // |Σ w|z₁|² − 1|
  double balance = 0.0;         // |Σ w|z₁|² − Σ w|z₂|²|
  double odd_moment = 0.0;      // |Σ w z₁z̄₂|
  double odd_moment_tolerance = 0.0;
  double tau_defect = 0.0;      // max ‖τ(p_k) − sign·p_τ(k)‖
  double unit_defect = 0.0;
};
SampleChecks check_sample(const SphereSample& s);

struct SectionSample {
  MatrixPair pair;
  std::vector<CMatrix> values;
  std::uint64_t fingerprint = 0;

  int size() const { return static_cast<int>(values.size()); }
};

/// λ(z) = z₁α + z₂β.
inline CMatrix evaluate_section(const MatrixPair& p, const Point& z) {
  return z(0) * p.alpha + z(1) * p.beta;
}

/// Throws NotInvariant if p ∉ M.
SectionSample section_from_pair(const MatrixPair& p, const SphereSample& s, const AdaptedRep& rep,
                                const Tolerances& tol = default_tolerances());
/// Tabulates without the membership check.
SectionSample section_values(const MatrixPair& p, const SphereSample& s);

/// w(p) = −λ(τ(p))*, read off the tabulated values through tau.
SectionSample j_on_section(const SectionSample& sec, const SphereSample& s);

struct QuadratureForms {
  double omega1 = 0.0;
  double omega2 = 0.0;
  double omega3 = 0.0;
  double g = 0.0;
};

/// ω₁ = Σw −Im⟨λ₁,λ₂⟩, ω₂ = Σw Re⟨Jλ₁,λ₂⟩, ω₃ = Σw −Im⟨Jλ₁,λ₂⟩,
/// g_h = Σw Re⟨λ₁,λ₂⟩ with ⟨A,B⟩ = Tr(AB*). Throws SampleMismatch.
QuadratureForms quadrature_forms(const SectionSample& a, const SectionSample& b,
                                 const SphereSample& s);

/// The same quantities on M: g = Re⟨p,q⟩, ω₁ = −Im⟨p,q⟩,
/// ω₂ = Re⟨Jp,q⟩, ω₃ = −Im⟨Jp,q⟩.
QuadratureForms flat_forms(const MatrixPair& p, const MatrixPair& q);

struct ReducedMoment {
  double constancy2 = 0.0;  // max_k ‖integrand₂(k) − mean‖
  double constancy3 = 0.0;
  CMatrix integral2;        // Σ w μ̃₂ integrand
  CMatrix integral3;
  /// ‖∫μ̃_a − μ_a‖ and ‖∫μ̃_a + μ_a‖ against the closed-form μ_a.
  double defect2_same_sign = 0.0;
  double defect2_flipped = 0.0;
  double defect3_same_sign = 0.0;
  double defect3_flipped = 0.0;
};

/// μ̃₂ = −¼([JΘ,Θ*] − [Θ,JΘ*]), μ̃₃ = −(i/4)([JΘ,Θ*] + [Θ,JΘ*]) at every
/// sample point.
ReducedMoment reduced_moment_integrands(const SectionSample& sec, const SphereSample& s);

struct Mu1Reduction {
  CMatrix integral;  // Σ w −(i/2)[λ,λ*]
  double defect_same_sign = 0.0;
  double defect_flipped = 0.0;
};

Mu1Reduction mu1_reduction_check(const SectionSample& sec, const SphereSample& s);

/// Quadrature tolerance for identities that hold only after integration.
/// Samples built here are τ-closed, which makes every second moment exact
/// for either strategy; Monte Carlo bands are kept for the odd-moment
/// statistic only.
double quadrature_tolerance(const SphereSample& s);

}  // namespace hkale
