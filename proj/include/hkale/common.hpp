#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace hkale {

template <typename Scalar>
using ComplexT = std::complex<Scalar>;

template <typename Scalar>
using CMatrixT = Eigen::Matrix<ComplexT<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;

using Complex = ComplexT<double>;
using CMatrix = CMatrixT<double>;
using CMatrix2 = Eigen::Matrix2cd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;
using IMatrix = Eigen::MatrixXi;

inline constexpr Complex kI{0.0, 1.0};

enum class ErrorKind {
  NonClosure,
  NotInSU2,
  DecompositionFailed,
  NotADE,
  DimensionMismatch,
  NotInF,
  NotInvariant,
  WrongDimension,
  ProjectionDefect,
  SampleMismatch,
  InvalidArgument,
  Io,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Numerical thresholds used across the library. Defaults are the
/// documented acceptance values; tests tighten or loosen individual fields.
struct Tolerances {
  double group_dedup_grid = 1e-9;
  double unitarity = 1e-12;
  double cayley_check = 1e-10;
  double mckay_rounding = 1e-6;
  double isotypic_reconstruction = 1e-8;
  double membership = 1e-9;
  double orthonormality = 1e-10;
  double commutation = 1e-10;
  double moment_commutation = 1e-9;
  double good_zeta = 1e-10;
  double converged_residual = 1e-8;
  double stop_residual = 1e-10;
  double stabilizer = 1e-8;
  double kernel_cut = 1e-5;
  double projection_defect = 1e-5;
  double quaternion_relations = 1e-6;
};

/// FNV-1a, used for stage seeds and sample fingerprints.
inline std::uint64_t fnv1a(const void* data, std::size_t len,
                           std::uint64_t h = 14695981039346656037ull) {
  const auto* b = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= b[i];
    h *= 1099511628211ull;
  }
  return h;
}

inline std::uint64_t fnv1a(const std::string& s, std::uint64_t h = 14695981039346656037ull) {
  return fnv1a(s.data(), s.size(), h);
}

inline const Tolerances& default_tolerances() {
  static const Tolerances tol{};
  return tol;
}

}  // namespace hkale
