#pragma once

#include <cmath>
#include <limits>

#include <Eigen/LU>

#include "chainecho/types.hpp"

namespace chainecho {

/// det = exp(log_abs) * exp(i phase). A singular matrix has log_abs = -inf.
struct LogDet {
  double log_abs = 0.0;
  double phase = 0.0;

  /// |det|^power, evaluated in log space.
  double abs_pow(double power) const { return std::exp(power * log_abs); }
};

namespace detail {
inline double arg_of(double x) { return x < 0.0 ? kPi : 0.0; }
inline double arg_of(const Complex &z) { return std::arg(z); }
} // namespace detail

/// Log-magnitude and phase of a square determinant via partial-pivot LU.
/// Magnitudes are accumulated as sum(log|u_ii|), so large matrices neither
/// overflow nor underflow.
template <typename Derived> LogDet log_determinant(const Eigen::MatrixBase<Derived> &m) {
  using Scalar = typename Derived::Scalar;
  eigen_assert(m.rows() == m.cols());
  const Eigen::PartialPivLU<Matrix<Scalar>> lu(m);
  const auto &packed = lu.matrixLU();

  LogDet out;
  out.phase = lu.permutationP().determinant() < 0 ? kPi : 0.0;
  for (Index i = 0; i < packed.rows(); ++i) {
    const Scalar u = packed(i, i);
    const double mag = std::abs(u);
    if (mag == 0.0) {
      out.log_abs = -std::numeric_limits<double>::infinity();
      continue;
    }
    out.log_abs += std::log(mag);
    out.phase += detail::arg_of(u);
  }
  out.phase = std::remainder(out.phase, 2.0 * kPi);
  return out;
}

} // namespace chainecho
