#pragma once

#include <string>
#include <vector>

#include "chainecho/modes.hpp"

namespace chainecho {

enum class MapKind { Static, Dynamic };

/// Canonical map eta^(source) = g eta^(target) + h eta^(target)+.
template <typename Scalar> struct BogoliubovMap {
  Matrix<Scalar> g;
  Matrix<Scalar> h;
  MapKind kind = MapKind::Static;
  double time = 0.0;
  std::string source;
  std::string target;

  Index size() const { return g.rows(); }
};

/// max of |g g^+ + h h^+ - 1| and |g h^T + h g^T|.
template <typename Scalar> double canonical_error(const BogoliubovMap<Scalar> &map) {
  const Index n = map.size();
  const Matrix<Scalar> norm =
      map.g * map.g.adjoint() + map.h * map.h.adjoint() - Matrix<Scalar>::Identity(n, n);
  const Matrix<Scalar> anti = map.g * map.h.transpose() + map.h * map.g.transpose();
  return std::max(norm.cwiseAbs().maxCoeff(), anti.cwiseAbs().maxCoeff());
}

/// Map from the modes of `from` to the modes of `to`:
///   g = G0 G1^+ + H0 H1^+,  h = G0 H1^T + H0 G1^T
/// which for real bases is g = (phi0 phi1^T + psi0 psi1^T)/2,
/// h = (phi0 phi1^T - psi0 psi1^T)/2.
template <typename Scalar>
BogoliubovMap<Scalar> relate_bases(const ModeBasis<Scalar> &from, const ModeBasis<Scalar> &to,
                                   std::string source = "from", std::string target = "to");

/// Mixed real/complex overload; the real basis is promoted.
BogoliubovMap<Complex> relate_bases(const ModeBasis<Complex> &from, const ModeBasis<double> &to,
                                    std::string source = "from", std::string target = "to");

/// first maps 0 -> 1, second maps 1 -> 2; the result maps 0 -> 2.
template <typename Scalar>
BogoliubovMap<Scalar> compose(const BogoliubovMap<Scalar> &first,
                              const BogoliubovMap<Scalar> &second);

/// Heisenberg-evolved map. With eta^(0) = g eta^(1) + h eta^(1)+ and
/// alpha = exp(iHt) eta^(0) exp(-iHt) for H = sum Lambda eta^(1)+ eta^(1),
/// returns (g', h') such that eta^(0) = g' alpha + h' alpha^+:
///   g' = g E g^+ + h E* h^+,  h' = g E h^T + h E* g^T,  E = exp(i Lambda t).
template <typename Scalar>
BogoliubovMap<Complex> dynamic_map(const BogoliubovMap<Scalar> &map,
                                   const Vector<double> &target_energies, double t);

/// Convenience: relate_bases(b0, b1) followed by dynamic_map with b1's energies.
BogoliubovMap<Complex> dynamic_map(const ModeBasis<Complex> &b0, const ModeBasis<double> &b1,
                                   double t);

/// Relative threshold on singular values of g below which a rotated mode is
/// particle-hole swapped.
inline constexpr double kSingularThreshold = 1e-8;

/// Static map rewritten in the frames where g is diagonal.
///
/// With g = U diag(D) W^T, the rotated operators xi0 = U^T eta0 and
/// xi1 = W^T eta1 satisfy xi0 = D xi1 + h_rot xi1^+, h_rot = U^T h W. For every
/// index in `swapped` (D_j below threshold) xi0_j is exchanged with xi0_j^+,
/// giving the canonical pair (g_swapped, h_swapped) whose g part is invertible.
struct RegularizedMap {
  Matrix<double> u;
  Matrix<double> w;
  Vector<double> singular;
  std::vector<Index> swapped;
  Matrix<double> h_rot;
  Matrix<double> g_swapped;
  Matrix<double> h_swapped;
  double threshold = 0.0;

  /// D with the swapped entries set to exactly zero.
  Vector<double> regular_diagonal() const;
  /// -g_swapped^-1 h_swapped, the pairing matrix of the vacuum relation in the
  /// swapped frame. Test-only; production echoes never invert g.
  Matrix<double> pairing_matrix() const;
};

RegularizedMap svd_regularize(const BogoliubovMap<double> &map,
                              double relative_threshold = kSingularThreshold);

/// Condition number of g (infinity when g is singular).
double condition_number(const Matrix<double> &g);

} // namespace chainecho
