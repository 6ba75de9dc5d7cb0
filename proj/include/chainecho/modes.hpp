#pragma once

#include <optional>

#include "chainecho/chain.hpp"

namespace chainecho {

/// Energies below this are zero modes.
inline constexpr double kZeroModeTolerance = 1e-10;

/// Quasiparticle modes of a quadratic Hamiltonian.
///
/// Row k of `phi` and `psi` describes mode k through
///   eta_k = sum_i G_ki c_i + H_ki c_i^+,   G = (phi + psi)/2,  H = (phi - psi)/2,
/// so that H = sum_k energies_k (eta_k^+ eta_k - 1/2) + const. Real bases come
/// from `diagonalize`; complex ones carry translation eigenmodes and their
/// integer momentum labels.
template <typename Scalar> struct ModeBasis {
  Vector<double> energies;
  Matrix<Scalar> phi;
  Matrix<Scalar> psi;
  std::optional<Eigen::VectorXi> momenta;

  Index size() const { return energies.size(); }

  /// Coefficients of c in eta (the matrix G above).
  Matrix<Scalar> particle() const { return Scalar(0.5) * (phi + psi); }
  /// Coefficients of c^+ in eta (the matrix H above).
  Matrix<Scalar> hole() const { return Scalar(0.5) * (phi - psi); }

  template <typename Other> ModeBasis<Other> cast() const {
    return {energies, phi.template cast<Other>(), psi.template cast<Other>(), momenta};
  }
};

/// Max-norm deviation of phi phi^+ and psi psi^+ from the identity.
template <typename Scalar> double orthogonality_error(const ModeBasis<Scalar> &basis) {
  const Index n = basis.size();
  const auto eye = Matrix<Scalar>::Identity(n, n);
  return std::max((basis.phi * basis.phi.adjoint() - eye).cwiseAbs().maxCoeff(),
                  (basis.psi * basis.psi.adjoint() - eye).cwiseAbs().maxCoeff());
}

/// Max-norm residual of A and B rebuilt from the modes:
///   A - B = phi^+ Lambda psi,   A + B = psi^+ Lambda phi.
template <typename Scalar>
double reconstruction_error(const ModeBasis<Scalar> &basis, const QuadraticHamiltonian &h) {
  const auto lambda = basis.energies.template cast<Scalar>().asDiagonal();
  const Matrix<Scalar> minus = basis.phi.adjoint() * lambda * basis.psi;
  const Matrix<Scalar> plus = basis.psi.adjoint() * lambda * basis.phi;
  const Matrix<Scalar> a = Scalar(0.5) * (plus + minus);
  const Matrix<Scalar> b = Scalar(0.5) * (plus - minus);
  return std::max((a - h.a_mat.cast<Scalar>()).cwiseAbs().maxCoeff(),
                  (b - h.b_mat.cast<Scalar>()).cwiseAbs().maxCoeff());
}

/// Ground-state energy of the quadratic form, -sum(Lambda)/2 + tr(A)/2 + shift.
double vacuum_energy(const Vector<double> &energies, const QuadraticHamiltonian &h);

/// Real normal modes from the singular value decomposition A - B = U S V^T:
/// phi = U^T, psi = V^T, energies = S sorted non-decreasing.
ModeBasis<double> diagonalize(const QuadraticHamiltonian &h);

/// Translation eigenmodes of the unperturbed chain. Degenerate energy
/// subspaces are rotated so that T eta_k^+ T^-1 = exp(2 pi i k / N) eta_k^+,
/// with k in 1..N stored in `momenta`. The vacuum is unchanged.
ModeBasis<Complex> momentum_modes(const ChainSpec &spec);

/// exp(2 pi i k / N) for every mode of a momentum-labelled basis.
Vector<Complex> translation_phases(const ModeBasis<Complex> &basis);

} // namespace chainecho
