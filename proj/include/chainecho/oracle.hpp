#pragma once

#include <string>

#include "chainecho/echo.hpp"

namespace chainecho {

/// Largest chain the oracle accepts (Fock dimension 4096).
inline constexpr int kOracleMaxSites = 12;

/// Dense operator on the 2^N fermion Fock space. Basis state s has site i
/// occupied iff bit i of s is set, and stands for c_{i1}^+ c_{i2}^+ ... |0>
/// with i1 < i2 < ...
template <typename Scalar> struct FockOperator {
  int n_modes = 0;
  Matrix<Scalar> matrix;
  std::string provenance;

  Index dim() const { return matrix.rows(); }
};

/// Many-body matrix of a quadratic form built term by term from c, c^+.
FockOperator<double> lift_quadratic(const QuadraticHamiltonian &h);

/// Many-body matrix of the number-conserving form sum_ij c_i^+ K_ij c_j.
FockOperator<Complex> lift_hopping(const Matrix<Complex> &k);

/// Fermionic translation: T c_j^+ T^-1 = c_{j+1}^+ (mod N), T|0> = |0>.
FockOperator<double> translation_operator(int n_sites);

/// Generator K with T = exp(i lift(K)): K = F^+ diag(2 pi m / N) F on the
/// plane-wave modes F_mj = exp(-2 pi i m j / N) / sqrt(N).
Matrix<Complex> translation_generator(int n_sites);

struct FockGroundState {
  double energy = 0.0;
  double gap = 0.0;
  Vector<double> vector;
};

/// Lowest eigenpair; throws DegenerateGroundState when the gap is below
/// `min_gap`.
FockGroundState ground_state(const FockOperator<double> &h, double min_gap = 1e-8);

/// Survival echo |<E0| exp(-i H_ab t) |E0>|^2 with |E0> the many-body ground
/// state of the lifted H_00, by full diagonalization.
EchoSeries oracle_echo_survival(const ChainSpec &spec, const Vector<double> &times);

/// |<E0| exp(iH_10 t) T^d exp(-iH_10 t) |E0>|^2 with the lifted translation.
EchoSeries oracle_echo_exchange(const ChainSpec &spec, const Vector<double> &times);

/// Variant that rotates |E0> by a global phase before evaluating; the result
/// must not depend on it.
EchoSeries oracle_echo_survival(const ChainSpec &spec, const Vector<double> &times,
                                Complex global_phase);

} // namespace chainecho
