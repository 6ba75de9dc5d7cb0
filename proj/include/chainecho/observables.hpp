#pragma once

#include <optional>
#include <vector>

#include "chainecho/echo.hpp"

namespace chainecho {

enum class BellFamily {
  Phi, ///< alpha|00> + beta|11>, decohered by L_{00,11}
  Psi  ///< alpha|01> + beta|10>, decohered by L_{01,10}
};

/// rho0 = p |phi><phi| + (1 - p) I/4.
struct BellFamilyState {
  BellFamily family = BellFamily::Phi;
  Complex alpha{1.0 / 1.4142135623730951, 0.0};
  Complex beta{1.0 / 1.4142135623730951, 0.0};
  double p = 1.0;
};

/// Throws InvalidArgument unless |alpha|^2 + |beta|^2 = 1 and p in [0, 1].
void validate(const BellFamilyState &state);

/// Two-qubit density matrix in the basis |00>, |01>, |10>, |11>.
using DensityMatrix4 = Eigen::Matrix4cd;

DensityMatrix4 initial_density(const BellFamilyState &state);

/// rho(t) for echo value L: diagonal unchanged, the coherence of the family
/// scaled by sqrt(L) with its initial phase kept.
DensityMatrix4 evolve_state(const BellFamilyState &state, double echo);

/// rho(t) along a series. The echo kind must match the family (phi needs
/// L_{00,11}, psi needs L_{01,10}).
std::vector<DensityMatrix4> evolve_state(const BellFamilyState &state, const EchoSeries &echo);

/// Tr rho^2 = (1 - p^2)/4 + p^2 [1 - 2 |alpha beta|^2 (1 - L)].
double purity(const BellFamilyState &state, double echo);

/// N = max{0, p |alpha beta| sqrt(L) - (1 - p)/4}.
double negativity(const BellFamilyState &state, double echo);

/// Transpose on qubit B.
DensityMatrix4 partial_transpose(const DensityMatrix4 &rho);

/// Sum of |negative eigenvalues| of the partial transpose.
double negativity_partial_transpose(const DensityMatrix4 &rho);

/// One interval of zero negativity. `death` is the time the negativity
/// reaches zero (the first grid time if it starts there), `revival` the time it
/// leaves zero, if it does within the series.
struct EsdEvent {
  double death = 0.0;
  std::optional<double> revival;
};

/// Zero-negativity intervals of the series; crossings are interpolated
/// linearly in p|alpha beta| sqrt(L) - (1 - p)/4 between grid points.
std::vector<EsdEvent> esd_events(const BellFamilyState &state, const EchoSeries &echo);

} // namespace chainecho
