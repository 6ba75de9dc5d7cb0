#include "chainecho/observables.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "chainecho/errors.hpp"

namespace chainecho {

namespace {

// Indices of the two basis states carrying the family's coherence.
std::pair<int, int> coherence_indices(BellFamily family) {
  return family == BellFamily::Phi ? std::pair{0, 3} : std::pair{1, 2};
}

double product_modulus(const BellFamilyState &state) {
  return std::abs(state.alpha * state.beta);
}

// Argument of the max in the negativity.
double entanglement_margin(const BellFamilyState &state, double echo) {
  return state.p * product_modulus(state) * std::sqrt(echo) - 0.25 * (1.0 - state.p);
}

void check_echo(double echo) {
  if (!(echo >= 0.0 && echo <= 1.0))
    throw InvalidArgument("echo value must lie in [0, 1]");
}

} // namespace

void validate(const BellFamilyState &state) {
  const double norm = std::norm(state.alpha) + std::norm(state.beta);
  if (std::abs(norm - 1.0) > 1e-12)
    throw InvalidArgument("|alpha|^2 + |beta|^2 must equal 1");
  if (!(state.p >= 0.0 && state.p <= 1.0))
    throw InvalidArgument("mixing weight p must lie in [0, 1]");
}

DensityMatrix4 initial_density(const BellFamilyState &state) {
  validate(state);
  const auto [i, j] = coherence_indices(state.family);
  Eigen::Vector4cd phi = Eigen::Vector4cd::Zero();
  phi(i) = state.alpha;
  phi(j) = state.beta;
  return state.p * phi * phi.adjoint() + 0.25 * (1.0 - state.p) * DensityMatrix4::Identity();
}

DensityMatrix4 evolve_state(const BellFamilyState &state, double echo) {
  check_echo(echo);
  DensityMatrix4 rho = initial_density(state);
  const auto [i, j] = coherence_indices(state.family);
  const double factor = std::sqrt(echo);
  rho(i, j) *= factor;
  rho(j, i) = std::conj(rho(i, j));
  return rho;
}

std::vector<DensityMatrix4> evolve_state(const BellFamilyState &state, const EchoSeries &echo) {
  const EchoKind expected =
      state.family == BellFamily::Phi ? EchoKind::L00_11 : EchoKind::L01_10;
  if (echo.kind != expected)
    throw InvalidArgument("echo kind " + std::string(to_string(echo.kind)) +
                          " does not match the state family");
  std::vector<DensityMatrix4> out;
  out.reserve(static_cast<std::size_t>(echo.size()));
  for (Index k = 0; k < echo.size(); ++k)
    out.push_back(evolve_state(state, echo.values(k)));
  return out;
}

double purity(const BellFamilyState &state, double echo) {
  validate(state);
  check_echo(echo);
  const double p2 = state.p * state.p;
  const double ab = product_modulus(state);
  return 0.25 * (1.0 - p2) + p2 * (1.0 - 2.0 * ab * ab * (1.0 - echo));
}

double negativity(const BellFamilyState &state, double echo) {
  validate(state);
  check_echo(echo);
  return std::max(0.0, entanglement_margin(state, echo));
}

DensityMatrix4 partial_transpose(const DensityMatrix4 &rho) {
  DensityMatrix4 out;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        for (int d = 0; d < 2; ++d)
          out(2 * a + b, 2 * c + d) = rho(2 * a + d, 2 * c + b);
  return out;
}

double negativity_partial_transpose(const DensityMatrix4 &rho) {
  const Eigen::SelfAdjointEigenSolver<DensityMatrix4> solver(partial_transpose(rho),
                                                             Eigen::EigenvaluesOnly);
  double sum = 0.0;
  for (Index k = 0; k < 4; ++k)
    sum += std::max(0.0, -solver.eigenvalues()(k));
  return sum;
}

std::vector<EsdEvent> esd_events(const BellFamilyState &state, const EchoSeries &echo) {
  validate(state);
  std::vector<EsdEvent> events;
  const Index n = echo.size();
  if (n == 0)
    return events;

  auto crossing = [&](Index k) {
    const double m0 = entanglement_margin(state, echo.values(k - 1));
    const double m1 = entanglement_margin(state, echo.values(k));
    const double t0 = echo.times(k - 1), t1 = echo.times(k);
    return t0 + (t1 - t0) * m0 / (m0 - m1);
  };

  bool dead = entanglement_margin(state, echo.values(0)) <= 0.0;
  if (dead)
    events.push_back({echo.times(0), std::nullopt});
  for (Index k = 1; k < n; ++k) {
    const bool now_dead = entanglement_margin(state, echo.values(k)) <= 0.0;
    if (now_dead && !dead)
      events.push_back({crossing(k), std::nullopt});
    else if (!now_dead && dead)
      events.back().revival = crossing(k);
    dead = now_dead;
  }
  return events;
}

} // namespace chainecho
