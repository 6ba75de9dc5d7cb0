#include <algorithm>

#include <doctest.h>

#include "chainecho/errors.hpp"
#include "chainecho/modes.hpp"
#include "chainecho/oracle.hpp"
#include "fock_helpers.hpp"

using namespace chainecho;

namespace {

Vector<double> sorted(Vector<double> v) {
  std::sort(v.data(), v.data() + v.size());
  return v;
}

} // namespace

TEST_CASE("energies of the uncoupled chain lie in the band") {
  for (double lambda : {0.3, 1.5, 2.0}) {
    const auto b = diagonalize(build_hamiltonian({40, 1.0, lambda, 0.0, 0, QubitLabel::L00}));
    CHECK(b.energies.minCoeff() >= 2.0 * std::abs(1.0 - lambda) - 1e-10);
    CHECK(b.energies.maxCoeff() <= 2.0 * std::abs(1.0 + lambda) + 1e-10);
  }
}

TEST_CASE("energies are sorted and the basis is orthogonal and reconstructs the form") {
  for (int n : {2, 5, 60, 500}) {
    const auto h = build_hamiltonian({n, 0.7, 0.9, 1.3, n / 3, QubitLabel::L11});
    const auto b = diagonalize(h);
    CHECK(std::is_sorted(b.energies.data(), b.energies.data() + n));
    CHECK(b.energies.minCoeff() >= -kZeroModeTolerance);
    CHECK(orthogonality_error(b) < 1e-10);
    CHECK(reconstruction_error(b, h) < 1e-10);
  }
}

TEST_CASE("strong coupling of both qubits splits off two energies of order g") {
  const auto b = diagonalize(build_hamiltonian({100, 1.0, 0.99, 50.0, 7, QubitLabel::L11}));
  int large = 0;
  for (Index k = 0; k < b.size(); ++k)
    large += b.energies(k) > 50.0 ? 1 : 0;
  CHECK(large == 2);
  CHECK(b.energies(99) == doctest::Approx(2.0 * (50.0 + 0.99)).epsilon(0.02));
}

TEST_CASE("labels 01 and 10 are isospectral") {
  for (int d : {1, 4, 9}) {
    const ChainSpec s{13, 0.4, 1.2, 0.8, d, QubitLabel::L01};
    const auto e01 = diagonalize(build_hamiltonian(s)).energies;
    const auto e10 = diagonalize(build_hamiltonian(s.with_label(QubitLabel::L10))).energies;
    CHECK((e01 - e10).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("two-site chain matches its Fock-space spectrum") {
  const auto h = build_hamiltonian({2, 1.0, 0.0, 0.0, 0, QubitLabel::L00});
  const auto b = diagonalize(h);
  const auto fock = lift_quadratic(h);
  Eigen::SelfAdjointEigenSolver<Matrix<double>> es(fock.matrix);
  const Vector<double> levels = es.eigenvalues();
  const double e0 = vacuum_energy(b.energies, h);
  CHECK(levels(0) == doctest::Approx(e0).epsilon(1e-12));
  Vector<double> built(4);
  built << e0, e0 + b.energies(0), e0 + b.energies(1), e0 + b.energies.sum();
  CHECK((sorted(built) - levels).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("vacuum energy equals minus half the energy sum") {
  const auto h = build_hamiltonian({9, 0.5, 0.7, 0.3, 4, QubitLabel::L01});
  const auto b = diagonalize(h);
  CHECK(vacuum_energy(b.energies, h) == doctest::Approx(-0.5 * b.energies.sum()).epsilon(1e-12));
}

TEST_CASE("zero modes get a non-negative phi diagonal") {
  // gamma = 0, lambda = 0 has exact zero modes for N divisible by 4.
  const auto b = diagonalize(build_hamiltonian({8, 0.0, 0.0, 0.0, 0, QubitLabel::L00}));
  int zeros = 0;
  for (Index k = 0; k < b.size(); ++k)
    if (b.energies(k) < kZeroModeTolerance) {
      ++zeros;
      CHECK(b.phi(k, k) >= 0.0);
    }
  CHECK(zeros > 0);
}

TEST_CASE("momentum modes share the energies of the real diagonalization") {
  const ChainSpec s{8, 1.0, 0.5, 0.0, 0, QubitLabel::L00};
  const auto m = momentum_modes(s);
  const auto b = diagonalize(build_hamiltonian(s));
  CHECK((sorted(m.energies) - b.energies).cwiseAbs().maxCoeff() < 1e-10);
  REQUIRE(m.momenta);
  CHECK(m.momenta->minCoeff() >= 1);
  CHECK(m.momenta->maxCoeff() <= 8);
  CHECK(orthogonality_error(m) < 1e-10);
  CHECK(reconstruction_error(m, build_hamiltonian(s)) < 1e-10);
}

TEST_CASE("critical chain: cyclic couplings keep an exact zero mode, the next gap closes with N") {
  double previous = 1e9;
  for (int n : {10, 40, 160}) {
    const auto e = momentum_modes({n, 1.0, 1.0, 0.0, 0, QubitLabel::L00}).energies;
    Vector<double> sorted_e = sorted(e);
    CHECK(sorted_e(0) < 1e-10);
    CHECK(sorted_e(1) > 0.0);
    CHECK(sorted_e(1) < previous);
    previous = sorted_e(1);
  }
  CHECK(previous < 0.1);
  // Off criticality the gap stays open.
  CHECK(momentum_modes({160, 1.0, 0.9, 0.0, 0, QubitLabel::L00}).energies.minCoeff() > 0.19);
}

TEST_CASE("momentum labels match the Fock-space translation") {
  const int n = 6;
  for (double gamma : {1.0, 0.3}) {
    const ChainSpec s{n, gamma, 0.5, 0.0, 0, QubitLabel::L00};
    const auto m = momentum_modes(s);
    const Matrix<Complex> t = translation_operator(n).matrix.cast<Complex>();
    const Matrix<Complex> g = m.particle();
    const Matrix<Complex> h = m.hole();
    const Vector<Complex> phases = translation_phases(m);
    for (int k = 0; k < n; ++k) {
      // eta_k^+ = sum_i conj(G_ki) c_i^+ + conj(H_ki) c_i
      Matrix<Complex> eta_dag = Matrix<Complex>::Zero(t.rows(), t.cols());
      for (int i = 0; i < n; ++i)
        eta_dag += std::conj(g(k, i)) * testing_fock::creation(n, i).cast<Complex>() +
                   std::conj(h(k, i)) * testing_fock::annihilation(n, i).cast<Complex>();
      const Matrix<Complex> lhs = t * eta_dag * t.adjoint();
      CHECK((lhs - phases(k) * eta_dag).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
}

TEST_CASE("momentum modes refuse a perturbed chain") {
  CHECK_THROWS_AS(momentum_modes({6, 1.0, 0.5, 0.1, 2, QubitLabel::L11}), InvalidArgument);
}

TEST_CASE("cast keeps energies and momenta") {
  const auto m = momentum_modes({6, 1.0, 0.5, 0.0, 0, QubitLabel::L00});
  const auto b = diagonalize(build_hamiltonian({6, 1.0, 0.5, 0.0, 0, QubitLabel::L00}));
  const ModeBasis<Complex> c = b.cast<Complex>();
  CHECK(c.energies == b.energies);
  CHECK(!c.momenta);
  CHECK(m.cast<Complex>().momenta == m.momenta);
}
