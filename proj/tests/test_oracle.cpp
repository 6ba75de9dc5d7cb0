#include <algorithm>
#include <random>

#include <doctest.h>

#include "chainecho/errors.hpp"
#include "chainecho/oracle.hpp"
#include "fock_helpers.hpp"

using namespace chainecho;

namespace {

Matrix<Complex> expi(const Matrix<Complex> &hermitian) {
  Eigen::SelfAdjointEigenSolver<Matrix<Complex>> es(hermitian);
  const Vector<Complex> phases =
      es.eigenvalues().unaryExpr([](double e) { return std::polar(1.0, e); });
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

} // namespace

TEST_CASE("single on-site term gives the occupation pattern") {
  // lambda (2 n_0 - 1) on two modes: A_00 = 2 lambda, shift -lambda.
  const double lambda = 0.8;
  QuadraticHamiltonian h{Matrix<double>::Zero(2, 2), Matrix<double>::Zero(2, 2), -lambda};
  h.a_mat(0, 0) = 2.0 * lambda;
  const auto op = lift_quadratic(h);
  CHECK(op.dim() == 4);
  CHECK((op.matrix - Eigen::Vector4d(-lambda, lambda, -lambda, lambda).asDiagonal().toDenseMatrix())
            .cwiseAbs()
            .maxCoeff() < 1e-15);
}

TEST_CASE("lifted quadratic forms are Hermitian and linear in the coefficients") {
  const auto h1 = build_hamiltonian({5, 0.6, 0.4, 0.9, 2, QubitLabel::L11});
  const auto h2 = build_hamiltonian({5, 0.2, 1.7, 0.3, 3, QubitLabel::L01});
  const double x = 0.7, y = -1.9;
  QuadraticHamiltonian mix{x * h1.a_mat + y * h2.a_mat, x * h1.b_mat + y * h2.b_mat,
                           x * h1.const_shift + y * h2.const_shift};
  const auto l1 = lift_quadratic(h1).matrix;
  const auto l2 = lift_quadratic(h2).matrix;
  CHECK((l1 - l1.transpose()).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((lift_quadratic(mix).matrix - (x * l1 + y * l2)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("ground energy matches the quasiparticle vacuum energy") {
  const auto h = build_hamiltonian({6, 1.0, 0.5, 0.0, 0, QubitLabel::L00});
  const auto b = diagonalize(h);
  const auto gs = ground_state(lift_quadratic(h));
  CHECK(gs.energy == doctest::Approx(vacuum_energy(b.energies, h)).epsilon(1e-12));
  CHECK(std::abs(gs.energy + 0.5 * b.energies.sum()) < 1e-10);
}

TEST_CASE("many-body spectrum is built from the quasiparticle energies") {
  const auto h = build_hamiltonian({6, 0.7, 0.8, 0.6, 2, QubitLabel::L10});
  const auto b = diagonalize(h);
  Eigen::SelfAdjointEigenSolver<Matrix<double>> es(lift_quadratic(h).matrix);
  const double e0 = vacuum_energy(b.energies, h);
  std::vector<double> built;
  for (int occ = 0; occ < 64; ++occ) {
    double e = e0;
    for (int k = 0; k < 6; ++k)
      if (occ >> k & 1)
        e += b.energies(k);
    built.push_back(e);
  }
  std::sort(built.begin(), built.end());
  for (int i = 0; i < 64; ++i)
    CHECK(std::abs(built[static_cast<std::size_t>(i)] - es.eigenvalues()(i)) < 1e-8);
}

TEST_CASE("translation moves every creation operator one site") {
  const int n = 5;
  const Matrix<double> t = translation_operator(n).matrix;
  CHECK((t * t.transpose() - Matrix<double>::Identity(32, 32)).cwiseAbs().maxCoeff() < 1e-15);
  for (int j = 0; j < n; ++j) {
    const Matrix<double> moved = t * testing_fock::creation(n, j) * t.transpose();
    CHECK((moved - testing_fock::creation(n, (j + 1) % n)).cwiseAbs().maxCoeff() < 1e-15);
  }
}

TEST_CASE("translation to the power N is the identity") {
  for (int n : {4, 5, 6}) {
    const Matrix<double> t = translation_operator(n).matrix;
    Matrix<double> p = Matrix<double>::Identity(t.rows(), t.cols());
    for (int k = 0; k < n; ++k)
      p = t * p;
    // Up to a global sign, which is the parity convention at the seam.
    const double phase = p(0, 0);
    CHECK(std::abs(std::abs(phase) - 1.0) < 1e-15);
    CHECK((p - phase * Matrix<double>::Identity(t.rows(), t.cols())).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("exponentiated generator reproduces the inverse translation") {
  const int n = 6;
  const Matrix<Complex> k = translation_generator(n);
  const Matrix<Complex> u = expi(lift_hopping(k).matrix);
  const Matrix<Complex> t = translation_operator(n).matrix.cast<Complex>();
  CHECK((u - t.adjoint()).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("translation by d conjugates H_10 into H_01") {
  const int n = 6;
  for (int d : {1, 2, 4}) {
    const ChainSpec s{n, 0.8, 0.6, 1.3, d, QubitLabel::L10};
    const Matrix<double> t = translation_operator(n).matrix;
    Matrix<double> td = Matrix<double>::Identity(t.rows(), t.cols());
    for (int k = 0; k < d; ++k)
      td = t * td;
    const auto h10 = lift_quadratic(build_hamiltonian(s)).matrix;
    const auto h01 = lift_quadratic(build_hamiltonian(s.with_label(QubitLabel::L01))).matrix;
    CHECK((td * h10 * td.transpose() - h01).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("oracle echoes are one without coupling or at zero distance") {
  const auto t = time_grid(5.0, 0.5);
  const auto flat = oracle_echo_survival({6, 1.0, 0.5, 0.0, 2, QubitLabel::L11}, t);
  CHECK((flat.values.array() - 1.0).abs().maxCoeff() < 1e-10);
  const auto same_site = oracle_echo_exchange({6, 1.0, 0.5, 3.0, 0, QubitLabel::L10}, t);
  CHECK((same_site.values.array() - 1.0).abs().maxCoeff() < 1e-10);
}

TEST_CASE("short-time decay is set by the energy variance") {
  const ChainSpec s{6, 1.0, 0.5, 0.1, 2, QubitLabel::L11};
  const auto v = ground_state(lift_quadratic(build_hamiltonian(s.with_label(QubitLabel::L00))));
  const Matrix<double> h = lift_quadratic(build_hamiltonian(s)).matrix;
  const double mean = v.vector.dot(h * v.vector);
  const double variance = (h * v.vector).squaredNorm() - mean * mean;
  Vector<double> t(1);
  t << 1e-3;
  const double l = oracle_echo_survival(s, t).values(0);
  CHECK(std::abs(l - (1.0 - variance * 1e-6)) < 1e-10);
  CHECK(variance > 0.0);
}

TEST_CASE("oracle echo does not depend on the phase of the ground state") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
  const ChainSpec s{6, 0.9, 0.7, 0.8, 3, QubitLabel::L01};
  const auto t = time_grid(10.0, 0.5);
  const auto plain = oracle_echo_survival(s, t);
  for (int i = 0; i < 3; ++i) {
    const auto rotated = oracle_echo_survival(s, t, std::polar(1.0, angle(rng)));
    CHECK((rotated.values - plain.values).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("degenerate ground states are refused") {
  // Zero field, gamma = 0, N = 4 has exact zero modes.
  const auto h = build_hamiltonian({4, 0.0, 0.0, 0.0, 0, QubitLabel::L00});
  CHECK_THROWS_AS(ground_state(lift_quadratic(h)), DegenerateGroundState);
}

TEST_CASE("oracle size is capped") {
  CHECK_THROWS_AS(lift_quadratic(build_hamiltonian({13, 1.0, 0.5, 0.0, 0, QubitLabel::L00})),
                  InvalidArgument);
  CHECK_THROWS_AS(translation_operator(13), InvalidArgument);
}
