#include <random>

#include <doctest.h>

#include "chainecho/bogoliubov.hpp"
#include "chainecho/oracle.hpp"

using namespace chainecho;

namespace {

ModeBasis<double> modes(const ChainSpec &s) { return diagonalize(build_hamiltonian(s)); }

} // namespace

TEST_CASE("a basis related to itself gives the identity map") {
  const auto b = modes({9, 0.6, 0.8, 0.4, 3, QubitLabel::L11});
  const auto m = relate_bases(b, b);
  CHECK((m.g - Matrix<double>::Identity(9, 9)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(m.h.cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("the same Hamiltonian in two bases gives a signed permutation") {
  const ChainSpec s{8, 1.0, 0.5, 0.0, 0, QubitLabel::L00};
  const auto real = modes(s).cast<Complex>();
  auto flipped = real;
  // Reverse the mode order and flip a sign: still the same operator.
  flipped.energies = real.energies.reverse();
  flipped.phi = real.phi.colwise().reverse();
  flipped.psi = real.psi.colwise().reverse();
  flipped.phi.row(2) *= -1.0;
  flipped.psi.row(2) *= -1.0;
  const auto m = relate_bases(real, flipped);
  CHECK(m.h.cwiseAbs().maxCoeff() < 1e-12);
  const Matrix<double> abs_g = m.g.cwiseAbs();
  for (Index i = 0; i < 8; ++i) {
    CHECK(abs_g.row(i).maxCoeff() == doctest::Approx(1.0));
    CHECK(abs_g.row(i).sum() == doctest::Approx(1.0));
  }
}

TEST_CASE("static maps are canonical and g +- h is orthogonal") {
  for (double g : {0.1, 5.0}) {
    const ChainSpec s{6, 1.0, 0.5, g, 2, QubitLabel::L11};
    const auto m = relate_bases(modes(s.with_label(QubitLabel::L00)), modes(s));
    CHECK(canonical_error(m) < 1e-10);
    const Matrix<double> plus = m.g + m.h;
    const Matrix<double> minus = m.g - m.h;
    CHECK((plus * plus.transpose() - Matrix<double>::Identity(6, 6)).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((minus * minus.transpose() - Matrix<double>::Identity(6, 6)).cwiseAbs().maxCoeff() <
          1e-10);
  }
}

TEST_CASE("forward then backward composes to the identity") {
  const ChainSpec s{50, 0.8, 1.1, 0.7, 11, QubitLabel::L01};
  const auto b0 = modes(s.with_label(QubitLabel::L00));
  const auto b1 = modes(s);
  const auto round = compose(relate_bases(b0, b1), relate_bases(b1, b0));
  CHECK((round.g - Matrix<double>::Identity(50, 50)).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(round.h.cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("vacuum pairing matrix is antisymmetric for a well-conditioned g") {
  const ChainSpec s{10, 1.0, 0.5, 0.3, 4, QubitLabel::L11};
  const auto m = relate_bases(modes(s.with_label(QubitLabel::L00)), modes(s));
  REQUIRE(condition_number(m.g) < 1e8);
  const Matrix<double> pairing = -m.g.inverse() * m.h;
  CHECK((pairing + pairing.transpose()).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("static overlap of the two vacua matches the oracle") {
  // |<0_ab|0_00>|^2 = |det g|, the long-time average weight of the vacuum.
  const ChainSpec s{6, 1.0, 0.5, 0.1, 2, QubitLabel::L11};
  const auto m = relate_bases(modes(s.with_label(QubitLabel::L00)), modes(s));
  const auto v0 = ground_state(lift_quadratic(build_hamiltonian(s.with_label(QubitLabel::L00))));
  const auto v1 = ground_state(lift_quadratic(build_hamiltonian(s)));
  const double overlap = std::pow(v0.vector.dot(v1.vector), 2);
  CHECK(std::abs(m.g.determinant()) == doctest::Approx(overlap).epsilon(1e-10));
}

TEST_CASE("dynamic map is the identity at t = 0 and canonical at all t") {
  const ChainSpec s{30, 1.0, 0.5, 0.4, 6, QubitLabel::L10};
  const auto b0 = momentum_modes(s.with_label(QubitLabel::L00));
  const auto b1 = modes(s);
  const auto at0 = dynamic_map(b0, b1, 0.0);
  CHECK((at0.g - Matrix<Complex>::Identity(30, 30)).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(at0.h.cwiseAbs().maxCoeff() < 1e-10);
  for (double t : {0.3, 1.0, 7.5, 42.0}) {
    const auto m = dynamic_map(b0, b1, t);
    CHECK(canonical_error(m) < 1e-10);
    CHECK(m.kind == MapKind::Dynamic);
    CHECK(m.time == t);
  }
}

TEST_CASE("canonical invariants at N = 500") {
  const ChainSpec s{500, 1.0, 0.99, 50.0, 37, QubitLabel::L11};
  const auto b0 = modes(s.with_label(QubitLabel::L00));
  const auto b1 = modes(s);
  const auto m = relate_bases(b0, b1);
  CHECK(canonical_error(m) < 1e-10);
  CHECK(canonical_error(dynamic_map(m, b1.energies, 3.7)) < 1e-10);
}

TEST_CASE("regularization leaves a well-conditioned map untouched") {
  const ChainSpec s{8, 1.0, 0.5, 0.2, 3, QubitLabel::L11};
  const auto m = relate_bases(modes(s.with_label(QubitLabel::L00)), modes(s));
  const auto r = svd_regularize(m);
  CHECK(r.swapped.empty());
  CHECK((r.u * r.singular.asDiagonal() * r.w.transpose() - m.g).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((r.u.transpose() * m.h * r.w - r.h_rot).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("strong coupling produces an exactly singular g with one swapped mode") {
  const ChainSpec s{6, 1.0, 0.5, 5.0, 2, QubitLabel::L11};
  const auto m = relate_bases(modes(s.with_label(QubitLabel::L00)), modes(s));
  const auto r = svd_regularize(m);
  CHECK(r.swapped.size() == 1);
  CHECK(canonical_error(BogoliubovMap<double>{r.g_swapped, r.h_swapped}) < 1e-10);
  const Matrix<double> pairing = r.pairing_matrix();
  CHECK((pairing + pairing.transpose()).cwiseAbs().maxCoeff() < 1e-8);
  CHECK(r.regular_diagonal()(r.swapped.front()) == 0.0);
}

TEST_CASE("full particle-hole map swaps every mode") {
  BogoliubovMap<double> m{Matrix<double>::Zero(5, 5), Matrix<double>::Identity(5, 5)};
  const auto r = svd_regularize(m);
  CHECK(r.swapped.size() == 5);
  CHECK(canonical_error(BogoliubovMap<double>{r.g_swapped, r.h_swapped}) < 1e-12);
}

TEST_CASE("condition number") {
  CHECK(condition_number(Matrix<double>::Identity(3, 3)) == doctest::Approx(1.0));
  CHECK(std::isinf(condition_number(Matrix<double>::Zero(3, 3))));
}
