#include "chainecho/oracle.hpp"

#include <bit>
#include <cstdint>

#include <Eigen/Eigenvalues>

#include "chainecho/errors.hpp"

namespace chainecho {

namespace {

using State = std::uint32_t;

void check_size(Index n) {
  if (n < 1 || n > kOracleMaxSites)
    throw InvalidArgument("oracle supports 1.." + std::to_string(kOracleMaxSites) +
                          " modes, got " + std::to_string(n));
}

// Jordan-Wigner sign for acting on mode i: (-1)^(occupied modes below i).
int parity_below(State s, int i) {
  return (std::popcount(s & ((State{1} << i) - 1)) & 1) ? -1 : 1;
}

// c_i |s>, returns false when it vanishes.
bool annihilate(int i, State &s, int &sign) {
  if (!(s >> i & 1))
    return false;
  sign *= parity_below(s, i);
  s &= ~(State{1} << i);
  return true;
}

bool create(int i, State &s, int &sign) {
  if (s >> i & 1)
    return false;
  sign *= parity_below(s, i);
  s |= State{1} << i;
  return true;
}

} // namespace

FockOperator<double> lift_quadratic(const QuadraticHamiltonian &h) {
  const int n = static_cast<int>(h.size());
  check_size(n);
  const State dim = State{1} << n;
  FockOperator<double> op{n, Matrix<double>::Zero(dim, dim), "quadratic form"};

  for (State s = 0; s < dim; ++s) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        State t = s;
        int sign = 1;
        // A_ij c_i^+ c_j
        if (h.a_mat(i, j) != 0.0 && annihilate(j, t, sign) && create(i, t, sign))
          op.matrix(t, s) += sign * h.a_mat(i, j);
        if (h.b_mat(i, j) == 0.0)
          continue;
        // B_ij/2 c_i^+ c_j^+
        t = s;
        sign = 1;
        if (create(j, t, sign) && create(i, t, sign))
          op.matrix(t, s) += 0.5 * sign * h.b_mat(i, j);
        // B_ij/2 c_j c_i
        t = s;
        sign = 1;
        if (annihilate(i, t, sign) && annihilate(j, t, sign))
          op.matrix(t, s) += 0.5 * sign * h.b_mat(i, j);
      }
    }
  }
  op.matrix.diagonal().array() += h.const_shift;
  return op;
}

FockOperator<Complex> lift_hopping(const Matrix<Complex> &k) {
  const int n = static_cast<int>(k.rows());
  check_size(n);
  const State dim = State{1} << n;
  FockOperator<Complex> op{n, Matrix<Complex>::Zero(dim, dim), "hopping form"};
  for (State s = 0; s < dim; ++s) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        State t = s;
        int sign = 1;
        if (annihilate(j, t, sign) && create(i, t, sign))
          op.matrix(t, s) += static_cast<double>(sign) * k(i, j);
      }
    }
  }
  return op;
}

FockOperator<double> translation_operator(int n_sites) {
  check_size(n_sites);
  const State dim = State{1} << n_sites;
  FockOperator<double> op{n_sites, Matrix<double>::Zero(dim, dim), "translation"};
  for (State s = 0; s < dim; ++s) {
    // Apply c_{i+1}^+ for the occupied sites i in descending order, which
    // rebuilds c_{i1+1}^+ ... c_{ik+1}^+ |0> from the right.
    State t = 0;
    int sign = 1;
    for (int i = n_sites - 1; i >= 0; --i) {
      if (s >> i & 1)
        create((i + 1) % n_sites, t, sign);
    }
    op.matrix(t, s) = sign;
  }
  return op;
}

Matrix<Complex> translation_generator(int n_sites) {
  const double n = static_cast<double>(n_sites);
  Matrix<Complex> f(n_sites, n_sites);
  for (int m = 0; m < n_sites; ++m)
    for (int j = 0; j < n_sites; ++j)
      f(m, j) = std::polar(1.0 / std::sqrt(n), -2.0 * kPi * m * j / n);
  Vector<Complex> q(n_sites);
  for (int m = 0; m < n_sites; ++m)
    q(m) = 2.0 * kPi * m / n;
  return f.adjoint() * q.asDiagonal() * f;
}

FockGroundState ground_state(const FockOperator<double> &h, double min_gap) {
  const Eigen::SelfAdjointEigenSolver<Matrix<double>> solver(h.matrix);
  if (solver.info() != Eigen::Success)
    throw DiagonalizationError("Fock-space diagonalization failed");
  FockGroundState out;
  out.energy = solver.eigenvalues()(0);
  out.gap = h.dim() > 1 ? solver.eigenvalues()(1) - out.energy : 0.0;
  if (h.dim() > 1 && out.gap < min_gap)
    throw DegenerateGroundState("many-body ground state is degenerate (gap " +
                                std::to_string(out.gap) + ")");
  out.vector = solver.eigenvectors().col(0);
  return out;
}

namespace {

// exp(-i H t) |psi> through the eigendecomposition of H.
struct Propagator {
  explicit Propagator(const FockOperator<double> &h) : solver(h.matrix) {
    if (solver.info() != Eigen::Success)
      throw DiagonalizationError("Fock-space diagonalization failed");
  }

  Vector<Complex> evolve(const Vector<Complex> &psi, double t) const {
    const Vector<Complex> coeffs = solver.eigenvectors().transpose().cast<Complex>() * psi;
    const Vector<Complex> phases =
        solver.eigenvalues().unaryExpr([t](double e) { return std::polar(1.0, -e * t); });
    return solver.eigenvectors().cast<Complex>() * phases.cwiseProduct(coeffs);
  }

  Eigen::SelfAdjointEigenSolver<Matrix<double>> solver;
};

void check_oracle_spec(const ChainSpec &spec) {
  validate(spec);
  check_size(spec.n_sites);
}

} // namespace

EchoSeries oracle_echo_survival(const ChainSpec &spec, const Vector<double> &times,
                                Complex global_phase) {
  check_oracle_spec(spec);
  const auto h00 = lift_quadratic(build_hamiltonian(spec.with_label(QubitLabel::L00)));
  const Vector<Complex> e0 = global_phase * ground_state(h00).vector.cast<Complex>();
  const Propagator prop(lift_quadratic(build_hamiltonian(spec)));

  EchoSeries out{times, Vector<double>(times.size()), EchoKind::L00_11, spec, spec.site_b,
                 spec.coupling};
  switch (spec.label) {
  case QubitLabel::L01: out.kind = EchoKind::L00_01; break;
  case QubitLabel::L10: out.kind = EchoKind::L00_10; break;
  default: break;
  }
  for (Index k = 0; k < times.size(); ++k)
    out.values(k) = std::norm(e0.dot(prop.evolve(e0, times(k))));
  return out;
}

EchoSeries oracle_echo_survival(const ChainSpec &spec, const Vector<double> &times) {
  return oracle_echo_survival(spec, times, Complex{1.0, 0.0});
}

EchoSeries oracle_echo_exchange(const ChainSpec &spec, const Vector<double> &times) {
  check_oracle_spec(spec);
  const auto h00 = lift_quadratic(build_hamiltonian(spec.with_label(QubitLabel::L00)));
  const Vector<Complex> e0 = ground_state(h00).vector.cast<Complex>();
  const Propagator prop(lift_quadratic(build_hamiltonian(spec.with_label(QubitLabel::L10))));

  Matrix<double> shift = Matrix<double>::Identity(h00.dim(), h00.dim());
  const Matrix<double> t1 = translation_operator(spec.n_sites).matrix;
  for (int k = 0; k < spec.site_b; ++k)
    shift = t1 * shift;

  EchoSeries out{times, Vector<double>(times.size()), EchoKind::L01_10,
                 spec.with_label(QubitLabel::L10), spec.site_b, spec.coupling};
  for (Index k = 0; k < times.size(); ++k) {
    const Vector<Complex> psi = prop.evolve(e0, times(k));
    out.values(k) = std::norm(psi.dot(shift.cast<Complex>() * psi));
  }
  return out;
}

} // namespace chainecho
