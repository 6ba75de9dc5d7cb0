#include "chainecho/modes.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "chainecho/errors.hpp"

namespace chainecho {

double vacuum_energy(const Vector<double> &energies, const QuadraticHamiltonian &h) {
  return -0.5 * energies.sum() + 0.5 * h.a_mat.trace() + h.const_shift;
}

ModeBasis<double> diagonalize(const QuadraticHamiltonian &h) {
  const Index n = h.size();
  if (n == 0 || h.b_mat.rows() != n)
    throw InvalidArgument("quadratic form has inconsistent dimensions");
  if (!h.a_mat.allFinite() || !h.b_mat.allFinite())
    throw DiagonalizationError("quadratic form has non-finite entries");

  const Matrix<double> minus = h.a_mat - h.b_mat;
  Eigen::BDCSVD<Matrix<double>> svd(minus, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (svd.info() != Eigen::Success || !svd.singularValues().allFinite())
    throw DiagonalizationError("SVD of A - B did not converge");

  ModeBasis<double> basis;
  basis.energies = svd.singularValues().reverse();
  basis.phi = svd.matrixU().rowwise().reverse().transpose();
  basis.psi = svd.matrixV().rowwise().reverse().transpose();

  // A zero mode may be relabelled particle <-> hole, which flips phi_k alone.
  for (Index k = 0; k < n; ++k) {
    if (basis.energies(k) < kZeroModeTolerance && basis.phi(k, k) < 0.0)
      basis.phi.row(k) *= -1.0;
  }
  return basis;
}

namespace {

// Rows G' with G'(k, i) = G(k, i - 1): the coefficients of T eta T^-1 when
// T c_i T^-1 = c_{i+1}.
Matrix<Complex> shift_columns(const Matrix<Complex> &m) {
  const Index n = m.cols();
  Matrix<Complex> out(m.rows(), n);
  for (Index i = 0; i < n; ++i)
    out.col(i) = m.col((i - 1 + n) % n);
  return out;
}

} // namespace

ModeBasis<Complex> momentum_modes(const ChainSpec &spec) {
  validate(spec);
  if (spec.label != QubitLabel::L00 && spec.coupling != 0.0)
    throw InvalidArgument("momentum modes need a translation-invariant chain (label 00)");

  const QuadraticHamiltonian h = build_hamiltonian(spec.with_label(QubitLabel::L00));
  ModeBasis<Complex> basis = diagonalize(h).cast<Complex>();
  const Index n = basis.size();
  Eigen::VectorXi momenta(n);

  Index first = 0;
  while (first < n) {
    Index last = first + 1;
    const double tol = 1e-9 * std::max(1.0, basis.energies(first));
    while (last < n && basis.energies(last) - basis.energies(first) < tol)
      ++last;
    const Index width = last - first;

    const Matrix<Complex> g = basis.particle().middleRows(first, width);
    const Matrix<Complex> hh = basis.hole().middleRows(first, width);
    const Matrix<Complex> action =
        shift_columns(g) * g.adjoint() + shift_columns(hh) * hh.adjoint();
    const double unitarity =
        (action * action.adjoint() - Matrix<Complex>::Identity(width, width)).cwiseAbs().maxCoeff();
    if (unitarity > 1e-8)
      throw DiagonalizationError("degenerate subspace is not closed under translation");

    // Normal matrix, so the Schur form is diagonal and Q is unitary.
    Eigen::ComplexSchur<Matrix<Complex>> schur(action);
    if (schur.info() != Eigen::Success)
      throw DiagonalizationError("Schur decomposition of the translation action failed");
    const Matrix<Complex> q = schur.matrixU();
    basis.phi.middleRows(first, width) = q.adjoint() * basis.phi.middleRows(first, width);
    basis.psi.middleRows(first, width) = q.adjoint() * basis.psi.middleRows(first, width);

    for (Index m = 0; m < width; ++m) {
      // T eta T^-1 = mu eta, hence T eta^+ T^-1 = conj(mu) eta^+.
      const Complex mu = schur.matrixT()(m, m);
      const double turns = std::arg(std::conj(mu)) * static_cast<double>(n) / (2.0 * kPi);
      const double rounded = std::round(turns);
      if (std::abs(std::abs(mu) - 1.0) > 1e-8 || std::abs(turns - rounded) > 1e-6)
        throw DiagonalizationError("translation eigenvalue is not an N-th root of unity");
      long k = static_cast<long>(rounded) % n;
      if (k <= 0)
        k += n;
      momenta(first + m) = static_cast<int>(k);
    }
    first = last;
  }
  basis.momenta = momenta;
  return basis;
}

Vector<Complex> translation_phases(const ModeBasis<Complex> &basis) {
  if (!basis.momenta)
    throw InvalidArgument("basis carries no momentum labels");
  const double n = static_cast<double>(basis.size());
  return basis.momenta->cast<double>().unaryExpr(
      [n](double k) { return std::polar(1.0, 2.0 * kPi * k / n); });
}

} // namespace chainecho
