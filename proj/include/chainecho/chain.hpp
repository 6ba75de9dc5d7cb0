#pragma once

#include <string>
#include <string_view>

#include "chainecho/types.hpp"

namespace chainecho {

/// Computational-basis state |ab> of the two qubits. The digit order is
/// (qubit A, qubit B), so `L10` perturbs only site 0.
enum class QubitLabel { L00, L01, L10, L11 };

int qubit_a(QubitLabel label);
int qubit_b(QubitLabel label);
QubitLabel make_label(int a, int b);
std::string_view to_string(QubitLabel label);
QubitLabel parse_label(std::string_view text);

/// Periodic XY chain of `n_sites` spins with qubit A on site 0 and qubit B on
/// site `site_b`. The label selects which effective Hamiltonian H_ab is
/// described.
struct ChainSpec {
  int n_sites = 2;
  double gamma = 1.0;
  double lambda = 0.5;
  double coupling = 0.0;
  int site_b = 0;
  QubitLabel label = QubitLabel::L00;

  static constexpr int site_a = 0;

  ChainSpec with_label(QubitLabel l) const {
    ChainSpec s = *this;
    s.label = l;
    return s;
  }
};

/// Throws InvalidArgument unless n_sites >= 2 and 0 <= site_b < n_sites.
void validate(const ChainSpec &spec);

/// Site-dependent transverse field: lambda + g (a delta_{j,0} + b delta_{j,d}).
Vector<double> field_profile(const ChainSpec &spec);

/// Quadratic fermion form
///   H = sum_ij c_i^+ A_ij c_j + 1/2 sum_ij B_ij (c_i^+ c_j^+ + c_j c_i) + shift
/// with A real symmetric and B real antisymmetric.
struct QuadraticHamiltonian {
  Matrix<double> a_mat;
  Matrix<double> b_mat;
  double const_shift = 0.0;

  Index size() const { return a_mat.rows(); }
};

/// Jordan-Wigner image of H_ab with cyclic fermionic couplings. The boundary
/// correction of the spin model is dropped; this quadratic form is the model.
QuadraticHamiltonian build_hamiltonian(const ChainSpec &spec);

} // namespace chainecho
