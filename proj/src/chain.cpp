#include "chainecho/chain.hpp"

#include "chainecho/errors.hpp"

namespace chainecho {

int qubit_a(QubitLabel label) {
  return (label == QubitLabel::L10 || label == QubitLabel::L11) ? 1 : 0;
}

int qubit_b(QubitLabel label) {
  return (label == QubitLabel::L01 || label == QubitLabel::L11) ? 1 : 0;
}

QubitLabel make_label(int a, int b) {
  if ((a != 0 && a != 1) || (b != 0 && b != 1))
    throw InvalidArgument("qubit label digits must be 0 or 1");
  static constexpr QubitLabel table[2][2] = {{QubitLabel::L00, QubitLabel::L01},
                                             {QubitLabel::L10, QubitLabel::L11}};
  return table[a][b];
}

std::string_view to_string(QubitLabel label) {
  switch (label) {
  case QubitLabel::L00: return "00";
  case QubitLabel::L01: return "01";
  case QubitLabel::L10: return "10";
  case QubitLabel::L11: return "11";
  }
  return "??";
}

QubitLabel parse_label(std::string_view text) {
  if (text.size() != 2)
    throw InvalidArgument("qubit label must have two digits, got '" + std::string(text) + "'");
  return make_label(text[0] - '0', text[1] - '0');
}

void validate(const ChainSpec &spec) {
  if (spec.n_sites < 2)
    throw InvalidArgument("chain needs at least 2 sites");
  if (spec.site_b < 0 || spec.site_b >= spec.n_sites)
    throw InvalidArgument("site_b = " + std::to_string(spec.site_b) + " outside [0, " +
                          std::to_string(spec.n_sites - 1) + "]");
  if (spec.coupling < 0.0)
    throw InvalidArgument("coupling must be non-negative");
}

Vector<double> field_profile(const ChainSpec &spec) {
  validate(spec);
  Vector<double> field = Vector<double>::Constant(spec.n_sites, spec.lambda);
  field(ChainSpec::site_a) += spec.coupling * qubit_a(spec.label);
  field(spec.site_b) += spec.coupling * qubit_b(spec.label);
  return field;
}

QuadraticHamiltonian build_hamiltonian(const ChainSpec &spec) {
  const Vector<double> field = field_profile(spec);
  const Index n = spec.n_sites;

  QuadraticHamiltonian h;
  h.a_mat = Matrix<double>::Zero(n, n);
  h.b_mat = Matrix<double>::Zero(n, n);

  // -(c_j^+ c_{j+1} + h.c.) - gamma (c_j^+ c_{j+1}^+ + h.c.), j+1 taken mod n.
  // Mirrored entries receive the same sequence of updates, which keeps the
  // symmetry of A and antisymmetry of B exact even for n = 2.
  for (Index j = 0; j < n; ++j) {
    const Index k = (j + 1) % n;
    h.a_mat(j, k) += -1.0;
    h.a_mat(k, j) += -1.0;
    h.b_mat(j, k) += -spec.gamma;
    h.b_mat(k, j) -= -spec.gamma;
  }
  // -lambda_j (2 c_j^+ c_j - 1)
  h.a_mat.diagonal() = -2.0 * field;
  h.const_shift = field.sum();
  return h;
}

} // namespace chainecho
