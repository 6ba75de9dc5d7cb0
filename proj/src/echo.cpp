#include "chainecho/echo.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "chainecho/errors.hpp"

namespace chainecho {

std::string_view to_string(EchoKind kind) {
  switch (kind) {
  case EchoKind::L00_01: return "L00_01";
  case EchoKind::L00_10: return "L00_10";
  case EchoKind::L00_11: return "L00_11";
  case EchoKind::L01_10: return "L01_10";
  case EchoKind::SingleQubit: return "single_qubit";
  case EchoKind::IndependentProduct: return "independent_product";
  }
  return "unknown";
}

EchoKind parse_echo_kind(std::string_view text) {
  for (EchoKind k : {EchoKind::L00_01, EchoKind::L00_10, EchoKind::L00_11, EchoKind::L01_10,
                     EchoKind::SingleQubit, EchoKind::IndependentProduct}) {
    if (text == to_string(k))
      return k;
  }
  throw InvalidArgument("unknown echo kind '" + std::string(text) + "'");
}

Vector<double> time_grid(double t_max, double dt) {
  if (!(dt > 0.0) || !(t_max > 0.0))
    throw InvalidArgument("time grid needs t_max > 0 and dt > 0");
  const auto steps = static_cast<Index>(std::floor(t_max / dt + 1e-9));
  Vector<double> times(steps + 1);
  for (Index k = 0; k <= steps; ++k)
    times(k) = static_cast<double>(k) * dt;
  return times;
}

double checked_echo_value(double value, double slack) {
  if (!std::isfinite(value))
    throw NumericalError("echo value is not finite");
  if (value < -slack || value > 1.0 + slack)
    throw NumericalError("echo value " + std::to_string(value) + " outside [0, 1]");
  return std::clamp(value, 0.0, 1.0);
}

SurvivalEvaluator::SurvivalEvaluator(const ModeBasis<double> &unperturbed,
                                     const ModeBasis<double> &perturbed,
                                     const EchoOptions &options)
    : map_(relate_bases(unperturbed, perturbed, "00", "ab")), energies_(perturbed.energies),
      slack_(options.clamp_slack) {
  if (condition_number(map_.g) > options.condition_limit)
    regularized_ = svd_regularize(map_, options.singular_threshold);
}

LogDet SurvivalEvaluator::amplitude(double t) const {
  const Vector<Complex> phase = energies_.unaryExpr([t](double e) { return std::polar(1.0, e * t); });
  if (!regularized_)
    return log_determinant(map_.g.cast<Complex>() + map_.h.cast<Complex>() * phase.asDiagonal());

  // U^T (g + h E) W = D + h_rot (W^T E W); |det U| = |det W| = 1.
  const RegularizedMap &r = *regularized_;
  const Matrix<Complex> w = r.w.cast<Complex>();
  const Matrix<Complex> rotated_phase = w.transpose() * phase.asDiagonal() * w;
  Matrix<Complex> m = r.h_rot.cast<Complex>() * rotated_phase;
  m.diagonal() += r.regular_diagonal().cast<Complex>();
  return log_determinant(m);
}

double SurvivalEvaluator::operator()(double t) const {
  return checked_echo_value(amplitude(t).abs_pow(2.0), slack_);
}

ExchangeEvaluator::ExchangeEvaluator(const ModeBasis<Complex> &momentum,
                                     const ModeBasis<double> &perturbed, int shift,
                                     const EchoOptions &options)
    : map_(relate_bases(momentum, perturbed, "00", "10")), energies_(perturbed.energies),
      slack_(options.clamp_slack) {
  if (!momentum.momenta)
    throw InvalidArgument("exchange echo needs momentum-labelled unperturbed modes");
  // tau^d taken directly from the angle 2 pi k d / N.
  const double d = static_cast<double>(shift);
  const double n = static_cast<double>(momentum.size());
  tau_plus_ = momentum.momenta->cast<double>().unaryExpr(
      [n, d](double k) { return std::polar(1.0, 2.0 * kPi * k * d / n); });
  tau_minus_ = tau_plus_.conjugate();
}

LogDet ExchangeEvaluator::amplitude(double t) const {
  const BogoliubovMap<Complex> dyn = dynamic_map(map_, energies_, t);
  Matrix<Complex> m;
  m.noalias() = (dyn.g * tau_minus_.asDiagonal()) * dyn.g.adjoint();
  m.noalias() += (dyn.h * tau_plus_.asDiagonal()) * dyn.h.adjoint();
  return log_determinant(m);
}

double ExchangeEvaluator::operator()(double t) const {
  return checked_echo_value(amplitude(t).abs_pow(1.0), slack_);
}

namespace {

EchoKind survival_kind(QubitLabel label) {
  switch (label) {
  case QubitLabel::L01: return EchoKind::L00_01;
  case QubitLabel::L10: return EchoKind::L00_10;
  case QubitLabel::L11: return EchoKind::L00_11;
  case QubitLabel::L00: break;
  }
  throw InvalidArgument("survival echo needs a perturbed label (01, 10 or 11)");
}

} // namespace

EchoSeries echo_survival(const ChainSpec &spec, const Vector<double> &times,
                         const EchoOptions &options) {
  validate(spec);
  const EchoKind kind = survival_kind(spec.label);
  const ModeBasis<double> b0 = diagonalize(build_hamiltonian(spec.with_label(QubitLabel::L00)));
  const ModeBasis<double> b1 = diagonalize(build_hamiltonian(spec));
  const SurvivalEvaluator eval(b0, b1, options);
  return {times, evaluate_on_grid(eval, times, options.workers), kind, spec, spec.site_b,
          spec.coupling};
}

EchoSeries echo_exchange(const ChainSpec &spec, const Vector<double> &times,
                         const EchoOptions &options) {
  validate(spec);
  const ModeBasis<Complex> b0 = momentum_modes(spec.with_label(QubitLabel::L00));
  const ModeBasis<double> b1 = diagonalize(build_hamiltonian(spec.with_label(QubitLabel::L10)));
  const ExchangeEvaluator eval(b0, b1, spec.site_b, options);
  return {times, evaluate_on_grid(eval, times, options.workers), EchoKind::L01_10,
          spec.with_label(QubitLabel::L10), spec.site_b, spec.coupling};
}

EchoSeries echo_single_qubit(const ChainSpec &spec, double g_eff, const Vector<double> &times,
                             const EchoOptions &options) {
  ChainSpec single = spec;
  single.coupling = g_eff;
  single.label = QubitLabel::L10;
  EchoSeries out = echo_survival(single, times, options);
  out.kind = EchoKind::SingleQubit;
  out.distance = spec.site_b;
  out.coupling = g_eff;
  return out;
}

EchoSeries independent_product(const EchoSeries &single) {
  if (single.kind != EchoKind::SingleQubit)
    throw InvalidArgument("independent product is built from a single-qubit echo");
  EchoSeries out = single;
  out.values = single.values.array().square();
  out.kind = EchoKind::IndependentProduct;
  return out;
}

} // namespace chainecho
