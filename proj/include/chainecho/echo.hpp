#pragma once

#include <optional>
#include <string_view>

#include "chainecho/bogoliubov.hpp"
#include "chainecho/determinant.hpp"

namespace chainecho {

enum class EchoKind { L00_01, L00_10, L00_11, L01_10, SingleQubit, IndependentProduct };

std::string_view to_string(EchoKind kind);
EchoKind parse_echo_kind(std::string_view text);

/// Echo values on a time grid together with the chain they came from.
struct EchoSeries {
  Vector<double> times;
  Vector<double> values;
  EchoKind kind = EchoKind::L00_11;
  ChainSpec spec;
  int distance = 0;
  /// Coupling felt by the perturbed site(s); differs from spec.coupling only
  /// for single-qubit echoes.
  double coupling = 0.0;

  Index size() const { return times.size(); }
};

/// 0, dt, 2 dt, ... up to and including t_max (within rounding).
Vector<double> time_grid(double t_max, double dt);

struct EchoOptions {
  int workers = 1;
  /// Above this condition number of g the survival echo is evaluated in the
  /// SVD-rotated frame.
  double condition_limit = 1e8;
  double singular_threshold = kSingularThreshold;
  /// Values this far outside [0, 1] raise NumericalError; closer ones are clamped.
  double clamp_slack = 1e-6;
};

/// Clamps to [0, 1] or throws NumericalError.
double checked_echo_value(double value, double slack);

/// L_{00,ab}(t) = |<E0| exp(-i H_ab t) |E0>|^2 = |det(g + h exp(i Lambda t))|^2,
/// where (g, h) maps the unperturbed modes onto the perturbed ones.
class SurvivalEvaluator {
public:
  SurvivalEvaluator(const ModeBasis<double> &unperturbed, const ModeBasis<double> &perturbed,
                    const EchoOptions &options = {});

  LogDet amplitude(double t) const;
  double operator()(double t) const;

  bool regularized() const { return regularized_.has_value(); }
  const BogoliubovMap<double> &map() const { return map_; }
  const std::optional<RegularizedMap> &regularization() const { return regularized_; }

private:
  BogoliubovMap<double> map_;
  Vector<double> energies_;
  std::optional<RegularizedMap> regularized_;
  double slack_;
};

/// L_{01,10}(t) = |det(g' tau^-d g'^+ + h' tau^d h'^+)| with (g', h') the
/// dynamic map from the momentum modes of H_00 to exp(iH_10 t) eta exp(-iH_10 t)
/// and tau the diagonal of translation eigenvalues. `shift` is d; passing -d
/// evaluates the mirrored echo, which has the same value.
class ExchangeEvaluator {
public:
  ExchangeEvaluator(const ModeBasis<Complex> &momentum, const ModeBasis<double> &perturbed,
                    int shift, const EchoOptions &options = {});

  LogDet amplitude(double t) const;
  double operator()(double t) const;

private:
  BogoliubovMap<Complex> map_;
  Vector<double> energies_;
  Vector<Complex> tau_minus_;
  Vector<Complex> tau_plus_;
  double slack_;
};

/// Evaluates `eval` at every time, spreading points over options.workers.
template <typename Evaluator>
Vector<double> evaluate_on_grid(const Evaluator &eval, const Vector<double> &times,
                                int workers);

/// Survival echo of the perturbed label (01, 10 or 11) against the label-00
/// vacuum.
EchoSeries echo_survival(const ChainSpec &spec, const Vector<double> &times,
                         const EchoOptions &options = {});

/// Exchange echo L_{01,10} for qubits at distance spec.site_b.
EchoSeries echo_exchange(const ChainSpec &spec, const Vector<double> &times,
                         const EchoOptions &options = {});

/// L_{0,1}: one qubit on site 0 with coupling g_eff.
EchoSeries echo_single_qubit(const ChainSpec &spec, double g_eff, const Vector<double> &times,
                             const EchoOptions &options = {});

/// L_{0,1}^2, the two-independent-environments baseline.
EchoSeries independent_product(const EchoSeries &single);

} // namespace chainecho

#include "chainecho/parallel.hpp"

namespace chainecho {

template <typename Evaluator>
Vector<double> evaluate_on_grid(const Evaluator &eval, const Vector<double> &times,
                                int workers) {
  Vector<double> values(times.size());
  parallel_for(static_cast<std::size_t>(times.size()), workers, [&](std::size_t i) {
    values(static_cast<Index>(i)) = eval(times(static_cast<Index>(i)));
  });
  return values;
}

} // namespace chainecho
