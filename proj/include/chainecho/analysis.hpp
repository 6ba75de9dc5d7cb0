#pragma once

#include <array>
#include <optional>
#include <vector>

#include "chainecho/echo.hpp"

namespace chainecho {

/// Equilibrium correlation length |ln lambda|^-1 of the Ising chain.
/// Throws InvalidArgument for lambda <= 0 and at the critical point lambda = 1.
double correlation_length(double lambda);

/// Centered moving average over the samples within +-window/2 of each point.
/// Near the ends the window shrinks symmetrically, so linear data is
/// reproduced exactly.
Vector<double> moving_average(const Vector<double> &values, double dt, double window);

inline constexpr double kDefaultSmoothingWindow = 2.0;

EchoSeries smooth(const EchoSeries &series, double window = kDefaultSmoothingWindow);

/// sum_j (L_d(t_j) - L_indep(t_j))^2 over a shared time grid.
double echo_distance_to_limit(const EchoSeries &echo_d, const EchoSeries &echo_indep);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual_norm = 0.0;
  double max_abs_residual = 0.0;
};

LinearFit fit_line(const Vector<double> &x, const Vector<double> &y);

/// Decay length from an exponential fit of norm(d) over the longest contiguous
/// run of distances (at least four) where the norms stay within `tolerance`
/// (relative) of the fitted exponential.
struct SaturationLength {
  double length = 0.0;
  LinearFit log_fit;
  int first_distance = 0;
  int last_distance = 0;
};

SaturationLength saturation_length(const std::vector<int> &distances, const Vector<double> &norms,
                                   double tolerance = 0.2);

/// l = c0 + c1 (c2 + 1/xi_eff)^-c3 with xi_eff = xi(lambda + shift).
double saturation_model(const std::array<double, 4> &c, double shift, double lambda);

struct SaturationFitOptions {
  double shift = 5.7e-3;
  bool free_shift = false;
};

struct SaturationFit {
  Vector<double> lambdas;
  Vector<double> lengths;
  std::array<double, 4> c{};
  double shift = 0.0;
  bool shift_free = false;
  /// Standard errors of c0..c3 and (when free) the shift; NaN without spare
  /// degrees of freedom.
  std::array<double, 5> stderr_{};
  Vector<double> residuals;
  double residual_norm = 0.0;
  bool converged = false;
  /// Starting points tried, in order.
  std::vector<std::array<double, 4>> start_grid;
};

/// Deterministic multi-start Levenberg-Marquardt fit of the saturation curve.
/// Needs at least six points. Non-convergence is reported through
/// `converged = false` with the best parameters found.
SaturationFit fit_saturation_curve(const Vector<double> &lambdas, const Vector<double> &lengths,
                                   const SaturationFitOptions &options = {});

/// Shape-preserving piecewise cubic Hermite interpolation (Fritsch-Carlson).
/// Values outside [x.front(), x.back()] are held at the end values.
Vector<double> pchip(const Vector<double> &x, const Vector<double> &y, const Vector<double> &at);

/// Upper envelope of a fast oscillation. The grid is cut into blocks two fast
/// periods (2 * 2 pi / fast_freq_hint) wide, each block contributes its
/// maximum (refined by a parabola through the neighbours), and the anchors are
/// interpolated back onto the grid with pchip.
EchoSeries envelope(const EchoSeries &series, double fast_freq_hint);

struct Peak {
  Index index = 0;
  double time = 0.0;
  double value = 0.0;
  double prominence = 0.0;
};

/// Interior local maxima (plateaus resolved to their middle sample) with
/// prominence >= min_prominence.
std::vector<Peak> find_peaks(const Vector<double> &times, const Vector<double> &values,
                             double min_prominence);

inline constexpr double kDefaultProminence = 0.1;

struct RevivalRecord {
  int distance = 0;
  double t_r = 0.0;
  double L_r = 0.0;
  std::vector<double> peak_times;
  std::vector<double> peak_values;

  bool empty() const { return peak_times.empty(); }
};

/// First and later revival peaks of an envelope. An envelope without a peak
/// of sufficient prominence gives an empty record.
RevivalRecord find_revivals(const EchoSeries &env, double prominence = kDefaultProminence);

struct PowerLawFit {
  double exponent = 0.0;
  double prefactor = 0.0;
  double residual_norm = 0.0;
};

/// y = prefactor * x^exponent by least squares in log-log space.
PowerLawFit fit_power_law(const Vector<double> &x, const Vector<double> &y);

/// Departure of an echo from its independent-environment baseline.
/// `depth` is 1 - min(baseline) over the reference window [0, reference_end];
/// an event is the first time in [t_start, t_end] where |echo - baseline|
/// exceeds fraction * depth.
struct DepartureScan {
  double depth = 0.0;
  double reference_relative = 0.0;
  double max_relative = 0.0;
  double time_of_max = 0.0;
  std::optional<double> first_event;
};

DepartureScan scan_departures(const EchoSeries &echo, const EchoSeries &baseline, double t_start,
                              double t_end, double fraction = 0.25, double reference_end = 10.0);

} // namespace chainecho
