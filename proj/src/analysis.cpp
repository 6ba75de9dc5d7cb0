#include "chainecho/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <unsupported/Eigen/NonLinearOptimization>
#include <unsupported/Eigen/NumericalDiff>

#include "chainecho/errors.hpp"

namespace chainecho {

double correlation_length(double lambda) {
  if (!(lambda > 0.0))
    throw InvalidArgument("correlation length needs lambda > 0");
  const double log_lambda = std::abs(std::log(lambda));
  if (log_lambda == 0.0)
    throw InvalidArgument("correlation length diverges at the critical point lambda = 1");
  return 1.0 / log_lambda;
}

Vector<double> moving_average(const Vector<double> &values, double dt, double window) {
  if (!(dt > 0.0) || window < dt * (1.0 - 1e-12))
    throw InvalidArgument("smoothing window must be at least the grid spacing");
  const Index n = values.size();
  const auto half = static_cast<Index>(std::floor(window / (2.0 * dt) + 1e-9));
  Vector<double> prefix(n + 1);
  prefix(0) = 0.0;
  for (Index i = 0; i < n; ++i)
    prefix(i + 1) = prefix(i) + values(i);
  Vector<double> out(n);
  for (Index i = 0; i < n; ++i) {
    const Index w = std::min({half, i, n - 1 - i});
    out(i) = (prefix(i + w + 1) - prefix(i - w)) / static_cast<double>(2 * w + 1);
  }
  return out;
}

namespace {

double grid_spacing(const Vector<double> &times) {
  if (times.size() < 2)
    throw InvalidArgument("series needs at least two samples");
  return times(1) - times(0);
}

} // namespace

EchoSeries smooth(const EchoSeries &series, double window) {
  EchoSeries out = series;
  out.values = moving_average(series.values, grid_spacing(series.times), window);
  return out;
}

double echo_distance_to_limit(const EchoSeries &echo_d, const EchoSeries &echo_indep) {
  if (echo_d.size() != echo_indep.size() ||
      (echo_d.times - echo_indep.times).cwiseAbs().maxCoeff() > 1e-12)
    throw InvalidArgument("echo series are on different time grids");
  return (echo_d.values - echo_indep.values).squaredNorm();
}

LinearFit fit_line(const Vector<double> &x, const Vector<double> &y) {
  if (x.size() != y.size() || x.size() < 2)
    throw InvalidArgument("line fit needs two or more matching points");
  const double mx = x.mean();
  const double my = y.mean();
  const Vector<double> dx = x.array() - mx;
  const double sxx = dx.squaredNorm();
  if (sxx == 0.0)
    throw FitError("line fit with a single abscissa");
  LinearFit fit;
  fit.slope = dx.dot(y.array().matrix() - Vector<double>::Constant(x.size(), my)) / sxx;
  fit.intercept = my - fit.slope * mx;
  const Vector<double> r = y.array() - (fit.intercept + fit.slope * x.array());
  fit.residual_norm = r.norm();
  fit.max_abs_residual = r.cwiseAbs().maxCoeff();
  return fit;
}

SaturationLength saturation_length(const std::vector<int> &distances, const Vector<double> &norms,
                                   double tolerance) {
  const auto n = static_cast<Index>(distances.size());
  if (n != norms.size())
    throw InvalidArgument("distances and norms differ in length");
  if (n < 4)
    throw InvalidArgument("saturation length needs at least four distances");
  if ((norms.array() <= 0.0).any())
    throw InvalidArgument("saturation length needs positive norms");

  Vector<double> x(n);
  for (Index i = 0; i < n; ++i)
    x(i) = distances[static_cast<std::size_t>(i)];
  const Vector<double> y = norms.array().log();
  const double allowed = std::log1p(tolerance);

  std::optional<SaturationLength> best;
  Index best_len = 0;
  for (Index first = 0; first + 4 <= n; ++first) {
    for (Index len = 4; first + len <= n; ++len) {
      const LinearFit fit = fit_line(x.segment(first, len), y.segment(first, len));
      if (fit.slope >= 0.0 || fit.max_abs_residual > allowed)
        continue;
      // Ties go to the range further out, which sits closer to the limit.
      if (len >= best_len) {
        best_len = len;
        best = SaturationLength{-1.0 / fit.slope, fit, distances[static_cast<std::size_t>(first)],
                                distances[static_cast<std::size_t>(first + len - 1)]};
      }
    }
  }
  if (!best)
    throw FitError("norms do not decay exponentially over any range of four distances");
  return *best;
}

double saturation_model(const std::array<double, 4> &c, double shift, double lambda) {
  const double inv_xi = std::abs(std::log(lambda + shift));
  return c[0] + c[1] * std::pow(c[2] + inv_xi, -c[3]);
}

namespace {

struct SaturationResidual {
  using Scalar = double;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };
  using InputType = Eigen::VectorXd;
  using ValueType = Eigen::VectorXd;
  using JacobianType = Eigen::MatrixXd;

  const Vector<double> *lambdas;
  const Vector<double> *lengths;
  double fixed_shift;
  bool free_shift;

  int inputs() const { return free_shift ? 5 : 4; }
  int values() const { return static_cast<int>(lambdas->size()); }

  int operator()(const Eigen::VectorXd &p, Eigen::VectorXd &r) const {
    const std::array<double, 4> c{p(0), p(1), p(2), p(3)};
    const double shift = free_shift ? p(4) : fixed_shift;
    for (Index i = 0; i < lambdas->size(); ++i) {
      const double lam = (*lambdas)(i) + shift;
      const double base = lam > 0.0 ? c[2] + std::abs(std::log(lam)) : -1.0;
      // Outside the model's domain: a large smooth penalty keeps LM away.
      r(i) = base > 0.0 ? saturation_model(c, shift, (*lambdas)(i)) - (*lengths)(i)
                        : 1e3 * (1.0 - base);
    }
    return 0;
  }
};

std::vector<std::array<double, 4>> saturation_start_grid() {
  std::vector<std::array<double, 4>> grid;
  for (double c0 : {0.5, 1.0, 1.5})
    for (double c1 : {0.05, 0.2, 0.5})
      for (double c2 : {0.05, 0.2, 0.5})
        for (double c3 : {1.0, 2.0, 3.0})
          grid.push_back({c0, c1, c2, c3});
  return grid;
}

} // namespace

SaturationFit fit_saturation_curve(const Vector<double> &lambdas, const Vector<double> &lengths,
                                   const SaturationFitOptions &options) {
  if (lambdas.size() != lengths.size())
    throw InvalidArgument("lambdas and lengths differ in length");
  if (lambdas.size() < 6)
    throw InvalidArgument("saturation fit needs at least six points");

  SaturationFit out;
  out.lambdas = lambdas;
  out.lengths = lengths;
  out.shift_free = options.free_shift;
  out.start_grid = saturation_start_grid();

  const SaturationResidual functor{&lambdas, &lengths, options.shift, options.free_shift};
  const int np = functor.inputs();
  if (functor.values() < np)
    throw InvalidArgument("saturation fit has more parameters than points");

  double best_cost = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_p;
  bool best_ok = false;
  for (const auto &start : out.start_grid) {
    Eigen::VectorXd p(np);
    p.head<4>() = Eigen::Vector4d(start[0], start[1], start[2], start[3]);
    if (options.free_shift)
      p(4) = options.shift;
    Eigen::NumericalDiff<SaturationResidual> diff(functor);
    Eigen::LevenbergMarquardt<Eigen::NumericalDiff<SaturationResidual>> lm(diff);
    lm.parameters.maxfev = 4000;
    const auto status = lm.minimize(p);
    Eigen::VectorXd r(functor.values());
    functor(p, r);
    const double cost = r.squaredNorm();
    if (!std::isfinite(cost) || cost >= best_cost)
      continue;
    best_cost = cost;
    best_p = p;
    best_ok = status == Eigen::LevenbergMarquardtSpace::RelativeReductionTooSmall ||
              status == Eigen::LevenbergMarquardtSpace::RelativeErrorTooSmall ||
              status == Eigen::LevenbergMarquardtSpace::RelativeErrorAndReductionTooSmall ||
              status == Eigen::LevenbergMarquardtSpace::CosinusTooSmall;
  }
  if (best_p.size() == 0)
    throw FitError("saturation fit produced no finite residuals");

  out.c = {best_p(0), best_p(1), best_p(2), best_p(3)};
  out.shift = options.free_shift ? best_p(4) : options.shift;
  out.converged = best_ok;
  out.residuals.resize(functor.values());
  functor(best_p, out.residuals);
  out.residual_norm = out.residuals.norm();

  // Standard errors from the Gauss-Newton covariance at the optimum.
  out.stderr_.fill(std::numeric_limits<double>::quiet_NaN());
  const int dof = functor.values() - np;
  if (dof > 0) {
    Eigen::NumericalDiff<SaturationResidual, Eigen::Central> diff(functor);
    Eigen::MatrixXd jac(functor.values(), np);
    diff.df(best_p, jac);
    const Eigen::MatrixXd jtj = jac.transpose() * jac;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(jtj);
    if (lu.isInvertible()) {
      const Eigen::MatrixXd cov = lu.inverse() * (best_cost / dof);
      for (int k = 0; k < np; ++k)
        out.stderr_[static_cast<std::size_t>(k)] = std::sqrt(std::max(0.0, cov(k, k)));
    }
  }
  return out;
}

Vector<double> pchip(const Vector<double> &x, const Vector<double> &y, const Vector<double> &at) {
  const Index n = x.size();
  if (n != y.size() || n == 0)
    throw InvalidArgument("pchip needs matching, non-empty knots");
  Vector<double> out(at.size());
  if (n == 1) {
    out.setConstant(y(0));
    return out;
  }
  Vector<double> h(n - 1), delta(n - 1);
  for (Index k = 0; k + 1 < n; ++k) {
    h(k) = x(k + 1) - x(k);
    if (!(h(k) > 0.0))
      throw InvalidArgument("pchip knots must increase strictly");
    delta(k) = (y(k + 1) - y(k)) / h(k);
  }
  Vector<double> d(n);
  if (n == 2) {
    d.setConstant(delta(0));
  } else {
    for (Index k = 1; k + 1 < n; ++k) {
      if (delta(k - 1) * delta(k) <= 0.0) {
        d(k) = 0.0;
      } else {
        const double w1 = 2.0 * h(k) + h(k - 1);
        const double w2 = h(k) + 2.0 * h(k - 1);
        d(k) = (w1 + w2) / (w1 / delta(k - 1) + w2 / delta(k));
      }
    }
    auto edge = [](double h0, double h1, double m0, double m1) {
      double v = ((2.0 * h0 + h1) * m0 - h0 * m1) / (h0 + h1);
      if (v * m0 <= 0.0)
        v = 0.0;
      else if (m0 * m1 <= 0.0 && std::abs(v) > 3.0 * std::abs(m0))
        v = 3.0 * m0;
      return v;
    };
    d(0) = edge(h(0), h(1), delta(0), delta(1));
    d(n - 1) = edge(h(n - 2), h(n - 3), delta(n - 2), delta(n - 3));
  }

  for (Index i = 0; i < at.size(); ++i) {
    const double t = at(i);
    if (t <= x(0)) {
      out(i) = y(0);
      continue;
    }
    if (t >= x(n - 1)) {
      out(i) = y(n - 1);
      continue;
    }
    const Index k = static_cast<Index>(std::upper_bound(x.data(), x.data() + n, t) - x.data()) - 1;
    const double s = (t - x(k)) / h(k);
    const double s2 = s * s;
    const double s3 = s2 * s;
    out(i) = (2 * s3 - 3 * s2 + 1) * y(k) + (s3 - 2 * s2 + s) * h(k) * d(k) +
             (-2 * s3 + 3 * s2) * y(k + 1) + (s3 - s2) * h(k) * d(k + 1);
  }
  return out;
}

EchoSeries envelope(const EchoSeries &series, double fast_freq_hint) {
  if (!(fast_freq_hint > 0.0))
    throw InvalidArgument("envelope needs a positive frequency hint");
  const double dt = grid_spacing(series.times);
  const double width = 2.0 * (2.0 * kPi / fast_freq_hint);
  if (width < dt)
    throw InvalidArgument("envelope window is shorter than the grid spacing");
  const Index n = series.size();
  const Index block = std::max<Index>(1, static_cast<Index>(std::lround(width / dt)));
  const Vector<double> &v = series.values;

  std::vector<double> kx, ky;
  // Last entry: one fast period at the end of the grid, so the tail is not held
  // flat from a peak up to two periods back.
  std::vector<std::pair<Index, Index>> blocks;
  for (Index next = 0; next < n; next += block) {
    // A short last block is widened backwards so it still spans two periods.
    const Index start = next + block > n ? std::max<Index>(0, n - block) : next;
    blocks.emplace_back(start, std::min(block, n - start));
  }
  const Index period = std::max<Index>(1, block / 2);
  blocks.emplace_back(std::max<Index>(0, n - period), std::min(period, n));
  for (const auto &[start, len] : blocks) {
    // Prefer the largest local maximum; a block edge on a slope is not a peak.
    Index i = -1;
    for (Index k = start; k < start + len; ++k) {
      const bool peak = (k == 0 || v(k - 1) <= v(k)) && (k + 1 == n || v(k + 1) <= v(k));
      if (peak && (i < 0 || v(k) > v(i)))
        i = k;
    }
    if (i < 0) {
      v.segment(start, len).maxCoeff(&i);
      i += start;
    }
    double t = series.times(i);
    double y = v(i);
    if (i > 0 && i + 1 < n) {
      const double ym = v(i - 1), yp = v(i + 1);
      const double curv = ym - 2.0 * y + yp;
      if (curv < 0.0 && ym <= y && yp <= y) {
        const double off = 0.5 * (ym - yp) / curv;
        t += off * dt;
        y -= 0.25 * (ym - yp) * off;
      }
    }
    if (!kx.empty() && t <= kx.back())
      continue;
    kx.push_back(t);
    ky.push_back(y);
  }
  EchoSeries out = series;
  out.values = pchip(Eigen::Map<const Vector<double>>(kx.data(), static_cast<Index>(kx.size())),
                     Eigen::Map<const Vector<double>>(ky.data(), static_cast<Index>(ky.size())),
                     series.times);
  return out;
}

std::vector<Peak> find_peaks(const Vector<double> &times, const Vector<double> &values,
                             double min_prominence) {
  const Index n = values.size();
  if (times.size() != n)
    throw InvalidArgument("times and values differ in length");
  std::vector<Peak> peaks;
  Index i = 1;
  while (i + 1 < n) {
    if (values(i - 1) < values(i)) {
      Index j = i;
      while (j + 1 < n && values(j + 1) == values(i))
        ++j;
      if (j + 1 < n && values(j + 1) < values(i)) {
        const Index mid = (i + j) / 2;
        const double v = values(mid);
        double left = v;
        for (Index k = i - 1; k >= 0 && values(k) <= v; --k)
          left = std::min(left, values(k));
        double right = v;
        for (Index k = j + 1; k < n && values(k) <= v; ++k)
          right = std::min(right, values(k));
        const double prominence = v - std::max(left, right);
        if (prominence >= min_prominence)
          peaks.push_back({mid, times(mid), v, prominence});
      }
      i = j + 1;
    } else {
      ++i;
    }
  }
  return peaks;
}

RevivalRecord find_revivals(const EchoSeries &env, double prominence) {
  RevivalRecord rec;
  rec.distance = env.distance;
  for (const Peak &p : find_peaks(env.times, env.values, prominence)) {
    if (p.time <= 0.0)
      continue;
    rec.peak_times.push_back(p.time);
    rec.peak_values.push_back(p.value);
  }
  if (!rec.empty()) {
    rec.t_r = rec.peak_times.front();
    rec.L_r = rec.peak_values.front();
  }
  return rec;
}

PowerLawFit fit_power_law(const Vector<double> &x, const Vector<double> &y) {
  if ((x.array() <= 0.0).any() || (y.array() <= 0.0).any())
    throw InvalidArgument("power-law fit needs positive data");
  const LinearFit line = fit_line(x.array().log().matrix(), y.array().log().matrix());
  return {line.slope, std::exp(line.intercept), line.residual_norm};
}

DepartureScan scan_departures(const EchoSeries &echo, const EchoSeries &baseline, double t_start,
                              double t_end, double fraction, double reference_end) {
  if (echo.size() != baseline.size() ||
      (echo.times - baseline.times).cwiseAbs().maxCoeff() > 1e-12)
    throw InvalidArgument("echo series are on different time grids");
  DepartureScan scan;
  double floor_value = 1.0;
  for (Index i = 0; i < echo.size(); ++i)
    if (echo.times(i) <= reference_end)
      floor_value = std::min(floor_value, baseline.values(i));
  scan.depth = 1.0 - floor_value;
  if (!(scan.depth > 0.0))
    throw NumericalError("baseline does not decay over the reference window");
  for (Index i = 0; i < echo.size(); ++i) {
    const double t = echo.times(i);
    const double rel = std::abs(echo.values(i) - baseline.values(i)) / scan.depth;
    if (t <= reference_end)
      scan.reference_relative = std::max(scan.reference_relative, rel);
    if (t < t_start || t > t_end)
      continue;
    if (rel > scan.max_relative) {
      scan.max_relative = rel;
      scan.time_of_max = t;
    }
    if (!scan.first_event && rel > fraction)
      scan.first_event = t;
  }
  return scan;
}

} // namespace chainecho
