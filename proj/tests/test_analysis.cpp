#include <doctest.h>

#include "chainecho/analysis.hpp"
#include "chainecho/errors.hpp"

using namespace chainecho;

namespace {

EchoSeries series(const Vector<double> &t, const Vector<double> &v) {
  EchoSeries s;
  s.times = t;
  s.values = v;
  return s;
}

} // namespace

TEST_CASE("correlation length") {
  CHECK(correlation_length(std::exp(-1.0)) == doctest::Approx(1.0));
  CHECK(correlation_length(0.5) == doctest::Approx(1.4426950408889634));
  CHECK(correlation_length(2.0) == doctest::Approx(1.4426950408889634));
  CHECK(correlation_length(0.999) > 900.0);
  CHECK_THROWS_AS(correlation_length(1.0), InvalidArgument);
  CHECK_THROWS_AS(correlation_length(0.0), InvalidArgument);
}

TEST_CASE("smoothing keeps constants and flattens whole periods") {
  const Vector<double> t = time_grid(20.0, 0.05);
  const auto flat = smooth(series(t, Vector<double>::Constant(t.size(), 0.3)));
  CHECK((flat.values.array() - 0.3).abs().maxCoeff() < 1e-14);
  CHECK(flat.size() == t.size());

  // Window 2.0 spans 41 samples; a period of 41 * 0.05 averages out exactly.
  const double period = 41 * 0.05;
  const Vector<double> wave = 0.5 + (2.0 * kPi / period * t.array()).sin();
  const auto s = smooth(series(t, wave), 2.0);
  for (Index i = 20; i + 20 < t.size(); ++i)
    CHECK(std::abs(s.values(i) - 0.5) < 1e-10);
}

TEST_CASE("smoothing reproduces linear data including the ends") {
  const Vector<double> t = time_grid(10.0, 0.1);
  const Vector<double> line = 1.0 - 0.07 * t.array();
  CHECK((smooth(series(t, line), 1.5).values - line).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("smoothing window must cover a grid step") {
  const Vector<double> t = time_grid(1.0, 0.1);
  CHECK_THROWS_AS(smooth(series(t, t), 0.05), InvalidArgument);
}

TEST_CASE("smoothing and envelope are idempotent on smooth input") {
  const Vector<double> t = time_grid(30.0, 0.01);
  const Vector<double> slow = (-t.array() / 7.0).exp() * (1.0 + 0.2 * (t.array() / 5.0).cos()) / 1.2;
  const auto once = smooth(series(t, slow), 0.5);
  const auto twice = smooth(once, 0.5);
  CHECK((twice.values - once.values).cwiseAbs().maxCoeff() < 1e-3);
  const auto env = envelope(series(t, slow), 100.0);
  CHECK((env.values - slow).cwiseAbs().maxCoeff() < 1e-3);
}

TEST_CASE("distance to the independent limit") {
  const Vector<double> t = time_grid(10.0, 0.05);
  const Vector<double> a = (-t.array() / 3.0).exp();
  CHECK(echo_distance_to_limit(series(t, a), series(t, a)) == 0.0);
  const Vector<double> b = a.array() + 0.01;
  CHECK(echo_distance_to_limit(series(t, b), series(t, a)) ==
        doctest::Approx(static_cast<double>(t.size()) * 1e-4));
  CHECK_THROWS_AS(echo_distance_to_limit(series(t, a), series(time_grid(10.0, 0.1),
                                                                Vector<double>::Zero(101))),
                  InvalidArgument);
}

TEST_CASE("saturation length of an exact exponential") {
  std::vector<int> d;
  Vector<double> norms(12);
  for (int k = 1; k <= 12; ++k) {
    d.push_back(k);
    norms(k - 1) = 3.7 * std::exp(-k / 2.0);
  }
  const auto l = saturation_length(d, norms);
  CHECK(std::abs(l.length - 2.0) < 1e-8);
  CHECK(l.first_distance == 1);
  CHECK(l.last_distance == 12);
}

TEST_CASE("saturation length fits the tail past a non-exponential head") {
  std::vector<int> d;
  Vector<double> norms(10);
  for (int k = 1; k <= 10; ++k) {
    d.push_back(k);
    norms(k - 1) = std::exp(-k / 1.5) * (k <= 2 ? 5.0 : 1.0);
  }
  const auto l = saturation_length(d, norms);
  CHECK(l.first_distance == 3);
  CHECK(l.length == doctest::Approx(1.5));
}

TEST_CASE("saturation length errors") {
  const std::vector<int> d{1, 2, 3, 4, 5};
  CHECK_THROWS_AS(saturation_length(d, Eigen::VectorXd::LinSpaced(5, 1.0, 2.0)), FitError);
  CHECK_THROWS_AS(saturation_length({1, 2, 3}, Eigen::Vector3d(3, 2, 1)), InvalidArgument);
  CHECK_THROWS_AS(saturation_length(d, Eigen::VectorXd::LinSpaced(5, -1.0, 2.0)), InvalidArgument);
}

TEST_CASE("saturation curve parameters are recovered from synthetic data") {
  const std::array<double, 4> truth{1.1, 0.21, 0.17, 2.2};
  Vector<double> lambdas(10), ls(10);
  lambdas << 0.1, 0.3, 0.5, 0.7, 0.9, 1.1, 1.3, 1.5, 1.8, 2.0;
  for (Index i = 0; i < 10; ++i)
    ls(i) = saturation_model(truth, 5.7e-3, lambdas(i));
  const auto fit = fit_saturation_curve(lambdas, ls);
  for (std::size_t k = 0; k < 4; ++k)
    CHECK(fit.c[k] == doctest::Approx(truth[k]).epsilon(0.01));
  CHECK(fit.residual_norm < 1e-8);
  CHECK(fit.converged);
  CHECK(fit.start_grid.size() == 81);
}

TEST_CASE("saturation fit needs six points") {
  const Vector<double> x = Vector<double>::LinSpaced(5, 0.2, 1.8);
  CHECK_THROWS_AS(fit_saturation_curve(x, x), InvalidArgument);
}

TEST_CASE("pchip interpolates, preserves monotonicity and holds the ends") {
  Vector<double> x(5), y(5);
  x << 0, 1, 2, 3, 4;
  y << 0, 0.1, 0.9, 1.0, 1.0;
  const Vector<double> at = Vector<double>::LinSpaced(81, -1.0, 5.0);
  const Vector<double> v = pchip(x, y, at);
  for (Index i = 1; i < v.size(); ++i)
    CHECK(v(i) >= v(i - 1) - 1e-15);
  CHECK(v(0) == 0.0);
  CHECK(v(80) == 1.0);
  CHECK((pchip(x, y, x) - y).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("envelope of a modulated exponential") {
  const double g = 50.0, tau = 4.0;
  const Vector<double> t = time_grid(20.0, 0.002);
  const Vector<double> v =
      (1.0 + (2.0 * g * t.array()).cos()) / 2.0 * (-t.array() / tau).exp();
  const auto env = envelope(series(t, v), 2.0 * g);
  const Vector<double> truth = (-t.array() / tau).exp();
  CHECK(((env.values - truth).array().abs() / truth.array()).maxCoeff() < 0.02);
}

TEST_CASE("envelope window must cover a grid step") {
  const Vector<double> t = time_grid(1.0, 0.1);
  CHECK_THROWS_AS(envelope(series(t, t), 1000.0), InvalidArgument);
}

TEST_CASE("peaks and prominence") {
  Vector<double> t = Vector<double>::LinSpaced(9, 0, 8);
  Vector<double> v(9);
  v << 1.0, 0.2, 0.6, 0.5, 0.55, 0.1, 0.3, 0.3, 0.0;
  const auto peaks = find_peaks(t, v, 0.0);
  REQUIRE(peaks.size() == 3);
  CHECK(peaks[0].index == 2);
  CHECK(peaks[0].prominence == doctest::Approx(0.4));
  CHECK(peaks[1].index == 4);
  CHECK(peaks[1].prominence == doctest::Approx(0.05));
  CHECK(peaks[2].index == 6);
  CHECK(peaks[2].prominence == doctest::Approx(0.2));
  CHECK(find_peaks(t, v, 0.1).size() == 2);
}

TEST_CASE("monotone envelope has no revival") {
  const Vector<double> t = time_grid(10.0, 0.01);
  const auto rec = find_revivals(series(t, (-t.array()).exp()));
  CHECK(rec.empty());
}

TEST_CASE("revivals report the first qualifying peak and the later ones") {
  const Vector<double> t = time_grid(20.0, 0.01);
  const Vector<double> v = 0.5 + 0.4 * (2.0 * kPi * t.array() / 6.0).cos();
  auto s = series(t, v);
  s.distance = 3;
  const auto rec = find_revivals(s);
  REQUIRE(!rec.empty());
  CHECK(rec.distance == 3);
  CHECK(rec.t_r == doctest::Approx(6.0));
  CHECK(rec.L_r == doctest::Approx(0.9));
  REQUIRE(rec.peak_times.size() == 3);
  CHECK(rec.peak_times[1] == doctest::Approx(12.0));
}

TEST_CASE("power-law and line fits") {
  Vector<double> x(4), y(4);
  x << 2, 3, 4, 8;
  y = 0.9 * x.array().pow(-0.25);
  const auto p = fit_power_law(x, y);
  CHECK(p.exponent == doctest::Approx(-0.25));
  CHECK(p.prefactor == doctest::Approx(0.9));
  const auto l = fit_line(x, 2.0 * x.array() + 1.0);
  CHECK(l.slope == doctest::Approx(2.0));
  CHECK(l.intercept == doctest::Approx(1.0));
  CHECK(l.residual_norm < 1e-12);
}

TEST_CASE("departure scan finds the first large deviation") {
  const Vector<double> t = time_grid(100.0, 0.1);
  const Vector<double> base = 0.5 + 0.5 * (-t.array()).exp();
  Vector<double> echo = base;
  for (Index i = 0; i < t.size(); ++i)
    if (t(i) > 40.0 && t(i) < 45.0)
      echo(i) += 0.3;
  const auto scan = scan_departures(series(t, echo), series(t, base), 10.0, 100.0);
  CHECK(scan.depth == doctest::Approx(0.5).epsilon(1e-4));
  REQUIRE(scan.first_event);
  CHECK(*scan.first_event == doctest::Approx(40.1));
  CHECK(scan.max_relative == doctest::Approx(0.6).epsilon(1e-3));
  const auto none = scan_departures(series(t, base), series(t, base), 10.0, 100.0);
  CHECK(!none.first_event);
}
