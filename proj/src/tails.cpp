#include "qphase/tails.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qphase/spectral.hpp"

namespace qphase {

double tail_probability(const WaveFunction& f, double R) {
  if (!(R > 0.0)) fail(ErrorCode::invalid_argument, "tail_probability: R must be positive");
  return std::max(0.0, 1.0 - window_probability(f, -R, R));
}

namespace {

void check_ladder(std::span<const double> ys) {
  if (ys.empty()) fail(ErrorCode::invalid_argument, "tail curve: empty y ladder");
  for (std::size_t i = 0; i < ys.size(); ++i) {
    if (!(ys[i] > 0.0) || !std::isfinite(ys[i]))
      fail(ErrorCode::invalid_argument, "tail curve: y values must be positive");
    if (i > 0 && !(ys[i] > ys[i - 1]))
      fail(ErrorCode::invalid_argument, "tail curve: y values must increase");
  }
}

void push_point(TailCurve& c, double y, double tail) {
  c.y.push_back(y);
  c.tail.push_back(tail);
  const bool flagged = tail < kTailFloor;
  c.flagged.push_back(flagged);
  c.log_tail.push_back(std::log(flagged ? kTailFloor : tail));
}

}  // namespace

TailCurve tail_curve(const WaveFunction& f, std::span<const double> ys) {
  check_ladder(ys);
  TailCurve c{f.label(), {}, {}, {}, {}};
  for (double y : ys) push_point(c, y, tail_probability(f, y));
  return c;
}

TailCurve min_tail_curve(std::span<const double> ys) {
  check_ladder(ys);
  TailCurve c{"min_tail", {}, {}, {}, {}};
  for (double y : ys) push_point(c, y, min_tail_probability(y));
  return c;
}

double g_family(GFunction which, double x) {
  auto g0 = [](double t) { return t > 0.0 ? 2.0 * std::exp(-1.0 / t) / std::sqrt(t) : 0.0; };
  switch (which) {
    case GFunction::g0:
      return g0(x);
    case GFunction::g1:
      return g0(x + 1.0);
    case GFunction::g2:
      return g0(1.0 - x);
    case GFunction::g3_unnormalized:
      return g0(x + 1.0) * g0(1.0 - x);
  }
  return 0.0;
}

namespace {

// |y|^{-1/2} e^{-sqrt(2|y|)} e^{sgn(y) i (sqrt(2|y|) + pi/4)}
Complex g0_shape(double y) {
  if (y == 0.0) fail(ErrorCode::singular_point, "transform of g0 is singular at y = 0");
  const double a = std::abs(y);
  const double r = std::sqrt(2.0 * a);
  const double phase = std::copysign(r + kPi / 4.0, y);
  return std::exp(-r) / std::sqrt(a) * Complex(std::cos(phase), std::sin(phase));
}

Complex g0_exact(double y) { return std::sqrt(2.0) * g0_shape(y); }

Complex expi(double t) { return {std::cos(t), std::sin(t)}; }

// |F(g0)(t)| sqrt|t|, decreasing in |t|.
double envelope(double t) { return std::sqrt(2.0) * std::exp(-std::sqrt(2.0 * std::abs(t))); }

}  // namespace

Complex g0_ft_closed(double y) { return g0_shape(y) / std::sqrt(2.0); }

Complex g_transform(GFunction which, double y) {
  switch (which) {
    case GFunction::g0:
      return g0_exact(y);
    case GFunction::g1:
      return expi(-y) * g0_exact(y);
    case GFunction::g2:
      return expi(y) * g0_exact(-y);
    case GFunction::g3_unnormalized: {
      const Complex s = adaptive_integrate(
          [y](double x) { return g_family(GFunction::g3_unnormalized, x) * expi(x * y); }, -1.0, 1.0,
          1e-13);
      return s / std::sqrt(2.0 * kPi);
    }
  }
  return {};
}

TailFit fit_tail_rate(const TailCurve& curve, TailAbscissa abscissa) {
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t i = 0; i < curve.size(); ++i) {
    if (curve.flagged[i] || !(curve.tail[i] > 0.0)) continue;
    xs.push_back(abscissa == TailAbscissa::R ? curve.y[i] : std::sqrt(curve.y[i]));
    ys.push_back(-std::log(curve.tail[i]));
  }
  if (xs.size() < 4) {
    std::ostringstream msg;
    msg << "fit_tail_rate(" << curve.label << "): " << xs.size()
        << " unflagged points, at least 4 required";
    fail(ErrorCode::insufficient_data, msg.str());
  }
  const auto lf = linear_fit(xs, ys);
  return TailFit{lf.slope, lf.intercept, lf.r_squared, xs.size()};
}

namespace {

// F(g1)(s) F(g2)(t) with t = y - s passed separately so neither rounds to 0.
Complex convolution_integrand(double s, double t) {
  return g_transform(GFunction::g1, s) * g_transform(GFunction::g2, t);
}

}  // namespace

ConvolutionBoundReport convolution_bound_check(std::span<const double> ys, double T, int N,
                                               double fit_tolerance) {
  if (ys.empty()) fail(ErrorCode::invalid_argument, "convolution_bound_check: no y values");
  if (N < 2) fail(ErrorCode::invalid_argument, "convolution_bound_check: N must be >= 2");
  if (!(std::exp(-std::sqrt(2.0 * T)) < 1e-12))
    fail(ErrorCode::invalid_argument,
         "convolution_bound_check: truncation T too small for a 1e-12 remainder");
  if (!(fit_tolerance >= 0.0 && fit_tolerance < 1.0))
    fail(ErrorCode::invalid_argument, "convolution_bound_check: fit_tolerance must lie in [0, 1)");
  for (double y : ys)
    if (!(y > 0.0)) fail(ErrorCode::invalid_argument, "convolution_bound_check: y must be positive");

  ConvolutionBoundReport report;
  report.truncation = T;
  report.segments = N;
  report.fit_tolerance = fit_tolerance;
  report.all_bounds_hold = true;
  constexpr double kRel = 1e-12;
  const double root_t = std::sqrt(T);

  for (double y : ys) {
    const double half = std::sqrt(0.5 * y);
    // Substitutions s = -u^2, u^2, y - u^2, y + u^2 absorb the 1/sqrt singularities.
    auto left = [y](double u) { return 2.0 * u * convolution_integrand(-u * u, y + u * u); };
    auto low = [y](double u) { return 2.0 * u * convolution_integrand(u * u, y - u * u); };
    auto high = [y](double u) { return 2.0 * u * convolution_integrand(y - u * u, u * u); };
    auto right = [y](double u) { return 2.0 * u * convolution_integrand(y + u * u, -u * u); };
    const Complex total = adaptive_integrate(left, 0.0, root_t, kRel) +
                          adaptive_integrate(low, 0.0, half, kRel) +
                          adaptive_integrate(high, 0.0, half, kRel) +
                          adaptive_integrate(right, 0.0, root_t, kRel);

    ConvolutionBoundRow row;
    row.y = y;
    row.convolution = std::abs(total);
    row.direct = std::abs(g_transform(GFunction::g3_unnormalized, y)) * std::sqrt(2.0 * kPi);

    double segments = 0.0;
    const double n = static_cast<double>(N);
    for (int k = 1; k <= N; ++k) {
      const double kk = static_cast<double>(k);
      const double arc = 2.0 * std::asin(std::sqrt(kk / n)) - 2.0 * std::asin(std::sqrt((kk - 1.0) / n));
      segments += envelope(y * (kk - 1.0) / n) * envelope(y * (n - kk) / n) * arc;
    }
    row.segment_sum = segments;
    row.lower_remainder =
        adaptive_integrate([&](double u) { return Complex(std::abs(left(u)), 0.0); }, 0.0, root_t, kRel)
            .real();
    row.upper_remainder =
        adaptive_integrate([&](double u) { return Complex(std::abs(right(u)), 0.0); }, 0.0, root_t, kRel)
            .real();
    row.bound = segments + row.lower_remainder + row.upper_remainder;
    row.bound_holds = row.convolution <= row.bound;
    row.above_floor = row.direct * row.direct >= kTailFloor;
    row.relative_disagreement = std::abs(row.convolution - row.direct) / row.direct;
    if (row.above_floor)
      report.max_relative_disagreement = std::max(report.max_relative_disagreement, row.relative_disagreement);
    report.all_bounds_hold = report.all_bounds_hold && row.bound_holds;
    report.rows.push_back(row);
  }

  const auto last = std::max_element(report.rows.begin(), report.rows.end(),
                                     [](const auto& a, const auto& b) { return a.y < b.y; });
  const double sy = std::sqrt(last->y);
  report.bound_exponent = -std::log(last->bound * last->bound) / sy;
  report.convolution_exponent = -std::log(last->convolution * last->convolution) / sy;
  report.required_exponent =
      2.0 * std::sqrt(2.0) * std::sqrt(1.0 - 1.0 / static_cast<double>(N)) * (1.0 - fit_tolerance);
  report.exponent_ok = report.bound_exponent >= report.required_exponent;
  return report;
}

}  // namespace qphase
