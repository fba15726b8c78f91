#pragma once

#include <span>
#include <string>
#include <vector>

#include "qphase/numerics.hpp"
#include "qphase/wavefn.hpp"

namespace qphase {

inline constexpr double kTailFloor = 1e-13;

/// P^f([-y, y]^c) over a ladder of y. Entries below kTailFloor are flagged and
/// carry log_tail = log(kTailFloor).
struct TailCurve {
  std::string label;
  std::vector<double> y;
  std::vector<double> tail;
  std::vector<double> log_tail;
  std::vector<bool> flagged;

  std::size_t size() const noexcept { return y.size(); }
};

/// 1 - window_probability(f, -R, R); negatives down to -1e-9 report as 0.
double tail_probability(const WaveFunction& f, double R);

/// Throws invalid_argument unless ys is positive and strictly increasing.
TailCurve tail_curve(const WaveFunction& f, std::span<const double> ys);

/// 1 - lambda(y) for each y: the smallest tail any f can have at y.
TailCurve min_tail_curve(std::span<const double> ys);

enum class GFunction { g0, g1, g2, g3_unnormalized };

/// g0(x) = 2 e^{-1/x} / sqrt(x) for x > 0 and 0 otherwise; g1(x) = g0(x + 1),
/// g2(x) = g0(1 - x), g3_unnormalized = g1 * g2.
double g_family(GFunction which, double x);

/// (1/sqrt2) e^{-sqrt(2|y|)} / sqrt|y| * e^{sgn(y) i (sqrt(2|y|) + pi/4)} as
/// printed. The exact transform is twice this; see g_transform.
/// Throws singular_point at y = 0.
Complex g0_ft_closed(double y);

/// F(g)(y) under the e^{+ixy}, (2pi)^{-1/2} convention. g0, g1, g2 use the
/// exact closed form (singular at y = 0); g3_unnormalized uses quadrature.
Complex g_transform(GFunction which, double y);

enum class TailAbscissa { R, sqrtR };

struct TailFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::size_t points = 0;
};

/// Least-squares fit of -log(tail) against y or sqrt(y) over unflagged points.
/// Throws insufficient_data with fewer than four.
TailFit fit_tail_rate(const TailCurve& curve, TailAbscissa abscissa);

struct ConvolutionBoundRow {
  double y = 0.0;
  double convolution = 0.0;  // |\int F(g1)(s) F(g2)(y - s) ds|
  double direct = 0.0;       // |\int g1 g2 e^{ixy} dx|, the same quantity via the product
  double bound = 0.0;        // segment sum + both half-line remainders
  double segment_sum = 0.0;
  double lower_remainder = 0.0;
  double upper_remainder = 0.0;
  double relative_disagreement = 0.0;
  bool bound_holds = false;
  bool above_floor = false;
};

struct ConvolutionBoundReport {
  double truncation = 0.0;
  int segments = 0;
  double fit_tolerance = 0.3;
  std::vector<ConvolutionBoundRow> rows;
  double bound_exponent = 0.0;        // -log(bound^2)/sqrt(y) at the largest y
  double convolution_exponent = 0.0;  // -log(convolution^2)/sqrt(y) at the largest y
  double required_exponent = 0.0;     // 2 sqrt2 sqrt(1 - 1/N) (1 - fit_tolerance)
  double max_relative_disagreement = 0.0;
  bool all_bounds_hold = false;
  bool exponent_ok = false;
};

/// Splits the convolution F(g1) * F(g2) at y into N segments of [0, y] plus
/// the half-lines s < 0 and s > y, bounds each piece, and compares against the
/// directly computed convolution. The half-line pieces are integrated up to
/// distance T from the segment range; T must make e^{-sqrt(2T)} < 1e-12.
ConvolutionBoundReport convolution_bound_check(std::span<const double> ys, double T = 2000.0,
                                               int N = 8, double fit_tolerance = 0.3);

}  // namespace qphase
