#pragma once

#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "qphase/numerics.hpp"

namespace qphase {

/// Large-|y| behaviour of F(f) obtained by integrating by parts twice:
///   sqrt(2 pi) F(f)(y) ~ (f(1)e^{iy} - f(-1)e^{-iy})/(iy) + (f'(1)e^{iy} - f'(-1)e^{-iy})/y^2.
/// Used for probability mass and second moments beyond the grid bandwidth.
struct EndpointAsymptotics {
  Complex value_right;       // f(1)
  Complex value_left;        // f(-1)
  Complex derivative_right;  // f'(1)
  Complex derivative_left;   // f'(-1)

  /// Approximate integral of y^power * |F(f)(y)|^2 over [a, b]; a and b must be
  /// nonzero with the same sign, b may be infinite.
  double moment(double a, double b, int power = 0) const;
  double mass(double a, double b) const { return moment(a, b, 0); }
};

/// Grid-sampled f in L^2([-1, 1]) with unit norm.
class WaveFunction {
 public:
  /// Throws invalid_argument on length mismatch and numerical_consistency if
  /// the norm differs from 1 by more than 1e-10.
  WaveFunction(Grid grid, ComplexVector values, std::string label);

  const Grid& grid() const noexcept { return grid_; }
  std::span<const Complex> values() const noexcept { return values_; }
  const std::string& label() const noexcept { return label_; }
  std::size_t size() const noexcept { return values_.size(); }

  /// Interpolated value / derivative at x in [-1, 1].
  Complex at(double x) const;
  Complex derivative_at(double x) const;

  double norm_squared() const;
  double max_abs() const;

  const EndpointAsymptotics& asymptotics() const noexcept { return asymptotics_; }

  /// |f(+-1)| <= 1e-6 max|f| at both ends.
  bool vanishes_at_endpoints() const noexcept { return vanishes_; }

 private:
  Grid grid_;
  ComplexVector values_;
  std::string label_;
  EndpointAsymptotics asymptotics_{};
  bool vanishes_ = false;
};

inline constexpr double kBoundaryTolerance = 1e-6;

/// raw / ||raw||. Throws degenerate_input for an all-zero vector.
WaveFunction normalize(std::span<const Complex> raw_values, const Grid& grid,
                       std::string label = "normalized");

namespace builtins {
struct Constant {};
struct Dirichlet {
  int m = 1;
};
struct BumpG3 {};
struct Prolate {
  double R = 1.0;
};
}  // namespace builtins

using BuiltinSpec =
    std::variant<builtins::Constant, builtins::Dirichlet, builtins::BumpG3, builtins::Prolate>;

/// constant sqrt(1/2); dirichlet sin(pi m (x+1)/2); bump_g3 the normalised
/// g1*g2 bump; prolate the top concentration eigenfunction.
WaveFunction builtin(const BuiltinSpec& spec, const Grid& grid);

/// Parses "constant", "dirichlet", "bump_g3", "prolate" with the m / R parameter.
BuiltinSpec parse_builtin(const std::string& name, int m, double R);

/// e^{icx} base(x). Its density at y equals the base density at y + c.
WaveFunction modulated(const WaveFunction& base, double c);

/// y -> |F(f)(y)|^2 together with window and tail queries.
class LimitingDistribution {
 public:
  explicit LimitingDistribution(WaveFunction f) : source_(std::move(f)) {}

  const WaveFunction& source() const noexcept { return source_; }
  double density(double y) const;
  std::vector<double> density(std::span<const double> ys) const;

 private:
  WaveFunction source_;
};

LimitingDistribution limiting_distribution(const WaveFunction& f);

/// P^f([r1, r2]) as the quadratic form <f|F_[r1,r2]|f> with the sinc kernel.
/// Parts of the window beyond the grid bandwidth use EndpointAsymptotics.
double window_probability(const WaveFunction& f, double r1, double r2);

/// <f|P^2|f> when f vanishes at both endpoints (spectral differentiation),
/// +infinity otherwise.
double variance(const WaveFunction& f);

/// \int_{-Y}^{Y} y^2 |F(f)(y)|^2 dy by quadrature in y.
double truncated_second_moment(const WaveFunction& f, double Y);

/// Second route to the variance: truncated moment at the grid bandwidth plus
/// the asymptotic remainder. +infinity if f does not vanish at the endpoints.
double variance_by_moment(const WaveFunction& f);

/// \int x^2 |f|^2 - (\int x |f|^2)^2.
double q_variance(const WaveFunction& f);

/// Tabulated CDF of P^f on [-Y, Y] (Y = grid bandwidth) with asymptotic tails.
class LimitingCdf {
 public:
  LimitingCdf(const WaveFunction& f, double step = 0.05);
  double operator()(double z) const;
  double half_width() const noexcept { return half_width_; }

 private:
  double half_width_;
  double step_;
  std::vector<double> table_;
  EndpointAsymptotics asymptotics_;
  double left_mass_;
};

}  // namespace qphase
