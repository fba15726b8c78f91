#include "qphase/wavefn.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

namespace qphase {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// \int_a^b e^{i omega y} y^{-q} dy for a, b of equal sign. Oscillatory terms use
// two steps of integration by parts and vanish at +-infinity.
Complex power_integral(double omega, int q, double a, double b) {
  if (omega == 0.0) {
    if (q == 1) return std::log(std::abs(b) / std::abs(a));
    const double e = 1.0 - q;
    auto prim = [e](double y) {
      if (std::isinf(y)) return e < 0.0 ? 0.0 : std::copysign(kInf, y);
      return std::pow(y, e) / e;
    };
    return prim(b) - prim(a);
  }
  auto prim = [omega, q](double y) -> Complex {
    if (std::isinf(y)) return {0.0, 0.0};
    const Complex phase(std::cos(omega * y), std::sin(omega * y));
    const double yq = std::pow(y, -q);
    return phase * (yq / Complex(0.0, omega) - q * yq / y / (omega * omega));
  };
  return prim(b) - prim(a);
}

}  // namespace

double EndpointAsymptotics::moment(double a, double b, int power) const {
  if (!(a < b) || a * b <= 0.0 || (std::signbit(a) != std::signbit(b)))
    fail(ErrorCode::invalid_argument, "asymptotic moment needs a < b of equal sign");
  struct Term {
    Complex c;
    double omega;
    int p;
  };
  const Complex& f1 = value_right;
  const Complex& fm1 = value_left;
  const Complex& d1 = derivative_right;
  const Complex& dm1 = derivative_left;
  const Complex i2(0.0, -2.0);
  const std::array<Term, 7> terms = {{
      {std::norm(f1) + std::norm(fm1), 0.0, 2},
      {-2.0 * f1 * std::conj(fm1), 2.0, 2},
      {std::norm(d1) + std::norm(dm1), 0.0, 4},
      {-2.0 * d1 * std::conj(dm1), 2.0, 4},
      {i2 * (f1 * std::conj(d1) + fm1 * std::conj(dm1)), 0.0, 3},
      {-i2 * f1 * std::conj(dm1), 2.0, 3},
      {-i2 * fm1 * std::conj(d1), -2.0, 3},
  }};
  double total = 0.0;
  for (const auto& t : terms) {
    if (t.c == Complex(0.0, 0.0)) continue;
    total += (t.c * power_integral(t.omega, t.p - power, a, b)).real();
  }
  return total / (2.0 * kPi);
}

WaveFunction::WaveFunction(Grid grid, ComplexVector values, std::string label)
    : grid_(std::move(grid)), values_(std::move(values)), label_(std::move(label)) {
  if (values_.size() != grid_.size())
    fail(ErrorCode::invalid_argument, "WaveFunction: values length does not match grid");
  const double n2 = norm_squared();
  if (std::abs(n2 - 1.0) > 1e-10) {
    std::ostringstream msg;
    msg << "WaveFunction '" << label_ << "': norm^2 = " << n2 << " is not 1 within 1e-10";
    fail(ErrorCode::numerical_consistency, msg.str());
  }
  if (grid_.supports_interpolation()) {
    asymptotics_.value_right = at(1.0);
    asymptotics_.value_left = at(-1.0);
    asymptotics_.derivative_right = derivative_at(1.0);
    asymptotics_.derivative_left = derivative_at(-1.0);
    const double scale = kBoundaryTolerance * max_abs();
    vanishes_ = std::abs(asymptotics_.value_right) <= scale &&
                std::abs(asymptotics_.value_left) <= scale;
  } else {
    // Without an interpolant the nearest samples stand in for the endpoints.
    const double scale = kBoundaryTolerance * max_abs();
    vanishes_ = std::abs(values_.front()) <= scale && std::abs(values_.back()) <= scale;
    asymptotics_.value_right = values_.back();
    asymptotics_.value_left = values_.front();
  }
}

Complex WaveFunction::at(double x) const { return interpolate(grid_, values_, x); }

Complex WaveFunction::derivative_at(double x) const {
  return interpolate_derivative(grid_, values_, x);
}

double WaveFunction::norm_squared() const {
  double s = 0.0;
  const auto w = grid_.weights();
  for (std::size_t i = 0; i < values_.size(); ++i) s += w[i] * std::norm(values_[i]);
  return s;
}

double WaveFunction::max_abs() const {
  double m = 0.0;
  for (const auto& v : values_) m = std::max(m, std::abs(v));
  return m;
}

WaveFunction normalize(std::span<const Complex> raw_values, const Grid& grid, std::string label) {
  if (raw_values.size() != grid.size())
    fail(ErrorCode::invalid_argument, "normalize: values length does not match grid");
  double n2 = 0.0;
  const auto w = grid.weights();
  for (std::size_t i = 0; i < raw_values.size(); ++i) n2 += w[i] * std::norm(raw_values[i]);
  if (!(n2 > 0.0) || !std::isfinite(n2))
    fail(ErrorCode::degenerate_input, "normalize: input has zero (or non-finite) norm");
  const double scale = 1.0 / std::sqrt(n2);
  ComplexVector values(raw_values.begin(), raw_values.end());
  for (auto& v : values) v *= scale;
  return WaveFunction(grid, std::move(values), std::move(label));
}

WaveFunction modulated(const WaveFunction& base, double c) {
  ComplexVector values(base.values().begin(), base.values().end());
  const auto x = base.grid().nodes();
  for (std::size_t i = 0; i < values.size(); ++i)
    values[i] *= Complex(std::cos(c * x[i]), std::sin(c * x[i]));
  std::ostringstream label;
  label << "modulated(" << base.label() << ",c=" << c << ")";
  return WaveFunction(base.grid(), std::move(values), label.str());
}

double LimitingDistribution::density(double y) const {
  return std::norm(oscillatory_ft(source_.values(), source_.grid(), y));
}

std::vector<double> LimitingDistribution::density(std::span<const double> ys) const {
  std::vector<double> out;
  out.reserve(ys.size());
  for (double y : ys) out.push_back(density(y));
  return out;
}

LimitingDistribution limiting_distribution(const WaveFunction& f) { return LimitingDistribution(f); }

namespace {

// Sum_ij conj(g_i) g_j sin(rho (x_i - x_j)) / (pi (x_i - x_j)) with
// g_j = w_j f_j e^{i c x_j}.
double sinc_quadratic_form(const WaveFunction& f, double center, double rho) {
  const auto x = f.grid().nodes();
  const auto w = f.grid().weights();
  const auto vals = f.values();
  const std::size_t n = x.size();
  ComplexVector g(n);
  for (std::size_t j = 0; j < n; ++j)
    g[j] = w[j] * vals[j] * Complex(std::cos(center * x[j]), std::sin(center * x[j]));
  long double total = 0.0L;
  for (std::size_t i = 0; i < n; ++i) {
    long double row = 0.0L;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = x[i] - x[j];
      const double kernel = std::sin(rho * d) / (kPi * d);
      row += kernel * (g[i].real() * g[j].real() + g[i].imag() * g[j].imag());
    }
    total += 2.0L * row + static_cast<long double>(std::norm(g[i]) * rho / kPi);
  }
  return static_cast<double>(total);
}

}  // namespace

double window_probability(const WaveFunction& f, double r1, double r2) {
  if (!(r1 < r2)) fail(ErrorCode::invalid_argument, "window_probability: need r1 < r2");
  const double band = f.grid().bandwidth();
  double p = 0.0;
  const double lo = std::max(r1, -band);
  const double hi = std::min(r2, band);
  if (lo < hi) p += sinc_quadratic_form(f, 0.5 * (lo + hi), 0.5 * (hi - lo));
  const auto& asym = f.asymptotics();
  if (r1 < -band) p += asym.mass(r1, std::min(r2, -band));
  if (r2 > band) p += asym.mass(std::max(r1, band), r2);
  if (!(p >= -1e-9 && p <= 1.0 + 1e-9)) {
    std::ostringstream msg;
    msg << "window_probability(" << f.label() << ", " << r1 << ", " << r2 << ") = " << p
        << " lies outside [0, 1]";
    fail(ErrorCode::numerical_consistency, msg.str());
  }
  return std::clamp(p, 0.0, 1.0);
}

double variance(const WaveFunction& f) {
  if (!f.vanishes_at_endpoints()) return kInf;
  const auto d = differentiation_matrix(f.grid());
  const auto df = apply_dense(d, f.values());
  double s = 0.0;
  const auto w = f.grid().weights();
  for (std::size_t i = 0; i < df.size(); ++i) s += w[i] * std::norm(df[i]);
  return s;
}

double truncated_second_moment(const WaveFunction& f, double Y) {
  if (!(Y > 0.0)) fail(ErrorCode::invalid_argument, "truncated_second_moment: Y must be positive");
  static const Grid panel = make_grid(GridRule::gauss_legendre, 16);
  const auto panels = static_cast<std::size_t>(std::ceil(2.0 * Y));
  const double h = 2.0 * Y / static_cast<double>(panels);
  long double total = 0.0L;
  for (std::size_t k = 0; k < panels; ++k) {
    const double a = -Y + h * static_cast<double>(k);
    for (std::size_t q = 0; q < panel.size(); ++q) {
      const double y = a + 0.5 * h * (panel.node(q) + 1.0);
      const double dens = std::norm(oscillatory_ft(f.values(), f.grid(), y));
      total += 0.5 * h * panel.weight(q) * y * y * dens;
    }
  }
  return static_cast<double>(total);
}

double variance_by_moment(const WaveFunction& f) {
  if (!f.vanishes_at_endpoints()) return kInf;
  const double Y = f.grid().bandwidth();
  EndpointAsymptotics tail = f.asymptotics();
  tail.value_left = tail.value_right = Complex(0.0, 0.0);
  return truncated_second_moment(f, Y) + tail.moment(Y, kInf, 2) + tail.moment(-kInf, -Y, 2);
}

double q_variance(const WaveFunction& f) {
  const auto x = f.grid().nodes();
  const auto w = f.grid().weights();
  const auto v = f.values();
  double m1 = 0.0;
  double m2 = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double p = w[i] * std::norm(v[i]);
    m1 += p * x[i];
    m2 += p * x[i] * x[i];
  }
  return m2 - m1 * m1;
}

namespace {

// |F(f)(y0 + k h)|^2 for k = 0..count-1 using phasor recurrences, reseeded
// periodically to bound drift.
std::vector<double> density_on_uniform_grid(const WaveFunction& f, double y0, double h,
                                            std::size_t count) {
  const auto x = f.grid().nodes();
  const auto w = f.grid().weights();
  const auto vals = f.values();
  const std::size_t n = x.size();
  ComplexVector weighted(n);
  ComplexVector phase(n);
  ComplexVector step(n);
  for (std::size_t j = 0; j < n; ++j) {
    weighted[j] = w[j] * vals[j];
    step[j] = Complex(std::cos(x[j] * h), std::sin(x[j] * h));
  }
  std::vector<double> out(count);
  const double norm = 1.0 / (2.0 * kPi);
  for (std::size_t k = 0; k < count; ++k) {
    const double y = y0 + h * static_cast<double>(k);
    if (k % 128 == 0) {
      for (std::size_t j = 0; j < n; ++j) phase[j] = Complex(std::cos(x[j] * y), std::sin(x[j] * y));
    }
    Complex s{0.0, 0.0};
    for (std::size_t j = 0; j < n; ++j) {
      s += weighted[j] * phase[j];
      phase[j] *= step[j];
    }
    out[k] = std::norm(s) * norm;
  }
  return out;
}

}  // namespace

LimitingCdf::LimitingCdf(const WaveFunction& f, double step)
    : half_width_(0.0), step_(step), asymptotics_(f.asymptotics()), left_mass_(0.0) {
  if (!(step > 0.0)) fail(ErrorCode::invalid_argument, "LimitingCdf: step must be positive");
  const auto intervals = static_cast<std::size_t>(std::floor(f.grid().bandwidth() / step)) * 2;
  half_width_ = step * static_cast<double>(intervals / 2);
  // Samples at nodes and midpoints: Simpson's rule on each interval.
  const auto dens = density_on_uniform_grid(f, -half_width_, 0.5 * step, 2 * intervals + 1);
  left_mass_ = asymptotics_.mass(-kInf, -half_width_);
  table_.resize(intervals + 1);
  long double acc = left_mass_;
  table_[0] = left_mass_;
  for (std::size_t k = 0; k < intervals; ++k) {
    acc += step / 6.0 * (dens[2 * k] + 4.0 * dens[2 * k + 1] + dens[2 * k + 2]);
    table_[k + 1] = static_cast<double>(acc);
  }
}

double LimitingCdf::operator()(double z) const {
  double v = 0.0;
  if (z <= -half_width_) {
    v = asymptotics_.mass(-kInf, std::min(z, -1e-300));
  } else if (z >= half_width_) {
    v = table_.back() + (z > half_width_ ? asymptotics_.mass(half_width_, z) : 0.0);
  } else {
    const double t = (z + half_width_) / step_;
    const auto k = std::min(static_cast<std::size_t>(t), table_.size() - 2);
    const double frac = t - static_cast<double>(k);
    v = table_[k] + frac * (table_[k + 1] - table_[k]);
  }
  return std::clamp(v, 0.0, 1.0);
}

}  // namespace qphase
