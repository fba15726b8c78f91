#include "qphase/interval.hpp"

#include <cmath>
#include <sstream>

#include "qphase/spectral.hpp"

namespace qphase {

namespace {

constexpr double kTwoPi = 2.0 * kPi;

double to_unit_circle(double t) {
  double r = std::fmod(t, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

}  // namespace

double TorusInterval::width() const noexcept {
  if (whole) return kTwoPi;
  return L < U ? U - L : U + kTwoPi - L;
}

bool TorusInterval::contains(double theta) const noexcept {
  if (whole) return true;
  const double t = to_unit_circle(theta);
  return L <= U ? (L <= t && t <= U) : (t >= L || t <= U);
}

double r_of_beta(double beta, double tol) {
  if (!(beta > 0.05 && beta < 1.0 - 1e-8)) {
    std::ostringstream msg;
    msg << "r_of_beta: beta = " << beta << " outside (0.05, 1 - 1e-8)";
    fail(ErrorCode::out_of_range, msg.str());
  }
  if (!(tol > 0.0)) fail(ErrorCode::invalid_argument, "r_of_beta: tol must be positive");
  const double target = -std::log1p(-beta);
  auto g = [](double R) { return -std::log(min_tail_probability(R)); };
  if (g(kRMax) < target) {
    std::ostringstream msg;
    msg << "r_of_beta: beta = " << beta << " exceeds lambda(" << kRMax << ")";
    fail(ErrorCode::out_of_range, msg.str());
  }
  double lo = 0.01;
  double hi = 1.0;
  while (g(hi) < target) {
    lo = hi;
    hi = std::min(2.0 * hi, kRMax);
  }
  // d(-log(1 - lambda)) = dlambda / (1 - lambda).
  return find_root(g, target, lo, hi, tol / (1.0 - beta));
}

IntervalDesign design(double beta, int n) {
  const double R = r_of_beta(beta);
  if (static_cast<double>(n) < 8.0 * R) {
    std::ostringstream msg;
    msg << "design: n = " << n << " is below 8 R(beta) = " << 8.0 * R;
    fail(ErrorCode::resolution_exceeded, msg.str());
  }
  const auto psi = solve_prolate(R, default_grid()).psi;
  return IntervalDesign{beta, R, n, coefficients_from_wavefn(psi, n), 2.0 * R / n};
}

TorusInterval confidence_interval(double theta_hat, double half_width) {
  if (!(half_width > 0.0)) fail(ErrorCode::invalid_argument, "confidence_interval: half_width must be positive");
  TorusInterval t;
  if (2.0 * half_width >= kTwoPi) {
    t.whole = true;
    t.L = 0.0;
    t.U = 0.0;
    return t;
  }
  t.L = to_unit_circle(theta_hat - half_width);
  t.U = to_unit_circle(theta_hat + half_width);
  return t;
}

TorusInterval confidence_interval(const IntervalDesign& d, double theta_hat) {
  return confidence_interval(theta_hat, d.half_width);
}

Coverage coverage_mc(const InputState& state, double half_width, double theta, std::size_t trials,
                     std::uint64_t seed) {
  if (trials < 10000) fail(ErrorCode::invalid_argument, "coverage_mc: need at least 1e4 trials");
  const auto sample = sample_outcomes(state, theta, trials, seed);
  std::size_t hits = 0;
  for (double th : sample.estimates)
    if (confidence_interval(th, half_width).contains(theta)) ++hits;
  Coverage c;
  c.trials = trials;
  c.coverage = static_cast<double>(hits) / static_cast<double>(trials);
  c.stderr_ = std::sqrt(c.coverage * (1.0 - c.coverage) / static_cast<double>(trials));
  return c;
}

Coverage coverage_mc(const IntervalDesign& d, double theta, std::size_t trials, std::uint64_t seed) {
  return coverage_mc(d.state, d.half_width, theta, trials, seed);
}

}  // namespace qphase
