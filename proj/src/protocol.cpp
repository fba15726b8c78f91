#include "qphase/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace qphase {

InputState::InputState(ComplexVector coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.size() < 2) fail(ErrorCode::invalid_argument, "InputState: need n >= 1 (at least 2 coefficients)");
  double s = 0.0;
  for (const auto& a : coeffs_) s += std::norm(a);
  if (std::abs(s - 1.0) > 1e-12) {
    std::ostringstream msg;
    msg << "InputState: sum |a_k|^2 = " << s << " is not 1 within 1e-12";
    fail(ErrorCode::numerical_consistency, msg.str());
  }
}

InputState InputState::normalized(std::span<const Complex> raw) {
  double s = 0.0;
  for (const auto& a : raw) s += std::norm(a);
  if (!(s > 0.0) || !std::isfinite(s)) fail(ErrorCode::degenerate_input, "InputState: zero coefficient vector");
  const double scale = 1.0 / std::sqrt(s);
  ComplexVector c(raw.begin(), raw.end());
  for (auto& a : c) a *= scale;
  return InputState(std::move(c));
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  return r;
}

MultiplicityState::MultiplicityState(int n, std::vector<ComplexVector> blocks)
    : n_(n), blocks_(std::move(blocks)) {
  if (n < 1 || n > 30) fail(ErrorCode::invalid_argument, "MultiplicityState: n must lie in [1, 30]");
  if (blocks_.size() != static_cast<std::size_t>(n) + 1)
    fail(ErrorCode::invalid_argument, "MultiplicityState: need n + 1 blocks");
  for (int k = 0; k <= n; ++k) {
    if (blocks_[static_cast<std::size_t>(k)].size() != binomial(n, k)) {
      std::ostringstream msg;
      msg << "MultiplicityState: block " << k << " has " << blocks_[static_cast<std::size_t>(k)].size()
          << " entries, expected C(" << n << "," << k << ") = " << binomial(n, k);
      fail(ErrorCode::invalid_argument, msg.str());
    }
  }
}

double MultiplicityState::norm_squared() const {
  double s = 0.0;
  for (const auto& b : blocks_)
    for (const auto& a : b) s += std::norm(a);
  return s;
}

InputState collapse_multiplicity(const MultiplicityState& ms) {
  ComplexVector a;
  a.reserve(ms.blocks().size());
  for (const auto& b : ms.blocks()) {
    double s = 0.0;
    for (const auto& v : b) s += std::norm(v);
    a.emplace_back(std::sqrt(s), 0.0);
  }
  return InputState::normalized(a);
}

InputState coefficients_from_wavefn(const WaveFunction& f, int n) {
  if (n < 1) fail(ErrorCode::invalid_argument, "coefficients_from_wavefn: n must be >= 1");
  if (!f.grid().supports_interpolation())
    fail(ErrorCode::invalid_argument, "coefficients_from_wavefn: grid rule does not support interpolation");
  ComplexVector a(static_cast<std::size_t>(n) + 1);
  const double scale = 1.0 / (n + 1.0);
  for (int k = 0; k <= n; ++k) a[static_cast<std::size_t>(k)] = std::conj(f.at((2.0 * k - n) * scale));
  return InputState::normalized(a);
}

namespace {

// sum_k c_k e^{ik delta} by Horner in z = e^{i delta}.
Complex phasor_sum(std::span<const Complex> c, double delta, bool conjugate) {
  const Complex z(std::cos(delta), std::sin(delta));
  Complex s{0.0, 0.0};
  for (std::size_t k = c.size(); k-- > 0;) s = s * z + (conjugate ? std::conj(c[k]) : c[k]);
  return s;
}

constexpr double kTwoPi = 2.0 * kPi;

}  // namespace

double outcome_density(const InputState& state, double theta, double theta_hat) {
  return std::norm(phasor_sum(state.coeffs(), theta_hat - theta, true)) / kTwoPi;
}

double measurement_density(const InputState& state, std::span<const double> xi, double theta,
                           double theta_hat) {
  const auto a = state.coeffs();
  if (xi.size() != a.size())
    fail(ErrorCode::invalid_argument, "measurement_density: need one phase per coefficient");
  Complex s{0.0, 0.0};
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double t = -xi[k] - static_cast<double>(k) * (theta_hat - theta);
    s += a[k] * Complex(std::cos(t), std::sin(t));
  }
  return std::norm(s) / kTwoPi;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double wrap_angle(double t) {
  double r = std::remainder(t, kTwoPi);
  if (r <= -kPi) r += kTwoPi;
  return r;
}

OutcomeSample sample_outcomes(const InputState& state, double theta, std::size_t count,
                              std::uint64_t seed) {
  if (count < 1) fail(ErrorCode::invalid_argument, "sample_outcomes: count must be >= 1");
  const std::size_t cells = std::max<std::size_t>(64 * static_cast<std::size_t>(state.n() + 1), 4096);
  const double h = kTwoPi / static_cast<double>(cells);
  std::vector<double> cdf(cells + 1, 0.0);
  double prev = std::norm(phasor_sum(state.coeffs(), -kPi, true));
  for (std::size_t j = 0; j < cells; ++j) {
    const double next = std::norm(phasor_sum(state.coeffs(), -kPi + h * static_cast<double>(j + 1), true));
    cdf[j + 1] = cdf[j] + 0.5 * h * (prev + next);
    prev = next;
  }
  const double total = cdf.back();

  OutcomeSample out;
  out.theta_true = theta;
  out.n = state.n();
  out.seed = seed;
  out.estimates.resize(count);
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < count; ++i) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53 * total;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    std::size_t j = static_cast<std::size_t>(std::distance(cdf.begin(), it));
    j = std::clamp<std::size_t>(j, 1, cells) - 1;
    const double mass = cdf[j + 1] - cdf[j];
    const double frac = mass > 0.0 ? (u - cdf[j]) / mass : 0.5;
    const double delta = -kPi + h * (static_cast<double>(j) + frac);
    double t = std::fmod(theta + delta, kTwoPi);
    if (t < 0.0) t += kTwoPi;
    if (t >= kTwoPi) t = 0.0;
    out.estimates[i] = t;
  }
  return out;
}

double rescaled_ks_distance(const OutcomeSample& sample, const LimitingCdf& cdf) {
  if (sample.estimates.empty()) fail(ErrorCode::insufficient_data, "rescaled_ks_distance: empty sample");
  std::vector<double> z;
  z.reserve(sample.estimates.size());
  const double scale = 0.5 * sample.n;
  for (double t : sample.estimates) z.push_back(scale * wrap_angle(t - sample.theta_true));
  std::sort(z.begin(), z.end());
  const double m = static_cast<double>(z.size());
  double d = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double F = cdf(z[i]);
    d = std::max({d, F - static_cast<double>(i) / m, static_cast<double>(i + 1) / m - F});
  }
  return d;
}

double rescaled_ks_distance(const OutcomeSample& sample, const WaveFunction& f) {
  return rescaled_ks_distance(sample, LimitingCdf(f));
}

ApplicationCount required_applications(const WaveFunction& f, double B, double eps) {
  if (!(B > 0.0) || !std::isfinite(B)) fail(ErrorCode::invalid_argument, "required_applications: B must be positive");
  if (!(eps > 0.0 && eps < 1.0)) fail(ErrorCode::invalid_argument, "required_applications: eps must lie in (0, 1)");
  const double a_max = f.grid().bandwidth();
  auto tail = [&f](double a) { return std::max(0.0, 1.0 - window_probability(f, -a, a)); };
  double lo = 1e-9;
  double hi = 0.5;
  while (tail(hi) > eps) {
    if (hi >= a_max) {
      std::ostringstream msg;
      msg << "required_applications(" << f.label() << "): tail at A_max = " << a_max << " is "
          << tail(a_max) << ", above eps = " << eps;
      fail(ErrorCode::unreachable_accuracy, msg.str());
    }
    lo = hi;
    hi = std::min(2.0 * hi, a_max);
  }
  // -log(tail) is increasing; solving in log units keeps relative accuracy for small eps.
  auto neg_log_tail = [&tail](double a) { return std::min(700.0, -std::log(std::max(tail(a), 1e-300))); };
  ApplicationCount r;
  r.A = find_root(neg_log_tail, -std::log(eps), lo, hi, 1e-11);
  r.count = static_cast<std::int64_t>(std::ceil(r.A / B));
  return r;
}

double sld_fisher(const InputState& state) {
  const auto a = state.coeffs();
  double m1 = 0.0;
  double m2 = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double p = std::norm(a[k]);
    const double kk = static_cast<double>(k);
    m1 += kk * p;
    m2 += kk * kk * p;
  }
  return std::max(0.0, 4.0 * (m2 - m1 * m1));
}

double fisher_limit_ratio(const InputState& state) {
  const double n1 = state.n() + 1.0;
  return sld_fisher(state) / (n1 * n1);
}

CramerRaoReport cramer_rao_report(const WaveFunction& f) {
  CramerRaoReport r;
  r.variance = variance(f);
  r.q_variance = q_variance(f);
  if (!std::isfinite(r.variance)) {
    r.product = std::numeric_limits<double>::infinity();
    r.gap = r.product;
    r.bounded = false;
    return r;
  }
  r.bounded = true;
  r.product = r.variance * r.q_variance;
  r.gap = r.product - 0.25;
  if (!(r.gap > 0.0)) {
    std::ostringstream msg;
    msg << "cramer_rao_report(" << f.label() << "): product " << r.product << " is not above 1/4";
    fail(ErrorCode::numerical_consistency, msg.str());
  }
  return r;
}

}  // namespace qphase
