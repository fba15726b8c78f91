#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qphase/numerics.hpp"
#include "qphase/wavefn.hpp"

namespace qphase {

/// Coefficients a_0..a_n of the input state sum_k a_k |k>.
class InputState {
 public:
  /// Throws invalid_argument for fewer than two coefficients and
  /// numerical_consistency unless sum |a_k|^2 = 1 within 1e-12.
  explicit InputState(ComplexVector coeffs);

  /// raw / ||raw||; throws degenerate_input on a zero vector.
  static InputState normalized(std::span<const Complex> raw);

  int n() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  std::span<const Complex> coeffs() const noexcept { return coeffs_; }

 private:
  ComplexVector coeffs_;
};

struct OutcomeSample {
  double theta_true = 0.0;
  std::vector<double> estimates;  // in [0, 2 pi)
  int n = 0;
  std::uint64_t seed = 0;
};

/// Input state with multiplicities: block k holds C(n, k) coefficients.
class MultiplicityState {
 public:
  /// Throws invalid_argument if block k does not have C(n, k) entries or n > 30.
  MultiplicityState(int n, std::vector<ComplexVector> blocks);

  int n() const noexcept { return n_; }
  const std::vector<ComplexVector>& blocks() const noexcept { return blocks_; }
  double norm_squared() const;

 private:
  int n_;
  std::vector<ComplexVector> blocks_;
};

std::uint64_t binomial(int n, int k);

/// a_k = sqrt(sum_j |a_{k,j}|^2), renormalised.
InputState collapse_multiplicity(const MultiplicityState& ms);

/// a_k proportional to conj(f(x_k)) with x_k = (2k - n)/(n + 1).
InputState coefficients_from_wavefn(const WaveFunction& f, int n);

/// (1/2pi) |sum_k conj(a_k) e^{i(k - n/2)(theta_hat - theta)}|^2.
double outcome_density(const InputState& state, double theta, double theta_hat);

/// Density of the covariant measurement generated by |t> = sum_k e^{i xi_k}|k>:
/// (1/2pi) |<t| U(theta_hat)^* U(theta) |phi>|^2 with U(t) = diag(e^{ikt}).
double measurement_density(const InputState& state, std::span<const double> xi, double theta,
                           double theta_hat);

/// splitmix64 of (seed, index): independent seeds for parallel streams.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

/// Inverse-CDF sampling on max(64 (n + 1), 4096) cells with linear
/// interpolation of the tabulated CDF. Deterministic in seed.
OutcomeSample sample_outcomes(const InputState& state, double theta, std::size_t count,
                              std::uint64_t seed);

/// Representative of t modulo 2 pi in (-pi, pi].
double wrap_angle(double t);

/// KS distance between z = n wrap(theta_hat - theta)/2 and the CDF of P^f.
double rescaled_ks_distance(const OutcomeSample& sample, const LimitingCdf& cdf);
double rescaled_ks_distance(const OutcomeSample& sample, const WaveFunction& f);

struct ApplicationCount {
  double A = 0.0;           // min{a : P^f([-a, a]) >= 1 - eps}
  std::int64_t count = 0;   // ceil(A / B)
};

/// Throws unreachable_accuracy when eps cannot be met with A up to the grid
/// bandwidth.
ApplicationCount required_applications(const WaveFunction& f, double B, double eps);

/// J = 4 (sum k^2 |a_k|^2 - (sum k |a_k|^2)^2).
double sld_fisher(const InputState& state);

/// J / (n + 1)^2, which tends to q_variance(f) for states built from f.
double fisher_limit_ratio(const InputState& state);

struct CramerRaoReport {
  double variance = 0.0;    // <dP^2>
  double q_variance = 0.0;  // <dQ^2>
  double product = 0.0;
  double gap = 0.0;         // product - 1/4
  bool bounded = false;     // false when the variance is infinite
};

/// Throws numerical_consistency if a finite product is not strictly above 1/4.
CramerRaoReport cramer_rao_report(const WaveFunction& f);

}  // namespace qphase
