#pragma once

#include <cstdint>

#include "qphase/protocol.hpp"

namespace qphase {

inline constexpr double kRMax = 15.0;

/// Confidence-interval design. half_width is in theta units: the event
/// |n (theta_hat - theta)/2| <= R equals |theta_hat - theta| <= 2R/n.
struct IntervalDesign {
  double beta;
  double R_beta;
  int n;
  InputState state;
  double half_width;
};

/// Closed arc [L, U] on R / 2 pi Z.
struct TorusInterval {
  double L = 0.0;
  double U = 0.0;
  bool whole = false;  // the arc covers the torus

  /// U - L if L < U, else U + 2 pi - L; 2 pi when whole.
  double width() const noexcept;
  bool contains(double theta) const noexcept;
};

/// R with lambda(R) = beta, |lambda(R) - beta| <= tol. Throws out_of_range for
/// beta outside (0.05, 1 - 1e-8) or above lambda(15).
double r_of_beta(double beta, double tol = 1e-10);

/// Throws resolution_exceeded when n < 8 R(beta).
IntervalDesign design(double beta, int n);

/// [theta_hat - h, theta_hat + h] wrapped onto [0, 2 pi).
TorusInterval confidence_interval(double theta_hat, double half_width);
TorusInterval confidence_interval(const IntervalDesign& d, double theta_hat);

struct Coverage {
  double coverage = 0.0;
  double stderr_ = 0.0;  // binomial standard error
  std::size_t trials = 0;
};

/// Fraction of sampled theta_hat whose interval contains theta. trials >= 1e4.
Coverage coverage_mc(const IntervalDesign& d, double theta, std::size_t trials, std::uint64_t seed);

/// Same, for an arbitrary state and half-width.
Coverage coverage_mc(const InputState& state, double half_width, double theta, std::size_t trials,
                     std::uint64_t seed);

}  // namespace qphase
