#pragma once

#include <span>
#include <string>
#include <vector>

#include "qphase/numerics.hpp"
#include "qphase/wavefn.hpp"

namespace qphase {

inline constexpr std::size_t kDefaultGridPoints = 512;

/// Default grid: 512-node Gauss-Legendre.
const Grid& default_grid();

// ---------------------------------------------------------------------------
// Minimum-variance (Dirichlet) problem

struct DirichletMinimum {
  double value;        // smallest eigenvalue of the discretised -d^2/dx^2
  double closed_form;  // pi^2 / 4
  WaveFunction argmin;
};

/// Eigenvalues of -d^2/dx^2 on [-1, 1] with zero boundary values, ascending,
/// from a Legendre-Galerkin discretisation with `basis_size` modes.
std::vector<double> dirichlet_eigenvalues(std::size_t count, std::size_t basis_size = 64);

/// Minimum of the limiting variance and its minimiser sampled on `grid`.
/// Throws numerical_consistency if the two routes disagree by > 1e-6 relative.
DirichletMinimum dirichlet_minimum(const Grid& grid);

// ---------------------------------------------------------------------------
// Time-band concentration operator

/// Nystrom matrix A_ij = sqrt(w_i) sin(R(x_i - x_j)) / (pi (x_i - x_j)) sqrt(w_j).
SymmetricOperator concentration_operator(double R, const Grid& grid);

struct ProlateSolution {
  double R = 0.0;
  double lambda = 0.0;      // top eigenvalue
  double complement = 0.0;  // 1 - lambda, computed directly for R > 9
  double xi = 0.0;          // Sturm-Liouville eigenvalue (Rayleigh quotient)
  WaveFunction psi;
  double ode_residual = 0.0;
  std::size_t grid_size = 0;

  /// Nystrom interpolant psi(x) = lambda^{-1} sum_j w_j K_R(x, x_j) psi_j.
  double evaluate(double x) const;
};

inline constexpr double kOdeResidualReject = 1e-3;

/// Top eigenpair of the concentration operator. The even-parity block is used
/// on symmetric grids. Throws resolution_exceeded when R > grid.bandwidth(),
/// solution_rejected when the ODE residual exceeds 1e-3.
ProlateSolution solve_prolate(double R, const Grid& grid, double tol = 1e-10);

/// Relative residual of d/dx(1-x^2)dpsi/dx + (xi - R^2 x^2) psi = 0 over the
/// inner 90% of the nodes; returns {xi, residual}.
std::pair<double, double> prolate_ode_check(const WaveFunction& psi, double R);

/// Top eigenvalue lambda(R) on the default grid. Results are memoised in a
/// process-wide cache guarded by a shared mutex, so concurrent callers are safe.
double lambda_of_R(double R);

/// 1 - lambda(R), with relative accuracy preserved near lambda = 1.
double min_tail_probability(double R);

/// 1 - 4 sqrt(pi R) e^{-2R} (1 - 3/(32R)).
double lambda_asymptotic(double R);
double lambda_asymptotic_complement(double R);

enum class LambdaSource { eigensolver, asymptotic };

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::vector<double> used_R;
  std::vector<std::string> warnings;
};

/// Least-squares slope of -log(1 - lambda(R)) against R. Points with
/// 1 - lambda below 1e-12 are excluded with a warning.
RateFit min_tail_exponential_rate(std::span<const double> R_values,
                                  LambdaSource source = LambdaSource::eigensolver);

inline constexpr double kLambdaPrecisionFloor = 1e-12;

}  // namespace qphase
