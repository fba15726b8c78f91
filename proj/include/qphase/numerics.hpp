#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "qphase/error.hpp"

namespace qphase {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

inline constexpr double kPi = 3.14159265358979323846264338327950288;

enum class GridRule { gauss_legendre, clenshaw_curtis, uniform_midpoint };

std::string_view to_string(GridRule rule) noexcept;
GridRule grid_rule_from_string(std::string_view name);

/// Quadrature grid on [-1, 1]. Nodes are strictly increasing, weights are
/// positive and sum to 2.
class Grid {
 public:
  Grid(GridRule rule, std::vector<double> nodes, std::vector<double> weights);

  GridRule rule() const noexcept { return rule_; }
  std::size_t size() const noexcept { return nodes_.size(); }
  std::span<const double> nodes() const noexcept { return nodes_; }
  std::span<const double> weights() const noexcept { return weights_; }
  double node(std::size_t i) const { return nodes_[i]; }
  double weight(std::size_t i) const { return weights_[i]; }

  /// Largest |y| for which e^{ixy} is sampled with at least eight nodes per
  /// period: pi * n / 8.
  double bandwidth() const noexcept;

  /// True when nodes and weights are mirror images about 0.
  bool is_symmetric() const noexcept;

  /// Barycentric interpolation weights. Empty for uniform_midpoint, which does
  /// not support polynomial interpolation at this size.
  std::span<const double> barycentric_weights() const noexcept { return bary_; }
  bool supports_interpolation() const noexcept { return !bary_.empty(); }

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.rule_ == b.rule_ && a.nodes_ == b.nodes_;
  }

 private:
  GridRule rule_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
  std::vector<double> bary_;
};

Grid make_grid(GridRule rule, std::size_t n_points);

/// Sum of weights[i] * values[i].
Complex integrate(std::span<const Complex> values, const Grid& grid);
double integrate(std::span<const double> values, const Grid& grid);

/// F(f)(y) = (2 pi)^{-1/2} \int_{-1}^{1} f(x) e^{ixy} dx by quadrature.
/// Throws resolution_exceeded when |y| > grid.bandwidth().
Complex oscillatory_ft(std::span<const Complex> f_values, const Grid& grid, double y);

/// Barycentric interpolant of grid samples, and its derivative, at any x in [-1,1].
Complex interpolate(const Grid& grid, std::span<const Complex> values, double x);
Complex interpolate_derivative(const Grid& grid, std::span<const Complex> values, double x);

/// Dense spectral differentiation matrix (row-major n*n) on the grid nodes.
std::vector<double> differentiation_matrix(const Grid& grid);
ComplexVector apply_dense(std::span<const double> matrix, std::span<const Complex> v);

/// Real symmetric matrix; built from its upper triangle so symmetry is exact.
class SymmetricOperator {
 public:
  SymmetricOperator(std::size_t dim, const std::function<double(std::size_t, std::size_t)>& entry);

  std::size_t dim() const noexcept { return dim_; }
  double operator()(std::size_t i, std::size_t j) const { return entries_[i * dim_ + j]; }
  std::span<const double> data() const noexcept { return entries_; }
  double trace() const noexcept;

 private:
  std::size_t dim_;
  std::vector<double> entries_;
};

struct EigenPair {
  double value = 0.0;
  std::vector<double> vector;
  double residual = 0.0;  // ||A v - value v||
};

/// Top-k eigenpairs in decreasing eigenvalue order, unit-norm eigenvectors.
/// Throws convergence_failure if any residual exceeds tol * ||A||.
std::vector<EigenPair> eigh_top(const SymmetricOperator& op, std::size_t k, double tol = 1e-10);

/// Bottom-k eigenpairs in increasing order; same contract as eigh_top.
std::vector<EigenPair> eigh_bottom(const SymmetricOperator& op, std::size_t k, double tol = 1e-10);

/// Finds x in [lo, hi] with |fn(x) - target| <= tol for monotone fn.
/// Illinois-accelerated regula falsi that never leaves the bracket.
double find_root(const std::function<double(double)>& fn, double target, double lo, double hi,
                 double tol, int max_iterations = 200);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

LinearFit linear_fit(std::span<const double> xs, std::span<const double> ys);

/// Adaptive Gauss-Kronrod (7/15) integral of a complex function on [a, b].
Complex adaptive_integrate(const std::function<Complex(double)>& fn, double a, double b,
                           double rel_tol = 1e-12, double abs_tol = 0.0, int max_depth = 40);

}  // namespace qphase
