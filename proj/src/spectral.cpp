#include "qphase/spectral.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <sstream>

namespace qphase {

const Grid& default_grid() {
  static const Grid grid = make_grid(GridRule::gauss_legendre, kDefaultGridPoints);
  return grid;
}

namespace {

// Legendre polynomials L_0..L_max at x.
std::vector<double> legendre_values(std::size_t max_degree, double x) {
  std::vector<double> p(max_degree + 1);
  p[0] = 1.0;
  if (max_degree >= 1) p[1] = x;
  for (std::size_t k = 2; k <= max_degree; ++k) {
    const double kk = static_cast<double>(k);
    p[k] = ((2.0 * kk - 1.0) * x * p[k - 1] - (kk - 1.0) * p[k - 2]) / kk;
  }
  return p;
}

struct GalerkinSolution {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
};

// Basis phi_k = L_k - L_{k+2} vanishes at +-1. Stiffness is diagonal (4k+6),
// mass is pentadiagonal.
GalerkinSolution dirichlet_galerkin(std::size_t basis_size) {
  const auto n = static_cast<Eigen::Index>(basis_size);
  Eigen::MatrixXd stiffness = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double kk = static_cast<double>(k);
    stiffness(k, k) = 4.0 * kk + 6.0;
    mass(k, k) = 2.0 / (2.0 * kk + 1.0) + 2.0 / (2.0 * kk + 5.0);
    if (k + 2 < n) {
      mass(k, k + 2) = -2.0 / (2.0 * kk + 5.0);
      mass(k + 2, k) = mass(k, k + 2);
    }
  }
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(stiffness, mass);
  if (solver.info() != Eigen::Success)
    fail(ErrorCode::convergence_failure, "dirichlet: generalized eigensolver failed");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

}  // namespace

std::vector<double> dirichlet_eigenvalues(std::size_t count, std::size_t basis_size) {
  if (count == 0 || basis_size < count + 2)
    fail(ErrorCode::invalid_argument, "dirichlet_eigenvalues: basis too small for count");
  const auto sol = dirichlet_galerkin(basis_size);
  std::vector<double> out(count);
  for (std::size_t m = 0; m < count; ++m) out[m] = sol.values(static_cast<Eigen::Index>(m));
  return out;
}

DirichletMinimum dirichlet_minimum(const Grid& grid) {
  constexpr std::size_t kBasis = 64;
  const auto sol = dirichlet_galerkin(kBasis);
  const double value = sol.values(0);
  const double closed = kPi * kPi / 4.0;
  if (std::abs(value - closed) > 1e-6 * closed) {
    std::ostringstream msg;
    msg << "dirichlet_minimum: discretised value " << value << " disagrees with pi^2/4";
    fail(ErrorCode::numerical_consistency, msg.str());
  }
  const Eigen::VectorXd coeffs = sol.vectors.col(0);
  ComplexVector samples(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto p = legendre_values(kBasis + 1, grid.node(i));
    double s = 0.0;
    for (std::size_t k = 0; k < kBasis; ++k) s += coeffs(static_cast<Eigen::Index>(k)) * (p[k] - p[k + 2]);
    samples[i] = s;
  }
  // Sign: positive at the centre.
  const auto mid = grid.size() / 2;
  if (samples[mid].real() < 0.0)
    for (auto& v : samples) v = -v;
  return DirichletMinimum{value, closed, normalize(samples, grid, "dirichlet_min")};
}

namespace {

double sinc_kernel(double R, double d) {
  if (d == 0.0) return R / kPi;
  return std::sin(R * d) / (kPi * d);
}

// Even-parity block of the Nystrom matrix in the orthonormal basis
// (e_i + e_mirror(i)) / sqrt(2); the centre node, if any, maps to itself.
SymmetricOperator even_block(double R, const Grid& grid) {
  const std::size_t n = grid.size();
  const std::size_t half = (n + 1) / 2;
  const auto x = grid.nodes();
  const auto w = grid.weights();
  auto full = [&](std::size_t i, std::size_t j) {
    return std::sqrt(w[i]) * sinc_kernel(R, x[i] - x[j]) * std::sqrt(w[j]);
  };
  const bool has_centre = (n % 2 == 1);
  const std::size_t centre = n / 2;
  return SymmetricOperator(half, [&](std::size_t i, std::size_t j) {
    const bool ci = has_centre && i == centre;
    const bool cj = has_centre && j == centre;
    if (ci && cj) return full(i, j);
    if (ci || cj) return std::sqrt(2.0) * full(i, j);
    return full(i, j) + full(i, n - 1 - j);
  });
}

std::vector<double> unfold_even(std::span<const double> u, std::size_t n) {
  std::vector<double> v(n);
  const bool has_centre = (n % 2 == 1);
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (has_centre && i == n / 2) {
      v[i] = u[i];
    } else {
      v[i] = u[i] / std::sqrt(2.0);
      v[n - 1 - i] = v[i];
    }
  }
  return v;
}

}  // namespace

SymmetricOperator concentration_operator(double R, const Grid& grid) {
  if (!(R > 0.0)) fail(ErrorCode::invalid_argument, "concentration_operator: R must be positive");
  const auto x = grid.nodes();
  const auto w = grid.weights();
  return SymmetricOperator(grid.size(), [&](std::size_t i, std::size_t j) {
    return std::sqrt(w[i]) * sinc_kernel(R, x[i] - x[j]) * std::sqrt(w[j]);
  });
}

std::pair<double, double> prolate_ode_check(const WaveFunction& psi, double R) {
  const Grid& grid = psi.grid();
  const std::size_t n = grid.size();
  const auto x = grid.nodes();
  const auto w = grid.weights();
  const auto d = differentiation_matrix(grid);
  const auto dpsi = apply_dense(d, psi.values());
  // xi as the symmetric Rayleigh quotient \int (1-x^2)|psi'|^2 + R^2 x^2 |psi|^2.
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    num += w[i] * ((1.0 - x[i] * x[i]) * std::norm(dpsi[i]) + R * R * x[i] * x[i] * std::norm(psi.values()[i]));
    den += w[i] * std::norm(psi.values()[i]);
  }
  const double xi = num / den;
  ComplexVector flux(n);
  for (std::size_t i = 0; i < n; ++i) flux[i] = (1.0 - x[i] * x[i]) * dpsi[i];
  const auto dflux = apply_dense(d, flux);
  const std::size_t skip = n / 20;
  double r2 = 0.0;
  double s2 = 0.0;
  for (std::size_t i = skip; i + skip < n; ++i) {
    const Complex lpsi = -dflux[i] + R * R * x[i] * x[i] * psi.values()[i];
    r2 += w[i] * std::norm(lpsi - xi * psi.values()[i]);
    s2 += w[i] * std::norm(xi * psi.values()[i]);
  }
  return {xi, std::sqrt(r2 / s2)};
}

ProlateSolution solve_prolate(double R, const Grid& grid, double tol) {
  if (!(R > 0.0)) fail(ErrorCode::invalid_argument, "solve_prolate: R must be positive");
  if (R > grid.bandwidth()) {
    std::ostringstream msg;
    msg << "solve_prolate: R = " << R << " exceeds the bandwidth " << grid.bandwidth() << " of a "
        << grid.size() << "-node grid";
    fail(ErrorCode::resolution_exceeded, msg.str());
  }
  const std::size_t n = grid.size();
  const bool complement_route = R > 9.0;
  double lambda = 0.0;
  double complement = 0.0;
  std::vector<double> v;
  if (grid.is_symmetric()) {
    const SymmetricOperator block = even_block(R, grid);
    if (complement_route) {
      const SymmetricOperator shifted(block.dim(), [&](std::size_t i, std::size_t j) {
        return (i == j ? 1.0 : 0.0) - block(i, j);
      });
      auto pair = eigh_bottom(shifted, 1, tol).front();
      complement = pair.value;
      lambda = 1.0 - complement;
      v = unfold_even(pair.vector, n);
    } else {
      auto pair = eigh_top(block, 1, tol).front();
      lambda = pair.value;
      complement = 1.0 - lambda;
      v = unfold_even(pair.vector, n);
    }
  } else {
    const SymmetricOperator op = concentration_operator(R, grid);
    if (complement_route) {
      const SymmetricOperator shifted(n, [&](std::size_t i, std::size_t j) {
        return (i == j ? 1.0 : 0.0) - op(i, j);
      });
      auto pair = eigh_bottom(shifted, 1, tol).front();
      complement = pair.value;
      lambda = 1.0 - complement;
      v = std::move(pair.vector);
    } else {
      auto pair = eigh_top(op, 1, tol).front();
      lambda = pair.value;
      complement = 1.0 - lambda;
      v = std::move(pair.vector);
    }
  }
  const auto w = grid.weights();
  ComplexVector samples(n);
  for (std::size_t i = 0; i < n; ++i) samples[i] = v[i] / std::sqrt(w[i]);
  // Phase: real positive at the node nearest 0.
  std::size_t nearest = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (std::abs(grid.node(i)) < std::abs(grid.node(nearest))) nearest = i;
  if (samples[nearest].real() < 0.0)
    for (auto& s : samples) s = -s;
  std::ostringstream label;
  label << "prolate_" << R;
  WaveFunction psi = normalize(samples, grid, label.str());
  const auto [xi, residual] = prolate_ode_check(psi, R);
  if (residual > kOdeResidualReject) {
    std::ostringstream msg;
    msg << "solve_prolate: ODE residual " << residual << " at R = " << R << " exceeds "
        << kOdeResidualReject << "; refine the grid";
    fail(ErrorCode::solution_rejected, msg.str());
  }
  return ProlateSolution{R, lambda, complement, xi, std::move(psi), residual, n};
}

double ProlateSolution::evaluate(double x) const {
  const Grid& grid = psi.grid();
  double s = 0.0;
  for (std::size_t j = 0; j < grid.size(); ++j)
    s += grid.weight(j) * sinc_kernel(R, x - grid.node(j)) * psi.values()[j].real();
  return s / lambda;
}

namespace {

struct LambdaEntry {
  double lambda;
  double complement;
};

class LambdaCache {
 public:
  LambdaEntry get(double R) {
    {
      std::shared_lock lock(mutex_);
      if (auto it = cache_.find(R); it != cache_.end()) return it->second;
    }
    const auto sol = solve_prolate(R, default_grid());
    const LambdaEntry entry{sol.lambda, sol.complement};
    std::unique_lock lock(mutex_);
    cache_.emplace(R, entry);
    return entry;
  }

 private:
  std::shared_mutex mutex_;
  std::map<double, LambdaEntry> cache_;
};

LambdaCache& lambda_cache() {
  static LambdaCache cache;
  return cache;
}

}  // namespace

double lambda_of_R(double R) { return lambda_cache().get(R).lambda; }

double min_tail_probability(double R) { return lambda_cache().get(R).complement; }

double lambda_asymptotic_complement(double R) {
  if (!(R > 0.0)) fail(ErrorCode::invalid_argument, "lambda_asymptotic: R must be positive");
  return 4.0 * std::sqrt(kPi * R) * std::exp(-2.0 * R) * (1.0 - 3.0 / (32.0 * R));
}

double lambda_asymptotic(double R) { return 1.0 - lambda_asymptotic_complement(R); }

RateFit min_tail_exponential_rate(std::span<const double> R_values, LambdaSource source) {
  if (R_values.size() < 3)
    fail(ErrorCode::insufficient_data, "min_tail_exponential_rate: need at least 3 R values");
  for (std::size_t i = 0; i < R_values.size(); ++i) {
    if (R_values[i] < 3.0 || R_values[i] > 12.0)
      fail(ErrorCode::invalid_argument, "min_tail_exponential_rate: R values must lie in [3, 12]");
    if (i > 0 && !(R_values[i] > R_values[i - 1]))
      fail(ErrorCode::invalid_argument, "min_tail_exponential_rate: R values must increase");
  }
  RateFit fit;
  std::vector<double> ys;
  for (double R : R_values) {
    const double tail = source == LambdaSource::eigensolver ? min_tail_probability(R)
                                                            : lambda_asymptotic_complement(R);
    if (!(tail >= kLambdaPrecisionFloor)) {
      std::ostringstream msg;
      msg << "R = " << R << ": 1 - lambda = " << tail << " is below the precision floor; excluded";
      fit.warnings.push_back(msg.str());
      continue;
    }
    fit.used_R.push_back(R);
    ys.push_back(-std::log(tail));
  }
  if (fit.used_R.size() < 3)
    fail(ErrorCode::insufficient_data, "min_tail_exponential_rate: fewer than 3 usable points");
  const auto lf = linear_fit(fit.used_R, ys);
  fit.slope = lf.slope;
  fit.intercept = lf.intercept;
  fit.r_squared = lf.r_squared;
  return fit;
}

}  // namespace qphase
