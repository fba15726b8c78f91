#include "qphase/numerics.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <limits>
#include <queue>
#include <sstream>

namespace qphase {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::resolution_exceeded: return "resolution-exceeded";
    case ErrorCode::convergence_failure: return "convergence-failure";
    case ErrorCode::bracket_error: return "bracket-error";
    case ErrorCode::degenerate_input: return "degenerate-input";
    case ErrorCode::numerical_consistency: return "numerical-consistency";
    case ErrorCode::insufficient_data: return "insufficient-data";
    case ErrorCode::unreachable_accuracy: return "unreachable-accuracy";
    case ErrorCode::out_of_range: return "out-of-range";
    case ErrorCode::singular_point: return "singular-point";
    case ErrorCode::solution_rejected: return "solution-rejected";
  }
  return "unknown";
}

std::string_view to_string(GridRule rule) noexcept {
  switch (rule) {
    case GridRule::gauss_legendre: return "gauss_legendre";
    case GridRule::clenshaw_curtis: return "clenshaw_curtis";
    case GridRule::uniform_midpoint: return "uniform_midpoint";
  }
  return "unknown";
}

GridRule grid_rule_from_string(std::string_view name) {
  if (name == "gauss_legendre") return GridRule::gauss_legendre;
  if (name == "clenshaw_curtis") return GridRule::clenshaw_curtis;
  if (name == "uniform_midpoint") return GridRule::uniform_midpoint;
  fail(ErrorCode::invalid_argument, "unknown grid rule '" + std::string(name) + "'");
}

namespace {

std::vector<double> barycentric_for(GridRule rule, std::span<const double> x,
                                    std::span<const double> w) {
  const std::size_t n = x.size();
  std::vector<double> bary;
  switch (rule) {
    case GridRule::gauss_legendre:
      bary.resize(n);
      for (std::size_t j = 0; j < n; ++j) {
        const double sign = (j % 2 == 0) ? 1.0 : -1.0;
        bary[j] = sign * std::sqrt((1.0 - x[j] * x[j]) * w[j]);
      }
      break;
    case GridRule::clenshaw_curtis:
      bary.resize(n);
      for (std::size_t j = 0; j < n; ++j) {
        bary[j] = (j % 2 == 0) ? 1.0 : -1.0;
        if (j == 0 || j + 1 == n) bary[j] *= 0.5;
      }
      break;
    case GridRule::uniform_midpoint:
      break;
  }
  return bary;
}

void gauss_legendre_rule(std::size_t n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  const std::size_t half = (n + 1) / 2;
  for (std::size_t i = 0; i < half; ++i) {
    // i-th largest root, refined by Newton on the three-term recurrence.
    double z = std::cos(kPi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = z;
      for (std::size_t k = 2; k <= n; ++k) {
        const double kk = static_cast<double>(k);
        const double p2 = ((2.0 * kk - 1.0) * z * p1 - (kk - 1.0) * p0) / kk;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = static_cast<double>(n) * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    const double weight = 2.0 / ((1.0 - z * z) * dp * dp);
    x[n - 1 - i] = z;
    x[i] = -z;
    w[n - 1 - i] = weight;
    w[i] = weight;
  }
  if (n % 2 == 1) x[n / 2] = 0.0;
}

void clenshaw_curtis_rule(std::size_t n, std::vector<double>& x, std::vector<double>& w) {
  const std::size_t order = n - 1;
  const double N = static_cast<double>(order);
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (std::size_t j = 0; j <= order; ++j) {
    const double theta = kPi * static_cast<double>(j) / N;
    x[j] = -std::cos(theta);
    double s = 0.0;
    for (std::size_t k = 1; 2 * k <= order; ++k) {
      const double b = (2 * k == order) ? 1.0 : 2.0;
      const double kk = static_cast<double>(k);
      s += b / (4.0 * kk * kk - 1.0) * std::cos(2.0 * kk * theta);
    }
    const double c = (j == 0 || j == order) ? 1.0 : 2.0;
    w[j] = c / N * (1.0 - s);
  }
  for (std::size_t j = 0; 2 * j < order; ++j) {
    x[order - j] = -x[j];
    w[order - j] = w[j];
  }
  x[0] = -1.0;
  x[order] = 1.0;
  if (order % 2 == 0) x[order / 2] = 0.0;
}

}  // namespace

Grid::Grid(GridRule rule, std::vector<double> nodes, std::vector<double> weights)
    : rule_(rule), nodes_(std::move(nodes)), weights_(std::move(weights)) {
  if (nodes_.size() != weights_.size() || nodes_.size() < 2)
    fail(ErrorCode::invalid_argument, "grid needs >= 2 nodes with matching weights");
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (!(weights_[i] > 0.0)) fail(ErrorCode::invalid_argument, "grid weights must be positive");
    if (nodes_[i] < -1.0 || nodes_[i] > 1.0)
      fail(ErrorCode::invalid_argument, "grid nodes must lie in [-1, 1]");
    if (i > 0 && !(nodes_[i] > nodes_[i - 1]))
      fail(ErrorCode::invalid_argument, "grid nodes must be strictly increasing");
  }
  bary_ = barycentric_for(rule_, nodes_, weights_);
}

double Grid::bandwidth() const noexcept {
  return kPi * static_cast<double>(nodes_.size()) / 8.0;
}

bool Grid::is_symmetric() const noexcept {
  const std::size_t n = nodes_.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(nodes_[i] + nodes_[n - 1 - i]) > 1e-14) return false;
    if (std::abs(weights_[i] - weights_[n - 1 - i]) > 1e-14 * weights_[i]) return false;
  }
  return true;
}

Grid make_grid(GridRule rule, std::size_t n_points) {
  if (n_points < 2) fail(ErrorCode::invalid_argument, "make_grid: n_points must be >= 2");
  std::vector<double> x;
  std::vector<double> w;
  switch (rule) {
    case GridRule::gauss_legendre:
      gauss_legendre_rule(n_points, x, w);
      break;
    case GridRule::clenshaw_curtis:
      clenshaw_curtis_rule(n_points, x, w);
      break;
    case GridRule::uniform_midpoint: {
      const double h = 2.0 / static_cast<double>(n_points);
      for (std::size_t i = 0; i < n_points; ++i) {
        x.push_back(-1.0 + (static_cast<double>(i) + 0.5) * h);
        w.push_back(h);
      }
      break;
    }
  }
  return Grid(rule, std::move(x), std::move(w));
}

Complex integrate(std::span<const Complex> values, const Grid& grid) {
  if (values.size() != grid.size())
    fail(ErrorCode::invalid_argument, "integrate: values length does not match grid");
  Complex sum{0.0, 0.0};
  const auto w = grid.weights();
  for (std::size_t i = 0; i < values.size(); ++i) sum += w[i] * values[i];
  return sum;
}

double integrate(std::span<const double> values, const Grid& grid) {
  if (values.size() != grid.size())
    fail(ErrorCode::invalid_argument, "integrate: values length does not match grid");
  double sum = 0.0;
  const auto w = grid.weights();
  for (std::size_t i = 0; i < values.size(); ++i) sum += w[i] * values[i];
  return sum;
}

Complex oscillatory_ft(std::span<const Complex> f_values, const Grid& grid, double y) {
  if (f_values.size() != grid.size())
    fail(ErrorCode::invalid_argument, "oscillatory_ft: values length does not match grid");
  if (std::abs(y) > grid.bandwidth()) {
    std::ostringstream msg;
    msg << "oscillatory_ft: |y| = " << std::abs(y) << " exceeds the resolvable bandwidth "
        << grid.bandwidth() << " of a " << grid.size() << "-node grid";
    fail(ErrorCode::resolution_exceeded, msg.str());
  }
  const auto x = grid.nodes();
  const auto w = grid.weights();
  long double re = 0.0L;
  long double im = 0.0L;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double phase = x[i] * y;
    const Complex term = w[i] * f_values[i] * Complex(std::cos(phase), std::sin(phase));
    re += term.real();
    im += term.imag();
  }
  return Complex(static_cast<double>(re), static_cast<double>(im)) / std::sqrt(2.0 * kPi);
}

namespace {

void require_interpolation(const Grid& grid, std::span<const Complex> values) {
  if (!grid.supports_interpolation())
    fail(ErrorCode::invalid_argument,
         "grid rule " + std::string(to_string(grid.rule())) + " does not support interpolation");
  if (values.size() != grid.size())
    fail(ErrorCode::invalid_argument, "values length does not match grid");
}

}  // namespace

Complex interpolate(const Grid& grid, std::span<const Complex> values, double x) {
  require_interpolation(grid, values);
  const auto nodes = grid.nodes();
  const auto bary = grid.barycentric_weights();
  Complex num{0.0, 0.0};
  double den = 0.0;
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    const double d = x - nodes[j];
    if (d == 0.0) return values[j];
    const double t = bary[j] / d;
    num += t * values[j];
    den += t;
  }
  return num / den;
}

Complex interpolate_derivative(const Grid& grid, std::span<const Complex> values, double x) {
  require_interpolation(grid, values);
  const auto nodes = grid.nodes();
  const auto bary = grid.barycentric_weights();
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    if (x == nodes[j]) {
      Complex s{0.0, 0.0};
      for (std::size_t k = 0; k < nodes.size(); ++k) {
        if (k == j) continue;
        s += (bary[k] / bary[j]) * (values[k] - values[j]) / (nodes[k] - nodes[j]);
      }
      return s;
    }
  }
  const Complex p = interpolate(grid, values, x);
  Complex num{0.0, 0.0};
  double den = 0.0;
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    const double d = x - nodes[j];
    num += bary[j] * (p - values[j]) / (d * d);
    den += bary[j] / d;
  }
  return num / den;
}

std::vector<double> differentiation_matrix(const Grid& grid) {
  if (!grid.supports_interpolation())
    fail(ErrorCode::invalid_argument, "differentiation requires an interpolating grid rule");
  const std::size_t n = grid.size();
  const auto x = grid.nodes();
  const auto bary = grid.barycentric_weights();
  std::vector<double> d(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double diag = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double v = (bary[j] / bary[i]) / (x[i] - x[j]);
      d[i * n + j] = v;
      diag -= v;
    }
    d[i * n + i] = diag;
  }
  return d;
}

ComplexVector apply_dense(std::span<const double> matrix, std::span<const Complex> v) {
  const std::size_t n = v.size();
  if (matrix.size() != n * n) fail(ErrorCode::invalid_argument, "apply_dense: shape mismatch");
  ComplexVector out(n);
  for (std::size_t i = 0; i < n; ++i) {
    Complex s{0.0, 0.0};
    const double* row = matrix.data() + i * n;
    for (std::size_t j = 0; j < n; ++j) s += row[j] * v[j];
    out[i] = s;
  }
  return out;
}

SymmetricOperator::SymmetricOperator(std::size_t dim,
                                     const std::function<double(std::size_t, std::size_t)>& entry)
    : dim_(dim), entries_(dim * dim, 0.0) {
  if (dim == 0) fail(ErrorCode::invalid_argument, "SymmetricOperator: dim must be positive");
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = i; j < dim; ++j) {
      const double v = entry(i, j);
      entries_[i * dim + j] = v;
      entries_[j * dim + i] = v;
    }
  }
}

double SymmetricOperator::trace() const noexcept {
  double t = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) t += entries_[i * dim_ + i];
  return t;
}

namespace {

std::vector<EigenPair> eigh_select(const SymmetricOperator& op, std::size_t k, double tol,
                                   bool top) {
  const std::size_t n = op.dim();
  if (k < 1 || k > n) fail(ErrorCode::invalid_argument, "eigh: k must be in [1, dim]");
  using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const Eigen::Map<const Matrix> a(op.data().data(), static_cast<Eigen::Index>(n),
                                   static_cast<Eigen::Index>(n));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a);
  if (solver.info() != Eigen::Success)
    fail(ErrorCode::convergence_failure, "eigh: symmetric QR iteration did not converge");
  const auto& values = solver.eigenvalues();  // ascending
  const auto& vectors = solver.eigenvectors();
  const double norm = std::max(std::abs(values(0)), std::abs(values(values.size() - 1)));
  std::vector<EigenPair> out;
  out.reserve(k);
  for (std::size_t r = 0; r < k; ++r) {
    const Eigen::Index col = top ? static_cast<Eigen::Index>(n - 1 - r) : static_cast<Eigen::Index>(r);
    EigenPair pair;
    pair.value = values(col);
    const Eigen::VectorXd v = vectors.col(col);
    pair.residual = (a * v - pair.value * v).norm();
    if (pair.residual > tol * std::max(norm, 1e-300)) {
      std::ostringstream msg;
      msg << "eigh: residual " << pair.residual << " exceeds " << tol << " * ||A|| = " << tol * norm;
      fail(ErrorCode::convergence_failure, msg.str());
    }
    pair.vector.assign(v.data(), v.data() + v.size());
    out.push_back(std::move(pair));
  }
  return out;
}

}  // namespace

std::vector<EigenPair> eigh_top(const SymmetricOperator& op, std::size_t k, double tol) {
  return eigh_select(op, k, tol, true);
}

std::vector<EigenPair> eigh_bottom(const SymmetricOperator& op, std::size_t k, double tol) {
  return eigh_select(op, k, tol, false);
}

double find_root(const std::function<double(double)>& fn, double target, double lo, double hi,
                 double tol, int max_iterations) {
  if (!(lo < hi)) fail(ErrorCode::bracket_error, "find_root: bracket must satisfy lo < hi");
  double f_lo = fn(lo) - target;
  double f_hi = fn(hi) - target;
  if (std::abs(f_lo) <= tol) return lo;
  if (std::abs(f_hi) <= tol) return hi;
  if (f_lo * f_hi > 0.0) {
    std::ostringstream msg;
    msg << "find_root: no sign change on [" << lo << ", " << hi << "] for target " << target;
    fail(ErrorCode::bracket_error, msg.str());
  }
  // Illinois weights are kept apart from the true residuals used for reporting.
  double w_lo = f_lo;
  double w_hi = f_hi;
  int retained = 0;  // +1: hi kept on the last step, -1: lo kept
  for (int iter = 0; iter < max_iterations; ++iter) {
    double c = (lo * w_hi - hi * w_lo) / (w_hi - w_lo);
    // Every fourth step bisects, which bounds the iteration count by bisection's.
    if (!(c > lo && c < hi) || iter % 4 == 3) c = 0.5 * (lo + hi);
    const double fc = fn(c) - target;
    if (std::abs(fc) <= tol) return c;
    if ((fc < 0.0) == (f_lo < 0.0)) {
      lo = c;
      f_lo = w_lo = fc;
      if (retained == 1) w_hi *= 0.5;
      retained = 1;
    } else {
      hi = c;
      f_hi = w_hi = fc;
      if (retained == -1) w_lo *= 0.5;
      retained = -1;
    }
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(hi))) break;
  }
  const double err = std::min(std::abs(f_lo), std::abs(f_hi));
  if (err <= tol) return std::abs(f_lo) < std::abs(f_hi) ? lo : hi;
  std::ostringstream msg;
  msg << "find_root: |fn(x) - target| = " << err << " after " << max_iterations
      << " iterations, tolerance " << tol;
  fail(ErrorCode::convergence_failure, msg.str());
}

LinearFit linear_fit(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2)
    fail(ErrorCode::insufficient_data, "linear_fit: need >= 2 paired points");
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0.0) fail(ErrorCode::insufficient_data, "linear_fit: abscissae are all equal");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

namespace {

constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a;
  double b;
  Complex value;
  double error;
  int depth;
  bool operator<(const Segment& other) const { return error < other.error; }
};

Segment kronrod_segment(const std::function<Complex(double)>& fn, double a, double b, int depth) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  Complex kronrod = kKronrodWeights[7] * fn(mid);
  Complex gauss = kGaussWeights[3] * fn(mid);
  for (std::size_t i = 0; i < 7; ++i) {
    const double dx = half * kKronrodNodes[i];
    const Complex sum = fn(mid - dx) + fn(mid + dx);
    kronrod += kKronrodWeights[i] * sum;
    if (i % 2 == 1) gauss += kGaussWeights[i / 2] * sum;
  }
  kronrod *= half;
  gauss *= half;
  return Segment{a, b, kronrod, std::abs(kronrod - gauss), depth};
}

}  // namespace

Complex adaptive_integrate(const std::function<Complex(double)>& fn, double a, double b,
                           double rel_tol, double abs_tol, int max_depth) {
  if (a == b) return Complex{0.0, 0.0};
  std::priority_queue<Segment> queue;
  Segment first = kronrod_segment(fn, a, b, 0);
  Complex total = first.value;
  double error = first.error;
  queue.push(first);
  int splits = 0;
  while (error > std::max(abs_tol, rel_tol * std::abs(total)) && splits < 4000) {
    Segment worst = queue.top();
    if (worst.depth >= max_depth) break;
    queue.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    Segment left = kronrod_segment(fn, worst.a, mid, worst.depth + 1);
    Segment right = kronrod_segment(fn, mid, worst.b, worst.depth + 1);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
    ++splits;
  }
  // Re-sum to shed the drift of the running updates.
  Complex sum{0.0, 0.0};
  while (!queue.empty()) {
    sum += queue.top().value;
    queue.pop();
  }
  return sum;
}

}  // namespace qphase
