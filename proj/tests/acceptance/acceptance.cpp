// Acceptance run: one PASS/FAIL line per criterion with measured values,
// tolerances and wall time against the time budget.
#include <algorithm>
#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "qphase/error.hpp"
#include "qphase/interval.hpp"
#include "qphase/protocol.hpp"
#include "qphase/spectral.hpp"
#include "qphase/tails.hpp"
#include "qphase/wavefn.hpp"

using namespace qphase;

namespace {

struct Outcome {
  bool pass = true;
  std::vector<std::string> lines;

  void check(bool ok, const char* fmt, ...) __attribute__((format(printf, 3, 4)));
};

void Outcome::check(bool ok, const char* fmt, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, ap);
  va_end(ap);
  lines.push_back(std::string(ok ? "ok   " : "FAIL ") + buf);
  pass = pass && ok;
}

void note(Outcome& o, const char* text) { o.lines.push_back(std::string("note ") + text); }

struct Criterion {
  int id;
  const char* title;
  double budget_s;
  std::function<Outcome()> run;
};

const Grid& grid() { return default_grid(); }
WaveFunction phi1() { return builtin(builtins::Dirichlet{1}, grid()); }

Outcome c1() {
  Outcome o;
  auto dm = dirichlet_minimum(grid());
  double exact = kPi * kPi / 4.0;
  double rel = std::abs(dm.value - exact) / exact;
  o.check(rel <= 1e-6, "min variance %.12f vs pi^2/4 = %.12f, rel %.2e <= 1e-6", dm.value, exact, rel);
  auto ev = dirichlet_eigenvalues(5);
  for (int m = 1; m <= 5; ++m) {
    double e = std::pow(kPi * m / 2.0, 2);
    double r = std::abs(ev[m - 1] - e) / e;
    o.check(r <= 1e-6, "eigenvalue m=%d: %.10f vs (pi m/2)^2 = %.10f, rel %.2e", m, ev[m - 1], e, r);
  }
  return o;
}

Outcome c2() {
  Outcome o;
  Grid fine = make_grid(GridRule::gauss_legendre, 2048);
  auto f = builtin(builtins::Constant{}, fine);
  double v = variance(f);
  o.check(std::isinf(v) && v > 0, "variance(constant) = %g (expected +inf)", v);
  double m100 = truncated_second_moment(f, 100.0);
  double m400 = truncated_second_moment(f, 400.0);
  double growth = m400 / m100 - 1.0;
  o.check(growth > 0.10, "truncated moment Y=100: %.6f, Y=400: %.6f, growth %.1f%% > 10%%", m100, m400,
          100.0 * growth);
  return o;
}

Outcome c3() {
  Outcome o;
  auto P = limiting_distribution(phi1());
  // density of phi_1 vanishes periodically; compare per-period maxima of y^4 density
  double lo = 1e300, hi = 0.0;
  for (double a = 50.0; a + kPi <= 200.0 + 1e-12; a += kPi) {
    double env = 0.0;
    for (int k = 0; k <= 64; ++k) {
      double y = a + kPi * k / 64.0;
      env = std::max(env, P.density(y) * std::pow(y, 4));
    }
    lo = std::min(lo, env);
    hi = std::max(hi, env);
  }
  o.check(hi / lo <= 3.0, "y^4 density envelope over [50,200] in [%.6f, %.6f], ratio %.4f <= 3", lo, hi,
          hi / lo);
  return o;
}

Outcome c4() {
  Outcome o;
  for (double R : {8.0, 10.0}) {
    double num = min_tail_probability(R);
    double asym = lambda_asymptotic_complement(R);
    double rel = std::abs(num - asym) / asym;
    o.check(rel <= 0.15, "R=%g: 1-lambda %.6e, asymptotic %.6e, rel %.4f <= 0.15", R, num, asym, rel);
  }
  double c10 = min_tail_probability(10.0);
  o.check(c10 >= 3e-8 && c10 <= 7e-8, "1-lambda(10) = %.6e in [3e-8, 7e-8]", c10);
  return o;
}

Outcome c5() {
  Outcome o;
  std::vector<double> Rs{4.0, 6.0, 8.0, 10.0};
  auto fit = min_tail_exponential_rate(Rs);
  o.check(fit.slope >= 1.8 && fit.slope <= 2.2, "slope of -log(1-lambda) vs R over {4,6,8,10}: %.4f in [1.8, 2.2] (r^2 %.6f)",
          fit.slope, fit.r_squared);
  return o;
}

Outcome c6() {
  Outcome o;
  auto g3 = builtin(builtins::BumpG3{}, grid());
  std::vector<double> ys;
  for (double y = 10.0; y <= 60.0; y += 5.0) ys.push_back(y);
  auto curve = tail_curve(g3, ys);
  auto fit = fit_tail_rate(curve, TailAbscissa::sqrtR);
  o.check(fit.slope >= 2.0, "slope of -log tail(g3) vs sqrt(y) over [10,60]: %.4f >= 2.0 (%zu points, r^2 %.4f)",
          fit.slope, fit.points, fit.r_squared);
  std::vector<double> yb{10.0, 20.0, 30.0, 40.0, 50.0, 60.0};
  auto rep = convolution_bound_check(yb);
  std::size_t holds = 0;
  double worst = 0.0;
  for (const auto& r : rep.rows) {
    holds += r.bound_holds;
    if (r.above_floor) worst = std::max(worst, r.relative_disagreement);
  }
  o.check(rep.all_bounds_hold, "pointwise convolution bound holds at %zu/%zu y values", holds, rep.rows.size());
  o.check(worst <= 1e-6, "convolution vs direct transform: max rel disagreement %.2e <= 1e-6", worst);
  return o;
}

Outcome c7() {
  Outcome o;
  auto g3 = builtin(builtins::BumpG3{}, grid());
  auto f1 = phi1();
  double vg = variance(g3), vf = variance(f1);
  o.check(vg > vf, "variance(g3) = %.6f > variance(phi1) = %.6f", vg, vf);
  double tg = tail_probability(g3, 10.0), tf = tail_probability(f1, 10.0);
  o.check(tg < tf, "tail(g3,10) = %.6e < tail(phi1,10) = %.6e", tg, tf);
  if (!(tg < tf)) {
    note(o, "the two tails cross between y = 11 and y = 12; g3 has the smaller tail from there on:");
    for (double y : {11.0, 12.0, 15.0, 20.0, 30.0}) {
      char buf[160];
      double a = tail_probability(g3, y), b = tail_probability(f1, y);
      std::snprintf(buf, sizeof buf, "  y=%-4g tail(g3) %.4e  tail(phi1) %.4e  %s", y, a, b,
                    a < b ? "g3 lower" : "phi1 lower");
      note(o, buf);
    }
  }
  auto p2 = builtin(builtins::Prolate{2.0}, grid());
  auto p10 = builtin(builtins::Prolate{10.0}, grid());
  double d2 = std::abs(tail_probability(p2, 2.0) - min_tail_probability(2.0));
  o.check(d2 <= 1e-8, "|tail(psi2,2) - min-tail(2)| = %.2e <= 1e-8", d2);
  double d10 = std::abs(tail_probability(p10, 10.0) - min_tail_probability(10.0));
  o.check(d10 <= 1e-8, "|tail(psi10,10) - min-tail(10)| = %.2e <= 1e-8", d10);
  double t210 = tail_probability(p2, 10.0);
  o.check(t210 > min_tail_probability(10.0), "tail(psi2,10) = %.4e > min-tail(10) = %.4e", t210,
          min_tail_probability(10.0));
  return o;
}

Outcome c8() {
  Outcome o;
  struct Case {
    const char* name;
    WaveFunction f;
  };
  std::vector<Case> cases{{"phi1", phi1()}, {"psi4", builtin(builtins::Prolate{4.0}, grid())}};
  for (const auto& c : cases) {
    LimitingCdf cdf(c.f);
    double ks25 = rescaled_ks_distance(
        sample_outcomes(coefficients_from_wavefn(c.f, 25), 1.0, 100000, derive_seed(8, 25)), cdf);
    double ks400 = rescaled_ks_distance(
        sample_outcomes(coefficients_from_wavefn(c.f, 400), 1.0, 100000, derive_seed(8, 400)), cdf);
    o.check(ks400 < 0.02 && ks400 < ks25, "%s: KS(n=400) = %.4f < 0.02 and < KS(n=25) = %.4f", c.name,
            ks400, ks25);
  }
  return o;
}

Outcome c9() {
  Outcome o;
  auto f = phi1();
  auto s = coefficients_from_wavefn(f, 200);
  double J = sld_fisher(s), qv = q_variance(f);
  double ratio = J / (201.0 * 201.0);
  double rel = std::abs(ratio - qv) / qv;
  o.check(rel <= 0.02, "J/(n+1)^2 = %.8f vs q_variance = %.8f at n=200, rel %.2e <= 0.02", ratio, qv, rel);
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "J/(4(n+1)^2) = %.8f = q_variance/4; with k = ((n+1)x+n)/2, J = 4 var k = (n+1)^2 var x",
                ratio / 4.0);
  note(o, buf);
  auto cr = cramer_rao_report(f);
  double target = kPi * kPi / 12.0 - 0.5;
  o.check(std::abs(cr.product - target) <= 1e-4, "Cramer-Rao product %.8f vs pi^2/12 - 1/2 = %.8f", cr.product,
          target);
  o.check(cr.product > 0.25, "product %.8f > 1/4", cr.product);
  return o;
}

Outcome c10() {
  Outcome o;
  auto d = design(0.9, 200);
  auto cov = coverage_mc(d, 1.0, 100000, 10);
  o.check(cov.coverage >= 0.88, "design(0.9,200): coverage %.4f +- %.4f >= 0.88 (1e5 trials, R = %.8f)",
          cov.coverage, cov.stderr_, d.R_beta);
  double gap = std::abs(lambda_of_R(d.R_beta) - 0.9);
  o.check(gap <= 1e-6, "|lambda(R(0.9)) - 0.9| = %.2e <= 1e-6", gap);
  auto half = coverage_mc(d.state, d.half_width / 2.0, 1.0, 100000, 11);
  o.check(half.coverage + 3.0 * half.stderr_ < 0.9, "half width: coverage %.4f +- %.4f < 0.9", half.coverage,
          half.stderr_);
  auto shrunk = coverage_mc(d.state, 0.9 * d.half_width, 1.0, 100000, 12);
  o.check(shrunk.coverage + 3.0 * shrunk.stderr_ < 0.9, "0.9 x width: coverage %.4f +- %.4f < 0.9",
          shrunk.coverage, shrunk.stderr_);
  return o;
}

Outcome c11() {
  Outcome o;
  MultiplicityState ms(2, {ComplexVector{0.5}, ComplexVector{0.5, 0.5}, ComplexVector{0.5}});
  auto s = collapse_multiplicity(ms);
  double expect[3] = {0.5, std::sqrt(2.0) / 2.0, 0.5};
  double err = 0.0;
  for (int k = 0; k < 3; ++k) err = std::max(err, std::abs(s.coeffs()[k] - expect[k]));
  o.check(err <= 1e-12, "collapsed coefficients (1/2, sqrt2/2, 1/2), max error %.2e <= 1e-12", err);

  // Block state with non-uniform complex entries. The covariant measurement
  // whose seed in block k is b_k/|b_k| sees amplitude |b_k| at eigenvalue k.
  int n = 3;
  std::vector<ComplexVector> blocks;
  std::vector<ComplexVector> seeds;
  double norm = 0.0;
  for (int k = 0; k <= n; ++k) {
    std::size_t size = binomial(n, k);
    ComplexVector b(size);
    for (std::size_t j = 0; j < size; ++j)
      b[j] = std::polar(0.2 + 0.1 * k + 0.05 * j, 0.7 * k - 0.3 * j);
    for (const auto& c : b) norm += std::norm(c);
    blocks.push_back(b);
  }
  for (auto& b : blocks)
    for (auto& c : b) c /= std::sqrt(norm);
  for (const auto& b : blocks) {
    double w = 0.0;
    for (const auto& c : b) w += std::norm(c);
    ComplexVector t(b.size());
    for (std::size_t j = 0; j < b.size(); ++j) t[j] = b[j] / std::sqrt(w);
    seeds.push_back(t);
  }
  auto collapsed = collapse_multiplicity(MultiplicityState(n, blocks));
  double worst = 0.0;
  for (double th = 0.0; th < 2.0 * kPi; th += 0.05) {
    Complex amp = 0.0;
    for (int k = 0; k <= n; ++k) {
      Complex overlap = 0.0;
      for (std::size_t j = 0; j < blocks[k].size(); ++j) overlap += std::conj(seeds[k][j]) * blocks[k][j];
      amp += overlap * std::exp(Complex(0.0, -(k - n / 2.0) * th));
    }
    double block_density = std::norm(amp) / (2.0 * kPi);
    worst = std::max(worst, std::abs(block_density - outcome_density(collapsed, 0.0, th)));
  }
  o.check(worst <= 1e-10, "outcome densities of aligned block states vs collapse: max diff %.2e <= 1e-10", worst);
  return o;
}

}  // namespace

int main() {
  std::vector<Criterion> criteria{
      {1, "Dirichlet minimum variance", 5, c1},
      {2, "divergent variance of the constant state", 5, c2},
      {3, "y^-4 tail order of phi_1", 10, c3},
      {4, "lambda(R) asymptotics", 60, c4},
      {5, "exponential rate of the minimum tail", 120, c5},
      {6, "super-exponential tail of g3", 60, c6},
      {7, "variance versus tail criterion conflict", 60, c7},
      {8, "finite-n convergence", 120, c8},
      {9, "Fisher limit and Cramer-Rao product", 10, c9},
      {10, "interval estimation", 180, c10},
      {11, "multiplicity collapse", 1, c11},
  };
  // criteria whose literal statement is contradicted by the computation
  const std::set<int> known_red{7};

  int passed = 0, unexpected = 0;
  for (const auto& c : criteria) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.check(false, "threw: %s", e.what());
    }
    double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool in_time = dt < c.budget_s;
    bool ok = o.pass && in_time;
    std::printf("[%s] C%-2d %-42s %8.2f s (budget %g s)%s\n", ok ? "PASS" : "FAIL", c.id, c.title, dt,
                c.budget_s, in_time ? "" : "  over budget");
    for (const auto& l : o.lines) std::printf("        %s\n", l.c_str());
    std::fflush(stdout);
    passed += ok;
    if (!ok && !known_red.count(c.id)) ++unexpected;
  }
  std::printf("\n%d/%zu criteria pass", passed, criteria.size());
  if (!known_red.empty()) {
    std::printf("; known red:");
    for (int id : known_red) std::printf(" C%d", id);
  }
  std::printf("\n");
  return unexpected == 0 ? 0 : 1;
}
