#include <doctest.h>

#include <cmath>

#include "qphase/error.hpp"
#include "qphase/spectral.hpp"
#include "qphase/tails.hpp"

using namespace qphase;

namespace {

// Laplace transform of 2 x^{-1/2} e^{-1/x}: 2 sqrt(pi/p) e^{-2 sqrt(p)}. The
// Fourier transform is the boundary value p = -iy scaled by (2 pi)^{-1/2}.
Complex g0_laplace_oracle(Complex p) {
  return std::sqrt(2.0) / std::sqrt(p) * std::exp(-2.0 * std::sqrt(p));
}

}  // namespace

TEST_CASE("g0 transform against the Laplace-transform oracle") {
  for (double y : {-40.0, -3.0, -0.2, 0.2, 1.0, 7.5, 60.0}) {
    Complex oracle = g0_laplace_oracle(Complex(0.0, -y));
    Complex got = g_transform(GFunction::g0, y);
    CHECK(std::abs(got - oracle) <= 1e-12 * std::abs(oracle));
    CHECK(std::abs(g0_ft_closed(y) * 2.0 - got) <= 1e-12 * std::abs(oracle));
  }
  CHECK_THROWS_AS(g0_ft_closed(0.0), Error);
}

TEST_CASE("damped g0 transform by quadrature") {
  // (2 pi)^{-1/2} int_0^inf 2 x^{-1/2} e^{-1/x} e^{-px} dx with x = u^2
  Complex p(0.5, -3.0);
  auto integrand = [&](double u) {
    if (u == 0.0) return Complex(0.0, 0.0);
    double x = u * u;
    return 4.0 * std::exp(-1.0 / x) * std::exp(-p * x);
  };
  Complex q = adaptive_integrate(integrand, 0.0, 12.0, 1e-13) / std::sqrt(2.0 * kPi);
  CHECK(std::abs(q - g0_laplace_oracle(p)) < 1e-10);
}

TEST_CASE("shifted and reflected transforms") {
  for (double y : {-5.0, 2.0, 11.0}) {
    Complex g0y = g_transform(GFunction::g0, y);
    Complex g0m = g_transform(GFunction::g0, -y);
    CHECK(std::abs(g_transform(GFunction::g1, y) - std::exp(Complex(0, -y)) * g0y) < 1e-13);
    CHECK(std::abs(g_transform(GFunction::g2, y) - std::exp(Complex(0, y)) * g0m) < 1e-13);
  }
}

TEST_CASE("g3 transform against direct quadrature") {
  Grid g = make_grid(GridRule::gauss_legendre, 400);
  for (double y : {0.0, 4.0, 15.0}) {
    Complex sum = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      double x = g.node(i);
      sum += g.weight(i) * g_family(GFunction::g3_unnormalized, x) * std::exp(Complex(0, x * y));
    }
    sum /= std::sqrt(2.0 * kPi);
    CHECK(std::abs(g_transform(GFunction::g3_unnormalized, y) - sum) < 1e-10);
  }
}

TEST_CASE("g family values") {
  CHECK(g_family(GFunction::g0, -1.0) == 0.0);
  CHECK(g_family(GFunction::g0, 1.0) == doctest::Approx(2.0 * std::exp(-1.0)));
  CHECK(g_family(GFunction::g3_unnormalized, 0.0) == doctest::Approx(4.0 * std::exp(-2.0)));
  CHECK(g_family(GFunction::g3_unnormalized, 1.0) == 0.0);
}

TEST_CASE("tail curves and floor flagging") {
  std::vector<double> ys{2.0, 18.0};
  auto c = min_tail_curve(ys);
  CHECK(c.label == "min_tail");
  CHECK_FALSE(c.flagged[0]);
  CHECK(c.flagged[1]);
  CHECK(c.log_tail[1] == doctest::Approx(std::log(kTailFloor)));
  CHECK(c.tail[0] == doctest::Approx(1.0 - lambda_of_R(2.0)).epsilon(1e-10));

  auto f = builtin(builtins::Dirichlet{1}, default_grid());
  std::vector<double> bad{3.0, 2.0};
  CHECK_THROWS_AS(tail_curve(f, bad), Error);
  std::vector<double> ok{1.0, 2.0, 4.0};
  auto t = tail_curve(f, ok);
  CHECK(t.tail[0] > t.tail[1]);
  CHECK(t.tail[1] > t.tail[2]);
  CHECK(t.tail[2] == doctest::Approx(tail_probability(f, 4.0)));
  CHECK_THROWS_AS(fit_tail_rate(t, TailAbscissa::R), Error);
}

TEST_CASE("no state beats the minimum tail") {
  for (double y : {1.0, 3.0, 6.0}) {
    double floor = min_tail_probability(y);
    for (int m = 1; m <= 2; ++m)
      CHECK(tail_probability(builtin(builtins::Dirichlet{m}, default_grid()), y) >= floor);
    CHECK(tail_probability(builtin(builtins::BumpG3{}, default_grid()), y) >= floor);
  }
}

TEST_CASE("convolution bound at moderate y") {
  std::vector<double> ys{10.0, 20.0};
  auto r = convolution_bound_check(ys);
  CHECK(r.all_bounds_hold);
  CHECK(r.max_relative_disagreement < 1e-6);
  for (const auto& row : r.rows) CHECK(row.convolution <= row.bound);
  CHECK_THROWS_AS(convolution_bound_check(ys, 10.0), Error);
}
