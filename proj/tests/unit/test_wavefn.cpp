#include <doctest.h>

#include <cmath>
#include <limits>

#include "qphase/error.hpp"
#include "qphase/spectral.hpp"
#include "qphase/wavefn.hpp"

using namespace qphase;

namespace {

const Grid& grid() { return default_grid(); }

WaveFunction constant() { return builtin(builtins::Constant{}, grid()); }
WaveFunction phi(int m) { return builtin(builtins::Dirichlet{m}, grid()); }

// Composite Simpson on the closed-form constant density sin^2 y / (pi y^2).
double constant_window_oracle(double a, double b, int panels) {
  auto d = [](double y) {
    if (y == 0.0) return 1.0 / kPi;
    double s = std::sin(y) / y;
    return s * s / kPi;
  };
  double h = (b - a) / panels, sum = d(a) + d(b);
  for (int i = 1; i < panels; ++i) sum += d(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return sum * h / 3.0;
}

}  // namespace

TEST_CASE("normalize produces unit norm and rejects zero") {
  ComplexVector raw(grid().size());
  for (std::size_t i = 0; i < raw.size(); ++i) raw[i] = 3.0 + grid().node(i);
  auto f = normalize(raw, grid());
  CHECK(f.norm_squared() == doctest::Approx(1.0).epsilon(1e-14));
  ComplexVector zero(grid().size());
  CHECK_THROWS_AS(normalize(zero, grid()), Error);
  CHECK_THROWS_AS(WaveFunction(grid(), ComplexVector(3), "short"), Error);
}

TEST_CASE("constant state density and windows") {
  auto f = constant();
  auto P = limiting_distribution(f);
  CHECK(P.density(0.0) == doctest::Approx(1.0 / kPi).epsilon(1e-12));
  CHECK(P.density(kPi) < 1e-20);
  double w = window_probability(f, -kPi, kPi);
  CHECK(w == doctest::Approx(constant_window_oracle(-kPi, kPi, 20000)).epsilon(1e-8));
  CHECK(w == doctest::Approx(0.9028).epsilon(1e-4));
  CHECK_FALSE(f.vanishes_at_endpoints());
  CHECK(std::isinf(variance(f)));
  CHECK(q_variance(f) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("window beyond the grid bandwidth uses the endpoint asymptotics") {
  auto f = constant();
  double Y = 400.0;
  double w = window_probability(f, -Y, Y);
  // 1 - window ~ 1/(pi Y) for the constant
  CHECK((1.0 - w) * kPi * Y == doctest::Approx(1.0).epsilon(1e-2));
}

TEST_CASE("window probabilities are monotone in the window") {
  auto f = phi(1);
  double prev = 0.0;
  for (double R = 0.5; R <= 30.0; R += 0.5) {
    double w = window_probability(f, -R, R);
    CHECK(w >= prev - 1e-14);
    CHECK(w <= 1.0 + 1e-12);
    prev = w;
  }
}

TEST_CASE("ground Dirichlet state") {
  auto f = phi(1);
  CHECK(f.vanishes_at_endpoints());
  CHECK(variance(f) == doctest::Approx(kPi * kPi / 4.0).epsilon(1e-9));
  CHECK(variance_by_moment(f) == doctest::Approx(kPi * kPi / 4.0).epsilon(1e-4));
  CHECK(q_variance(f) == doctest::Approx(1.0 / 3.0 - 2.0 / (kPi * kPi)).epsilon(1e-12));
  CHECK(variance(phi(3)) == doctest::Approx(9.0 * kPi * kPi / 4.0).epsilon(1e-8));
}

TEST_CASE("modulation shifts the density") {
  auto f = builtin(builtins::BumpG3{}, grid());
  double c = 2.75;
  auto g = modulated(f, c);
  auto Pf = limiting_distribution(f);
  auto Pg = limiting_distribution(g);
  for (double y : {-7.0, -1.3, 0.0, 2.2, 9.5})
    CHECK(Pg.density(y) == doctest::Approx(Pf.density(y + c)).epsilon(1e-10));
  CHECK(window_probability(g, -1.0 - c, 1.0 - c) ==
        doctest::Approx(window_probability(f, -1.0, 1.0)).epsilon(1e-10));
}

TEST_CASE("density integrates to the window probability") {
  auto f = phi(2);
  auto P = limiting_distribution(f);
  Grid g = make_grid(GridRule::gauss_legendre, 400);
  double a = -3.0, b = 5.0, sum = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i)
    sum += g.weight(i) * P.density(0.5 * (b - a) * g.node(i) + 0.5 * (a + b));
  sum *= 0.5 * (b - a);
  CHECK(window_probability(f, a, b) == doctest::Approx(sum).epsilon(1e-10));
}

TEST_CASE("limiting CDF is a distribution function") {
  LimitingCdf F(phi(1));
  CHECK(F(0.0) == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(F(-1e6) < 1e-6);
  CHECK(F(1e6) > 1.0 - 1e-6);
  CHECK(F(2.0) - F(-2.0) == doctest::Approx(window_probability(phi(1), -2.0, 2.0)).epsilon(1e-6));
}

TEST_CASE("parse_builtin rejects unknown names") {
  CHECK_THROWS_AS(parse_builtin("gaussian", 1, 1.0), Error);
  CHECK(builtin(parse_builtin("dirichlet", 2, 0.0), grid()).label() == "dirichlet_2");
}
