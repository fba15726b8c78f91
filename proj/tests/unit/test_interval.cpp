#include <doctest.h>

#include <cmath>
#include <random>

#include "qphase/error.hpp"
#include "qphase/interval.hpp"
#include "qphase/spectral.hpp"

using namespace qphase;

TEST_CASE("torus intervals wrap around zero") {
  auto I = confidence_interval(0.1, 0.3);
  CHECK(I.L == doctest::Approx(2.0 * kPi - 0.2));
  CHECK(I.U == doctest::Approx(0.4));
  CHECK(I.width() == doctest::Approx(0.6));
  CHECK(I.contains(0.0));
  CHECK(I.contains(2.0 * kPi - 0.1));
  CHECK(I.contains(0.4));
  CHECK_FALSE(I.contains(kPi));

  auto J = confidence_interval(3.0, 0.5);
  CHECK(J.L == doctest::Approx(2.5));
  CHECK(J.U == doctest::Approx(3.5));
  CHECK_FALSE(J.contains(0.0));

  auto W = confidence_interval(1.0, 4.0);
  CHECK(W.whole);
  CHECK(W.width() == doctest::Approx(2.0 * kPi));
  CHECK(W.contains(5.0));
}

TEST_CASE("interval width is twice the half-width") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> th(-20.0, 20.0), hw(1e-6, kPi - 1e-6);
  for (int i = 0; i < 1000; ++i) {
    double t = th(rng), h = hw(rng);
    auto I = confidence_interval(t, h);
    CHECK(I.width() == doctest::Approx(2.0 * h).epsilon(1e-12));
    CHECK(I.contains(t));
    CHECK(I.L >= 0.0);
    CHECK(I.L < 2.0 * kPi);
  }
}

TEST_CASE("R(beta) inverts lambda") {
  for (double beta : {0.5, 0.9, 0.99}) {
    double R = r_of_beta(beta);
    CHECK(std::abs(lambda_of_R(R) - beta) <= 1e-6);
  }
  CHECK(r_of_beta(0.9) == doctest::Approx(2.11991868).epsilon(1e-7));
  CHECK_THROWS_AS(r_of_beta(0.01), Error);
  CHECK_THROWS_AS(r_of_beta(1.0), Error);
}

TEST_CASE("design half-width and resolution") {
  auto d = design(0.9, 200);
  CHECK(d.half_width == doctest::Approx(2.0 * d.R_beta / 200.0));
  CHECK(d.state.n() == 200);
  try {
    design(0.9, 10);
    FAIL("expected resolution_exceeded");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::resolution_exceeded);
  }
}

TEST_CASE("coverage at the design width and at half of it") {
  auto d = design(0.9, 200);
  auto full = coverage_mc(d, 1.0, 20000, 3);
  CHECK(full.coverage > 0.88);
  CHECK(full.stderr_ == doctest::Approx(std::sqrt(full.coverage * (1 - full.coverage) / 20000)));
  auto half = coverage_mc(d.state, d.half_width / 2.0, 1.0, 20000, 3);
  CHECK(half.coverage < 0.88);
  CHECK_THROWS_AS(coverage_mc(d, 1.0, 100, 3), Error);
}
