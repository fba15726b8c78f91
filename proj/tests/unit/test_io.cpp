#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "qphase/error.hpp"
#include "qphase/io.hpp"
#include "qphase/spectral.hpp"

using namespace qphase;

TEST_CASE("wave function JSON round trip") {
  auto f = modulated(builtin(builtins::BumpG3{}, default_grid()), 1.5);
  auto j = io::to_json(f);
  auto g = io::wavefn_from_json(nlohmann::json::parse(j.dump()));
  CHECK(g.label() == f.label());
  CHECK(g.grid() == f.grid());
  for (std::size_t i = 0; i < f.size(); ++i) CHECK(g.values()[i] == f.values()[i]);
  CHECK_THROWS(io::wavefn_from_json(nlohmann::json{{"label", "x"}}));
}

TEST_CASE("input state JSON round trip") {
  auto s = InputState::normalized(ComplexVector{Complex(1, 2), Complex(-0.5, 0), Complex(0, 3)});
  auto t = io::input_state_from_json(nlohmann::json::parse(io::to_json(s).dump()));
  REQUIRE(t.n() == s.n());
  for (int k = 0; k <= s.n(); ++k) CHECK(t.coeffs()[k] == s.coeffs()[k]);
}

TEST_CASE("unbounded values serialise as null") {
  auto r = cramer_rao_report(builtin(builtins::Constant{}, default_grid()));
  auto j = io::to_json(r);
  CHECK(j["variance"].is_null());
  CHECK(io::format_double(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(io::format_double(0.1) == "0.1");
  CHECK(std::stod(io::format_double(kPi)) == kPi);
}

TEST_CASE("CSV headers") {
  std::ostringstream d, t, s;
  std::vector<double> ys{0.0, 1.0}, dens{0.5, 0.25};
  io::write_density_csv(d, ys, dens);
  CHECK(d.str() == "y,density\n0,0.5\n1,0.25\n");

  std::vector<double> yt{2.0};
  std::vector<TailCurve> curves{min_tail_curve(yt)};
  io::write_tails_csv(t, curves);
  CHECK(t.str().rfind("f_label,y,tail,log_tail,flagged\nmin_tail,2,", 0) == 0);

  OutcomeSample sample{0.0, {1.0, 2.5}, 4, 1};
  io::write_samples_csv(s, sample);
  CHECK(s.str() == "index,theta_hat\n0,1\n1,2.5\n");
}

TEST_CASE("design JSON carries the state") {
  auto d = design(0.9, 40);
  auto j = io::to_json(d);
  CHECK(j["n"] == 40);
  CHECK(j["R_beta"].get<double>() == doctest::Approx(d.R_beta));
  CHECK(j["state"]["re"].size() == 41);
}
