#include <cmath>
#include <sstream>

#include "qphase/spectral.hpp"
#include "qphase/wavefn.hpp"

namespace qphase {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double bump(double x) {
  if (x <= -1.0 || x >= 1.0) return 0.0;
  const double a = 1.0 + x;
  const double b = 1.0 - x;
  return std::exp(-1.0 / a - 1.0 / b) / std::sqrt(a * b);
}

WaveFunction sampled(const Grid& grid, double (*fn)(double, double), double p, std::string label) {
  ComplexVector v(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) v[i] = fn(grid.node(i), p);
  return normalize(v, grid, std::move(label));
}

}  // namespace

WaveFunction builtin(const BuiltinSpec& spec, const Grid& grid) {
  return std::visit(
      overloaded{
          [&](const builtins::Constant&) {
            return sampled(grid, [](double, double) { return 1.0; }, 0.0, "constant");
          },
          [&](const builtins::Dirichlet& d) {
            if (d.m < 1) fail(ErrorCode::invalid_argument, "dirichlet: m must be >= 1");
            return sampled(
                grid, [](double x, double m) { return std::sin(kPi * m * (x + 1.0) / 2.0); },
                static_cast<double>(d.m), "dirichlet_" + std::to_string(d.m));
          },
          [&](const builtins::BumpG3&) {
            return sampled(grid, [](double x, double) { return bump(x); }, 0.0, "bump_g3");
          },
          [&](const builtins::Prolate& p) {
            if (!(p.R > 0.0) || !std::isfinite(p.R))
              fail(ErrorCode::invalid_argument, "prolate: R must be positive");
            return solve_prolate(p.R, grid).psi;
          },
      },
      spec);
}

BuiltinSpec parse_builtin(const std::string& name, int m, double R) {
  if (name == "constant") return builtins::Constant{};
  if (name == "dirichlet") {
    if (m < 1) fail(ErrorCode::invalid_argument, "dirichlet: m must be >= 1");
    return builtins::Dirichlet{m};
  }
  if (name == "bump_g3") return builtins::BumpG3{};
  if (name == "prolate") {
    if (!(R > 0.0) || !std::isfinite(R)) fail(ErrorCode::invalid_argument, "prolate: R must be positive");
    return builtins::Prolate{R};
  }
  fail(ErrorCode::invalid_argument, "unknown wave function '" + name + "'");
}

}  // namespace qphase
