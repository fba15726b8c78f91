#include "qphase/io.hpp"

#include <charconv>
#include <cmath>

namespace qphase::io {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

// JSON has no infinity; unbounded values are written as null.
json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::vector<double> reals(std::span<const Complex> v) {
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& c : v) out.push_back(c.real());
  return out;
}

std::vector<double> imags(std::span<const Complex> v) {
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& c : v) out.push_back(c.imag());
  return out;
}

ComplexVector complex_from(const json& j) {
  const auto re = j.at("re").get<std::vector<double>>();
  const auto im = j.at("im").get<std::vector<double>>();
  if (re.size() != im.size()) fail(ErrorCode::invalid_argument, "json: re and im lengths differ");
  ComplexVector v(re.size());
  for (std::size_t i = 0; i < re.size(); ++i) v[i] = {re[i], im[i]};
  return v;
}

}  // namespace

json to_json(const WaveFunction& f) {
  const auto& g = f.grid();
  return json{{"label", f.label()},
              {"rule", std::string(to_string(g.rule()))},
              {"nodes", std::vector<double>(g.nodes().begin(), g.nodes().end())},
              {"weights", std::vector<double>(g.weights().begin(), g.weights().end())},
              {"re", reals(f.values())},
              {"im", imags(f.values())}};
}

WaveFunction wavefn_from_json(const json& j) {
  try {
    Grid grid(grid_rule_from_string(j.at("rule").get<std::string>()),
              j.at("nodes").get<std::vector<double>>(), j.at("weights").get<std::vector<double>>());
    return WaveFunction(std::move(grid), complex_from(j), j.at("label").get<std::string>());
  } catch (const json::exception& e) {
    fail(ErrorCode::invalid_argument, std::string("wave function json: ") + e.what());
  }
}

json to_json(const ProlateSolution& s) {
  return json{{"R", s.R},
              {"lambda", s.lambda},
              {"xi", s.xi},
              {"ode_residual", s.ode_residual},
              {"psi", to_json(s.psi)}};
}

json to_json(const InputState& s) {
  return json{{"n", s.n()}, {"re", reals(s.coeffs())}, {"im", imags(s.coeffs())}};
}

InputState input_state_from_json(const json& j) {
  try {
    auto v = complex_from(j);
    if (j.at("n").get<int>() + 1 != static_cast<int>(v.size()))
      fail(ErrorCode::invalid_argument, "input state json: n does not match coefficient count");
    return InputState(std::move(v));
  } catch (const json::exception& e) {
    fail(ErrorCode::invalid_argument, std::string("input state json: ") + e.what());
  }
}

json to_json(const IntervalDesign& d) {
  return json{{"beta", d.beta},
              {"R_beta", d.R_beta},
              {"n", d.n},
              {"half_width", d.half_width},
              {"state", to_json(d.state)}};
}

json to_json(const CramerRaoReport& r) {
  return json{{"variance", number(r.variance)},
              {"q_variance", r.q_variance},
              {"product", number(r.product)},
              {"gap", number(r.gap)},
              {"bounded", r.bounded}};
}

json to_json(const ConvolutionBoundReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"y", row.y},
                    {"convolution", row.convolution},
                    {"direct", row.direct},
                    {"bound", row.bound},
                    {"segment_sum", row.segment_sum},
                    {"lower_remainder", row.lower_remainder},
                    {"upper_remainder", row.upper_remainder},
                    {"relative_disagreement", row.relative_disagreement},
                    {"bound_holds", row.bound_holds}});
  }
  return json{{"truncation", r.truncation},
              {"segments", r.segments},
              {"fit_tolerance", r.fit_tolerance},
              {"rows", rows},
              {"bound_exponent", r.bound_exponent},
              {"convolution_exponent", r.convolution_exponent},
              {"required_exponent", r.required_exponent},
              {"max_relative_disagreement", r.max_relative_disagreement},
              {"all_bounds_hold", r.all_bounds_hold},
              {"exponent_ok", r.exponent_ok}};
}

void write_density_csv(std::ostream& os, std::span<const double> ys, std::span<const double> density) {
  if (ys.size() != density.size()) fail(ErrorCode::invalid_argument, "density csv: length mismatch");
  os << "y,density\n";
  for (std::size_t i = 0; i < ys.size(); ++i) os << format_double(ys[i]) << ',' << format_double(density[i]) << '\n';
}

void write_tails_csv(std::ostream& os, std::span<const TailCurve> curves) {
  os << "f_label,y,tail,log_tail,flagged\n";
  for (const auto& c : curves)
    for (std::size_t i = 0; i < c.size(); ++i)
      os << c.label << ',' << format_double(c.y[i]) << ',' << format_double(c.tail[i]) << ','
         << format_double(c.log_tail[i]) << ',' << (c.flagged[i] ? 1 : 0) << '\n';
}

void write_samples_csv(std::ostream& os, const OutcomeSample& sample) {
  os << "index,theta_hat\n";
  for (std::size_t i = 0; i < sample.estimates.size(); ++i) os << i << ',' << format_double(sample.estimates[i]) << '\n';
}

void write_coverage_csv(std::ostream& os, std::span<const CoverageRow> rows) {
  os << "beta,n,trials,coverage,stderr\n";
  for (const auto& r : rows)
    os << format_double(r.beta) << ',' << r.n << ',' << r.coverage.trials << ','
       << format_double(r.coverage.coverage) << ',' << format_double(r.coverage.stderr_) << '\n';
}

}  // namespace qphase::io
