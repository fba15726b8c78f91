// qphase command-line front end. Talks to the library only through qphase.h.
#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qphase/qphase.h"

namespace {

using nlohmann::json;

struct Failure {
  qp_status status;
  std::string message;
};

void check(qp_status s) {
  if (s != QP_OK) throw Failure{s, qp_last_error()};
}

// 2 for bad input or resolution, 1 for internal or numerical failures.
int exit_code(qp_status s) {
  switch (s) {
    case QP_INVALID_ARGUMENT:
    case QP_RESOLUTION_EXCEEDED:
    case QP_DEGENERATE_INPUT:
    case QP_INSUFFICIENT_DATA:
    case QP_UNREACHABLE_ACCURACY:
    case QP_OUT_OF_RANGE:
    case QP_SINGULAR_POINT:
      return 2;
    default:
      return 1;
  }
}

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

json parsed(char* raw) {
  std::unique_ptr<char, decltype(&qp_string_free)> holder(raw, &qp_string_free);
  return json::parse(holder.get());
}

struct WaveHandle {
  qp_wavefn* p = nullptr;
  WaveHandle() = default;
  WaveHandle(const WaveHandle&) = delete;
  WaveHandle& operator=(const WaveHandle&) = delete;
  WaveHandle(WaveHandle&& o) noexcept : p(o.p) { o.p = nullptr; }
  ~WaveHandle() { qp_wavefn_free(p); }
};

struct FSpec {
  std::string name = "constant";
  int m = 1;
  double R = 1.0;
  double c = 0.0;
};

WaveHandle load(const FSpec& spec, int grid_points) {
  WaveHandle h;
  check(qp_wavefn_builtin(spec.name.c_str(), spec.m, spec.R, grid_points, &h.p));
  if (spec.c != 0.0) {
    WaveHandle mod;
    check(qp_wavefn_modulated(h.p, spec.c, &mod.p));
    return mod;
  }
  return h;
}

std::string label(const WaveHandle& h) {
  char* raw = nullptr;
  check(qp_wavefn_label(h.p, &raw));
  std::string s(raw);
  qp_string_free(raw);
  return s;
}

struct Output {
  std::string path;
  std::string format = "csv";

  void emit(const std::string& text) const {
    if (path.empty() || path == "-") {
      std::cout << text;
      return;
    }
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Failure{QP_INVALID_ARGUMENT, "cannot open output file '" + path + "'"};
    os << text;
  }
};

void add_fspec(CLI::App* cmd, FSpec& spec) {
  cmd->add_option("--f", spec.name, "wave function")
      ->check(CLI::IsMember({"constant", "dirichlet", "bump_g3", "prolate"}));
  cmd->add_option("--m", spec.m, "dirichlet order")->check(CLI::PositiveNumber);
  cmd->add_option("--R", spec.R, "prolate band half-width")->check(CLI::PositiveNumber);
  cmd->add_option("--c", spec.c, "modulation e^{icx}");
}

std::vector<double> ladder(double lo, double hi, int steps) {
  std::vector<double> ys;
  if (steps == 1) return {lo};
  for (int k = 0; k < steps; ++k) ys.push_back(lo + (hi - lo) * k / (steps - 1));
  return ys;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Phase estimation limiting distributions, prolate designs and interval estimation"};
  app.require_subcommand(1);
  int grid_points = 512;
  std::uint64_t seed = 1;
  Output out;
  app.add_option("--grid-points", grid_points, "Gauss-Legendre nodes")->check(CLI::Range(2, 8192));
  app.add_option("--seed", seed, "random seed");
  app.add_option("--format", out.format, "output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--out", out.path, "output path (default stdout)");

  auto fallthrough = [](CLI::App* c) { c->fallthrough(); };

  FSpec density_f;
  double y_max = 10.0;
  std::optional<double> y_min;
  int steps = 201;
  auto* density = app.add_subcommand("density", "limiting density |F(f)(y)|^2 on an even y grid");
  fallthrough(density);
  add_fspec(density, density_f);
  density->add_option("--y-max", y_max, "largest y")->check(CLI::PositiveNumber);
  density->add_option("--y-min", y_min, "smallest y (default -y-max)");
  density->add_option("--steps", steps, "number of y values")->check(CLI::Range(1, 1000000));

  FSpec tails_f;
  double tails_y_max = 12.0;
  int tails_steps = 24;
  std::vector<double> tails_ys;
  auto* tails = app.add_subcommand("tails", "tail probabilities and the minimum-tail curve");
  fallthrough(tails);
  add_fspec(tails, tails_f);
  tails->add_option("--y-max", tails_y_max, "largest y")->check(CLI::PositiveNumber);
  tails->add_option("--steps", tails_steps, "y values y_max k/steps, k = 1..steps")->check(CLI::Range(1, 100000));
  tails->add_option("--y", tails_ys, "explicit y values")->delimiter(',');

  double beta = 0.9;
  int n = 200;
  std::size_t trials = 10000;
  double theta = 1.0;
  auto* design = app.add_subcommand("design-interval", "prolate confidence-interval design and coverage");
  fallthrough(design);
  design->add_option("--beta", beta, "confidence coefficient");
  design->add_option("--n", n, "number of applications")->check(CLI::PositiveNumber);
  design->add_option("--trials", trials, "Monte Carlo trials");
  design->add_option("--theta", theta, "true phase for the simulation");

  std::string suite = "all";
  auto* verify = app.add_subcommand("verify", "run an invariant suite");
  fallthrough(verify);
  verify->add_option("suite", suite, "suite")
      ->check(CLI::IsMember({"variance", "tails", "prolate", "fisher", "appendix_a1", "convergence", "all"}));

  double prolate_R = 2.0;
  auto* prolate = app.add_subcommand("prolate", "top eigenfunction of the concentration operator");
  fallthrough(prolate);
  prolate->add_option("--R", prolate_R, "band half-width")->check(CLI::PositiveNumber);

  double lambda_R = 2.0;
  auto* lambda = app.add_subcommand("lambda", "lambda(R), 1 - lambda(R) and its asymptotic form");
  fallthrough(lambda);
  lambda->add_option("--R", lambda_R, "band half-width")->check(CLI::PositiveNumber);

  FSpec wave_f;
  auto* wave = app.add_subcommand("wavefn", "sampled wave function");
  fallthrough(wave);
  add_fspec(wave, wave_f);

  FSpec sample_f;
  int sample_n = 100;
  std::size_t count = 1000;
  double sample_theta = 1.0;
  auto* sample = app.add_subcommand("sample", "simulated estimates theta_hat");
  fallthrough(sample);
  add_fspec(sample, sample_f);
  sample->add_option("--n", sample_n, "number of applications")->check(CLI::PositiveNumber);
  sample->add_option("--count", count, "number of draws");
  sample->add_option("--theta", sample_theta, "true phase");

  FSpec cr_f;
  auto* cramer = app.add_subcommand("cramer-rao", "variance, q-variance and their product");
  fallthrough(cramer);
  add_fspec(cramer, cr_f);

  FSpec ra_f;
  double B = 0.1;
  double eps = 1e-3;
  auto* required = app.add_subcommand("required-applications", "applications needed for width B at error eps");
  fallthrough(required);
  add_fspec(required, ra_f);
  required->add_option("--B", B, "error width")->check(CLI::PositiveNumber);
  required->add_option("--eps", eps, "error probability");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    std::ostringstream os;
    if (density->parsed()) {
      const auto f = load(density_f, grid_points);
      const auto ys = ladder(y_min.value_or(-y_max), y_max, steps);
      std::vector<double> d(ys.size());
      check(qp_density(f.p, ys.data(), ys.size(), d.data()));
      if (out.format == "json") {
        json rows = json::array();
        for (std::size_t i = 0; i < ys.size(); ++i) rows.push_back({{"y", ys[i]}, {"density", d[i]}});
        os << json{{"label", label(f)}, {"rows", rows}}.dump(2) << '\n';
      } else {
        os << "y,density\n";
        for (std::size_t i = 0; i < ys.size(); ++i) os << fmt(ys[i]) << ',' << fmt(d[i]) << '\n';
      }
    } else if (tails->parsed()) {
      std::vector<double> ys = tails_ys;
      if (ys.empty())
        for (int k = 1; k <= tails_steps; ++k) ys.push_back(tails_y_max * k / tails_steps);
      std::vector<FSpec> specs;
      if (tails->count("--f") > 0) {
        specs.push_back(tails_f);
      } else {
        specs = {{"dirichlet", 1, 1.0, 0.0}, {"bump_g3", 1, 1.0, 0.0}, {"prolate", 1, 2.0, 0.0}, {"prolate", 1, 10.0, 0.0}};
      }
      struct Curve {
        std::string label;
        std::vector<double> tail;
        std::vector<int> flagged;
      };
      std::vector<Curve> curves;
      for (const auto& s : specs) {
        const auto f = load(s, grid_points);
        Curve c{label(f), std::vector<double>(ys.size()), std::vector<int>(ys.size())};
        check(qp_tail_curve(f.p, ys.data(), ys.size(), c.tail.data(), c.flagged.data()));
        curves.push_back(std::move(c));
      }
      Curve min{"min_tail", std::vector<double>(ys.size()), std::vector<int>(ys.size())};
      check(qp_min_tail_curve(ys.data(), ys.size(), min.tail.data(), min.flagged.data()));
      curves.push_back(std::move(min));
      auto log_tail = [](double t, int flagged) { return std::log(flagged ? 1e-13 : t); };
      if (out.format == "json") {
        json arr = json::array();
        for (const auto& c : curves) {
          json rows = json::array();
          for (std::size_t i = 0; i < ys.size(); ++i)
            rows.push_back({{"y", ys[i]}, {"tail", c.tail[i]}, {"log_tail", log_tail(c.tail[i], c.flagged[i])},
                            {"flagged", c.flagged[i] != 0}});
          arr.push_back({{"f_label", c.label}, {"rows", rows}});
        }
        os << arr.dump(2) << '\n';
      } else {
        os << "f_label,y,tail,log_tail,flagged\n";
        for (const auto& c : curves)
          for (std::size_t i = 0; i < ys.size(); ++i)
            os << c.label << ',' << fmt(ys[i]) << ',' << fmt(c.tail[i]) << ','
               << fmt(log_tail(c.tail[i], c.flagged[i])) << ',' << c.flagged[i] << '\n';
      }
    } else if (design->parsed()) {
      qp_design* raw = nullptr;
      check(qp_design_create(beta, n, &raw));
      std::unique_ptr<qp_design, decltype(&qp_design_free)> d(raw, &qp_design_free);
      double coverage = 0.0;
      double stderr_ = 0.0;
      check(qp_coverage(d.get(), theta, trials, seed, &coverage, &stderr_));
      if (out.format == "csv") {
        os << "beta,n,trials,coverage,stderr\n"
           << fmt(beta) << ',' << n << ',' << trials << ',' << fmt(coverage) << ',' << fmt(stderr_) << '\n';
      } else {
        char* js = nullptr;
        check(qp_design_to_json(d.get(), &js));
        json j = parsed(js);
        j["coverage"] = {{"trials", trials}, {"theta", theta}, {"seed", seed}, {"coverage", coverage}, {"stderr", stderr_}};
        os << j.dump(2) << '\n';
      }
    } else if (verify->parsed()) {
      char* js = nullptr;
      int passed = 0;
      check(qp_verify_json(suite.c_str(), &js, &passed));
      out.emit(parsed(js).dump(2) + "\n");
      return passed ? 0 : 1;
    } else if (prolate->parsed()) {
      char* js = nullptr;
      check(qp_prolate_json(prolate_R, grid_points, &js));
      os << parsed(js).dump(2) << '\n';
    } else if (lambda->parsed()) {
      double l = 0.0;
      double comp = 0.0;
      double asym = 0.0;
      check(qp_lambda(lambda_R, &l, &comp));
      check(qp_lambda_asymptotic_complement(lambda_R, &asym));
      os << json{{"R", lambda_R}, {"lambda", l}, {"complement", comp}, {"asymptotic_complement", asym}}.dump(2) << '\n';
    } else if (wave->parsed()) {
      const auto f = load(wave_f, grid_points);
      char* js = nullptr;
      check(qp_wavefn_to_json(f.p, &js));
      os << parsed(js).dump(2) << '\n';
    } else if (sample->parsed()) {
      const auto f = load(sample_f, grid_points);
      qp_state* raw = nullptr;
      check(qp_state_from_wavefn(f.p, sample_n, &raw));
      std::unique_ptr<qp_state, decltype(&qp_state_free)> st(raw, &qp_state_free);
      std::vector<double> est(count);
      check(qp_sample_outcomes(st.get(), sample_theta, count, seed, est.data()));
      if (out.format == "json") {
        os << json{{"n", sample_n}, {"theta", sample_theta}, {"seed", seed}, {"theta_hat", est}}.dump(2) << '\n';
      } else {
        os << "index,theta_hat\n";
        for (std::size_t i = 0; i < est.size(); ++i) os << i << ',' << fmt(est[i]) << '\n';
      }
    } else if (cramer->parsed()) {
      const auto f = load(cr_f, grid_points);
      char* js = nullptr;
      check(qp_cramer_rao_json(f.p, &js));
      json j = parsed(js);
      j["label"] = label(f);
      os << j.dump(2) << '\n';
    } else if (required->parsed()) {
      const auto f = load(ra_f, grid_points);
      double A = 0.0;
      std::int64_t applications = 0;
      check(qp_required_applications(f.p, B, eps, &A, &applications));
      os << json{{"label", label(f)}, {"B", B}, {"eps", eps}, {"A", A}, {"applications", applications}}.dump(2) << '\n';
    }
    out.emit(os.str());
  } catch (const Failure& e) {
    std::cerr << "error (" << qp_status_string(e.status) << "): " << e.message << '\n';
    return exit_code(e.status);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
