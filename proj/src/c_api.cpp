#include "qphase/qphase.h"

#include <cmath>
#include <cstring>
#include <new>
#include <optional>
#include <string>

#include "qphase/interval.hpp"
#include "qphase/io.hpp"
#include "qphase/verify.hpp"

struct qp_wavefn {
  qphase::WaveFunction f;
};

struct qp_state {
  qphase::InputState s;
};

struct qp_design {
  qphase::IntervalDesign d;
};

namespace {

thread_local std::string last_error;

qp_status status_of(qphase::ErrorCode code) {
  using qphase::ErrorCode;
  switch (code) {
    case ErrorCode::invalid_argument: return QP_INVALID_ARGUMENT;
    case ErrorCode::resolution_exceeded: return QP_RESOLUTION_EXCEEDED;
    case ErrorCode::convergence_failure: return QP_CONVERGENCE_FAILURE;
    case ErrorCode::bracket_error: return QP_BRACKET_ERROR;
    case ErrorCode::degenerate_input: return QP_DEGENERATE_INPUT;
    case ErrorCode::numerical_consistency: return QP_NUMERICAL_CONSISTENCY;
    case ErrorCode::insufficient_data: return QP_INSUFFICIENT_DATA;
    case ErrorCode::unreachable_accuracy: return QP_UNREACHABLE_ACCURACY;
    case ErrorCode::out_of_range: return QP_OUT_OF_RANGE;
    case ErrorCode::singular_point: return QP_SINGULAR_POINT;
    case ErrorCode::solution_rejected: return QP_SOLUTION_REJECTED;
  }
  return QP_INTERNAL_ERROR;
}

template <class Fn>
qp_status guarded(Fn&& fn) {
  try {
    fn();
    last_error.clear();
    return QP_OK;
  } catch (const qphase::Error& e) {
    last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return QP_INTERNAL_ERROR;
  } catch (const std::exception& e) {
    last_error = e.what();
    return QP_INTERNAL_ERROR;
  } catch (...) {
    last_error = "unknown error";
    return QP_INTERNAL_ERROR;
  }
}

void require(bool ok, const char* what) {
  if (!ok) qphase::fail(qphase::ErrorCode::invalid_argument, what);
}

char* duplicate(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

const qphase::Grid& grid_for(int grid_points) {
  require(grid_points >= 0, "grid_points must be non-negative");
  if (grid_points == 0 || grid_points == static_cast<int>(qphase::kDefaultGridPoints))
    return qphase::default_grid();
  thread_local std::optional<qphase::Grid> custom;
  if (!custom || custom->size() != static_cast<std::size_t>(grid_points))
    custom = qphase::make_grid(qphase::GridRule::gauss_legendre, static_cast<std::size_t>(grid_points));
  return *custom;
}

}  // namespace

extern "C" {

const char* qp_last_error(void) { return last_error.c_str(); }

const char* qp_status_string(qp_status status) {
  switch (status) {
    case QP_OK: return "ok";
    case QP_INVALID_ARGUMENT: return "invalid_argument";
    case QP_RESOLUTION_EXCEEDED: return "resolution_exceeded";
    case QP_CONVERGENCE_FAILURE: return "convergence_failure";
    case QP_BRACKET_ERROR: return "bracket_error";
    case QP_DEGENERATE_INPUT: return "degenerate_input";
    case QP_NUMERICAL_CONSISTENCY: return "numerical_consistency";
    case QP_INSUFFICIENT_DATA: return "insufficient_data";
    case QP_UNREACHABLE_ACCURACY: return "unreachable_accuracy";
    case QP_OUT_OF_RANGE: return "out_of_range";
    case QP_SINGULAR_POINT: return "singular_point";
    case QP_SOLUTION_REJECTED: return "solution_rejected";
    case QP_INTERNAL_ERROR: return "internal_error";
  }
  return "unknown";
}

const char* qp_version(void) { return "1.0.0"; }

void qp_string_free(char* s) { delete[] s; }

qp_status qp_wavefn_builtin(const char* name, int m, double R, int grid_points, qp_wavefn** out) {
  return guarded([&] {
    require(name && out, "null argument");
    const auto spec = qphase::parse_builtin(name, m, R);
    *out = new qp_wavefn{qphase::builtin(spec, grid_for(grid_points))};
  });
}

qp_status qp_wavefn_from_json(const char* json, qp_wavefn** out) {
  return guarded([&] {
    require(json && out, "null argument");
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(json);
    } catch (const nlohmann::json::exception& e) {
      qphase::fail(qphase::ErrorCode::invalid_argument, std::string("json parse: ") + e.what());
    }
    *out = new qp_wavefn{qphase::io::wavefn_from_json(j)};
  });
}

qp_status qp_wavefn_modulated(const qp_wavefn* base, double c, qp_wavefn** out) {
  return guarded([&] {
    require(base && out, "null argument");
    *out = new qp_wavefn{qphase::modulated(base->f, c)};
  });
}

void qp_wavefn_free(qp_wavefn* f) { delete f; }

qp_status qp_wavefn_to_json(const qp_wavefn* f, char** out) {
  return guarded([&] {
    require(f && out, "null argument");
    *out = duplicate(qphase::io::to_json(f->f).dump());
  });
}

qp_status qp_wavefn_label(const qp_wavefn* f, char** out) {
  return guarded([&] {
    require(f && out, "null argument");
    *out = duplicate(f->f.label());
  });
}

qp_status qp_wavefn_bandwidth(const qp_wavefn* f, double* out) {
  return guarded([&] {
    require(f && out, "null argument");
    *out = f->f.grid().bandwidth();
  });
}

qp_status qp_wavefn_vanishes_at_endpoints(const qp_wavefn* f, int* out) {
  return guarded([&] {
    require(f && out, "null argument");
    *out = f->f.vanishes_at_endpoints() ? 1 : 0;
  });
}

qp_status qp_density(const qp_wavefn* f, const double* ys, size_t count, double* out) {
  return guarded([&] {
    require(f && (count == 0 || (ys && out)), "null argument");
    const qphase::LimitingDistribution dist(f->f);
    for (size_t i = 0; i < count; ++i) out[i] = dist.density(ys[i]);
  });
}

qp_status qp_window_probability(const qp_wavefn* f, double r1, double r2, double* out) {
  return guarded([&] {
    require(f && out, "null argument");
    *out = qphase::window_probability(f->f, r1, r2);
  });
}

qp_status qp_tail_probability(const qp_wavefn* f, double R, double* out) {
  return guarded([&] {
    require(f && out, "null argument");
    *out = qphase::tail_probability(f->f, R);
  });
}

qp_status qp_variance(const qp_wavefn* f, double* out) {
  return guarded([&] {
    require(f && out, "null argument");
    *out = qphase::variance(f->f);
  });
}

qp_status qp_variance_by_moment(const qp_wavefn* f, double* out) {
  return guarded([&] {
    require(f && out, "null argument");
    *out = qphase::variance_by_moment(f->f);
  });
}

qp_status qp_q_variance(const qp_wavefn* f, double* out) {
  return guarded([&] {
    require(f && out, "null argument");
    *out = qphase::q_variance(f->f);
  });
}

qp_status qp_cramer_rao_json(const qp_wavefn* f, char** out) {
  return guarded([&] {
    require(f && out, "null argument");
    *out = duplicate(qphase::io::to_json(qphase::cramer_rao_report(f->f)).dump());
  });
}

qp_status qp_required_applications(const qp_wavefn* f, double B, double eps, double* A, int64_t* count) {
  return guarded([&] {
    require(f && A && count, "null argument");
    const auto r = qphase::required_applications(f->f, B, eps);
    *A = r.A;
    *count = r.count;
  });
}

qp_status qp_lambda(double R, double* lambda, double* complement) {
  return guarded([&] {
    require(lambda && complement, "null argument");
    *lambda = qphase::lambda_of_R(R);
    *complement = qphase::min_tail_probability(R);
  });
}

qp_status qp_lambda_asymptotic_complement(double R, double* out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    *out = qphase::lambda_asymptotic_complement(R);
  });
}

qp_status qp_prolate_json(double R, int grid_points, char** out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    *out = duplicate(qphase::io::to_json(qphase::solve_prolate(R, grid_for(grid_points))).dump());
  });
}

qp_status qp_dirichlet_minimum(int grid_points, double* value) {
  return guarded([&] {
    require(value != nullptr, "null argument");
    *value = qphase::dirichlet_minimum(grid_for(grid_points)).value;
  });
}

qp_status qp_dirichlet_eigenvalues(size_t count, double* out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    const auto ev = qphase::dirichlet_eigenvalues(count);
    for (size_t i = 0; i < count; ++i) out[i] = ev[i];
  });
}

qp_status qp_min_tail_rate(const double* R, size_t count, int use_asymptotic, double* slope, double* r_squared) {
  return guarded([&] {
    require(R && slope && r_squared, "null argument");
    const auto fit = qphase::min_tail_exponential_rate(
        std::span<const double>(R, count),
        use_asymptotic ? qphase::LambdaSource::asymptotic : qphase::LambdaSource::eigensolver);
    *slope = fit.slope;
    *r_squared = fit.r_squared;
  });
}

namespace {

void copy_curve(const qphase::TailCurve& c, double* tails, int* flagged) {
  for (std::size_t i = 0; i < c.size(); ++i) {
    tails[i] = c.tail[i];
    flagged[i] = c.flagged[i] ? 1 : 0;
  }
}

}  // namespace

qp_status qp_tail_curve(const qp_wavefn* f, const double* ys, size_t count, double* tails, int* flagged) {
  return guarded([&] {
    require(f && ys && tails && flagged, "null argument");
    copy_curve(qphase::tail_curve(f->f, std::span<const double>(ys, count)), tails, flagged);
  });
}

qp_status qp_min_tail_curve(const double* ys, size_t count, double* tails, int* flagged) {
  return guarded([&] {
    require(ys && tails && flagged, "null argument");
    copy_curve(qphase::min_tail_curve(std::span<const double>(ys, count)), tails, flagged);
  });
}

qp_status qp_convolution_bound_json(const double* ys, size_t count, double T, int N, char** out) {
  return guarded([&] {
    require(ys && out, "null argument");
    const auto r = qphase::convolution_bound_check(std::span<const double>(ys, count), T, N);
    *out = duplicate(qphase::io::to_json(r).dump());
  });
}

qp_status qp_state_from_wavefn(const qp_wavefn* f, int n, qp_state** out) {
  return guarded([&] {
    require(f && out, "null argument");
    *out = new qp_state{qphase::coefficients_from_wavefn(f->f, n)};
  });
}

qp_status qp_state_from_coeffs(const double* re, const double* im, size_t length, qp_state** out) {
  return guarded([&] {
    require(re && im && out, "null argument");
    qphase::ComplexVector a(length);
    for (size_t i = 0; i < length; ++i) a[i] = {re[i], im[i]};
    *out = new qp_state{qphase::InputState(std::move(a))};
  });
}

void qp_state_free(qp_state* s) { delete s; }

qp_status qp_state_to_json(const qp_state* s, char** out) {
  return guarded([&] {
    require(s && out, "null argument");
    *out = duplicate(qphase::io::to_json(s->s).dump());
  });
}

qp_status qp_state_n(const qp_state* s, int* out) {
  return guarded([&] {
    require(s && out, "null argument");
    *out = s->s.n();
  });
}

qp_status qp_outcome_density(const qp_state* s, double theta, double theta_hat, double* out) {
  return guarded([&] {
    require(s && out, "null argument");
    *out = qphase::outcome_density(s->s, theta, theta_hat);
  });
}

qp_status qp_sample_outcomes(const qp_state* s, double theta, size_t count, uint64_t seed, double* out) {
  return guarded([&] {
    require(s && out, "null argument");
    const auto sample = qphase::sample_outcomes(s->s, theta, count, seed);
    std::memcpy(out, sample.estimates.data(), count * sizeof(double));
  });
}

qp_status qp_sld_fisher(const qp_state* s, double* out) {
  return guarded([&] {
    require(s && out, "null argument");
    *out = qphase::sld_fisher(s->s);
  });
}

qp_status qp_ks_distance(const qp_wavefn* f, const double* estimates, size_t count, int n, double theta,
                         double* out) {
  return guarded([&] {
    require(f && estimates && out, "null argument");
    qphase::OutcomeSample sample;
    sample.theta_true = theta;
    sample.n = n;
    sample.estimates.assign(estimates, estimates + count);
    *out = qphase::rescaled_ks_distance(sample, f->f);
  });
}

qp_status qp_r_of_beta(double beta, double* out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    *out = qphase::r_of_beta(beta);
  });
}

qp_status qp_design_create(double beta, int n, qp_design** out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    *out = new qp_design{qphase::design(beta, n)};
  });
}

void qp_design_free(qp_design* d) { delete d; }

qp_status qp_design_to_json(const qp_design* d, char** out) {
  return guarded([&] {
    require(d && out, "null argument");
    *out = duplicate(qphase::io::to_json(d->d).dump());
  });
}

qp_status qp_design_info(const qp_design* d, double* R_beta, double* half_width) {
  return guarded([&] {
    require(d && R_beta && half_width, "null argument");
    *R_beta = d->d.R_beta;
    *half_width = d->d.half_width;
  });
}

qp_status qp_coverage(const qp_design* d, double theta, size_t trials, uint64_t seed, double* coverage,
                      double* standard_error) {
  return guarded([&] {
    require(d && coverage && standard_error, "null argument");
    const auto c = qphase::coverage_mc(d->d, theta, trials, seed);
    *coverage = c.coverage;
    *standard_error = c.stderr_;
  });
}

qp_status qp_confidence_interval(double theta_hat, double half_width, double* L, double* U, int* whole) {
  return guarded([&] {
    require(L && U && whole, "null argument");
    const auto t = qphase::confidence_interval(theta_hat, half_width);
    *L = t.L;
    *U = t.U;
    *whole = t.whole ? 1 : 0;
  });
}

qp_status qp_verify_json(const char* suite, char** out, int* passed) {
  return guarded([&] {
    require(suite && out && passed, "null argument");
    const auto report = qphase::run_verify(qphase::verify_suite_from_string(suite));
    *out = duplicate(qphase::to_json(report).dump(2));
    *passed = report.passed() ? 1 : 0;
  });
}

}  // extern "C"
