#pragma once

#include <json.hpp>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "qphase/interval.hpp"
#include "qphase/protocol.hpp"
#include "qphase/spectral.hpp"
#include "qphase/tails.hpp"
#include "qphase/wavefn.hpp"

namespace qphase::io {

using nlohmann::json;

/// {label, rule, nodes, weights, re, im}
json to_json(const WaveFunction& f);
WaveFunction wavefn_from_json(const json& j);

/// {R, lambda, xi, ode_residual, psi}
json to_json(const ProlateSolution& s);

/// {n, re, im}
json to_json(const InputState& s);
InputState input_state_from_json(const json& j);

/// {beta, R_beta, n, half_width, state}
json to_json(const IntervalDesign& d);

json to_json(const CramerRaoReport& r);
json to_json(const ConvolutionBoundReport& r);

/// Header "y,density".
void write_density_csv(std::ostream& os, std::span<const double> ys, std::span<const double> density);

/// Header "f_label,y,tail,log_tail,flagged".
void write_tails_csv(std::ostream& os, std::span<const TailCurve> curves);

/// Header "index,theta_hat".
void write_samples_csv(std::ostream& os, const OutcomeSample& sample);

struct CoverageRow {
  double beta;
  int n;
  Coverage coverage;
};

/// Header "beta,n,trials,coverage,stderr".
void write_coverage_csv(std::ostream& os, std::span<const CoverageRow> rows);

/// Shortest decimal form that round-trips.
std::string format_double(double v);

}  // namespace qphase::io
