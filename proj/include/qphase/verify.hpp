#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "qphase/io.hpp"

namespace qphase {

enum class VerifySuite { variance, tails, prolate, fisher, appendix_a1, convergence, all };

VerifySuite verify_suite_from_string(std::string_view name);
std::string_view to_string(VerifySuite suite) noexcept;

struct Check {
  std::string suite;
  std::string name;
  double measured = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  std::string relation;  // how measured is compared with expected
  bool passed = false;
  std::string detail;
};

struct VerifyReport {
  std::vector<Check> checks;
  bool passed() const noexcept;
};

/// Runs the named invariant suite. A check whose computation throws is
/// recorded as failed with the error message.
VerifyReport run_verify(VerifySuite suite);

nlohmann::json to_json(const VerifyReport& report);

}  // namespace qphase
