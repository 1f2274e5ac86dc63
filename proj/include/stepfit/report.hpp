#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>

#include "json.hpp"

#include "stepfit/config.hpp"
#include "stepfit/solver.hpp"

namespace stepfit {

/// Everything a fit run reports: config echo, input digest, and the result.
/// Serializes to the "stepfit/1" JSON schema and round-trips losslessly.
struct FitReport {
  std::string input_path;
  std::string input_digest;  // "fnv1a64:<16 hex digits>" over the raw bytes
  std::size_t input_points = 0;
  std::string strategy = "iso";  // iso | rlx | raw
  FitConfig config;
  FitResult result;
};

nlohmann::json report_to_json(const FitReport& report);
FitReport report_from_json(const nlohmann::json& j);

/// FNV-1a 64-bit digest, hex-encoded with the "fnv1a64:" prefix.
std::string fnv1a64_digest(std::string_view bytes);

/// Two-column step-curve trace: per block, one "p value" row at the block
/// start and one at its end, ready for line plotting.
void write_plot(std::ostream& out, const StepCurve& curve);

}  // namespace stepfit
