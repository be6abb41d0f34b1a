#pragma once

#include <filesystem>
#include <span>
#include <string>

#include <json.hpp>

#include "satwait/bounds.hpp"
#include "satwait/solver.hpp"
#include "satwait/subsolutions.hpp"
#include "satwait/verify.hpp"

namespace satwait::io {

using json = nlohmann::ordered_json;

/// 17 significant digits, so values round-trip exactly through strtod.
std::string format_real(double x);

// Parameter records. The readers throw ConfigError naming the first missing
// or mistyped field.
json to_json(const MSubParams& p);
json to_json(const RelSubParams& p);
MSubParams m_params_from_json(const json& j);
RelSubParams rel_params_from_json(const json& j);

json to_json(const CertificationReport& r);
json to_json(const WaitingTimeReport& r);
json to_json(const ComparisonReport& r);
json to_json(const UpperBound& b);
/// {slope, intercept, residual}; NaN fit values are written as null.
json scaling_summary(const ScalingStudy& s);

/// Reads a whole file as JSON. Throws ConfigError if missing or malformed.
json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const json& j);

void write_snapshot_csv(const std::filesystem::path& path, const RadialState& s);
void write_trace_csv(const std::filesystem::path& path, std::span<const TraceRow> trace);
void write_scaling_csv(const std::filesystem::path& path, const ScalingStudy& s);

}  // namespace satwait::io
