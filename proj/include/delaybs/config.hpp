#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "delaybs/model.hpp"

namespace dbs {

// Market document keys: h, T, s0, f_expr, g_expr, g_min, rate.
//   rate: {"kind": "constant", "value": r}
//       | {"kind": "piecewise", "breakpoints": [...], "values": [...]}
//       | {"kind": "samples", "times": [...], "values": [...]}
// Fixed-delay documents add L, b, a, phi_samples and drift {"kind", "c", "eps"}.
VariableDelayMarket market_from_json(const nlohmann::json& doc);
FixedDelaySfde fixed_delay_from_json(const nlohmann::json& doc);

RateCurve rate_from_json(const nlohmann::json& doc);

bool has_fixed_delay_keys(const nlohmann::json& doc);

// Reads and parses a JSON file; ConfigError names the path on failure.
nlohmann::json load_json_file(const std::filesystem::path& path);

}  // namespace dbs
