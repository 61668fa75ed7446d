#pragma once

#include <string>

#include <json.hpp>

#include "polycomb/engine.hpp"

namespace polycomb {

/// Shortest rendering with at most 12 significant digits; -0 prints as 0.
std::string format_number(double value);

/// The value as it appears in serialized output (rounded to 12 significant
/// digits).
double round_for_output(double value);

nlohmann::ordered_json to_json(const Decision& decision);

/// Compact single-line JSON with keys verdict, combined, components,
/// weights_used, leakage, trace. Deterministic for equal decisions.
std::string serialize(const Decision& decision);

std::string format_request(const AccessRequest& req);

} // namespace polycomb
