#include "polycomb/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace polycomb {

std::string format_number(double value) {
    if (value == 0.0)
        value = 0.0; // folds -0
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    return buf;
}

double round_for_output(double value) {
    if (!std::isfinite(value))
        return value;
    const double rounded = std::strtod(format_number(value).c_str(), nullptr);
    return rounded == 0.0 ? 0.0 : rounded;
}

namespace {

nlohmann::ordered_json named_values(const std::vector<NamedValue>& values) {
    auto obj = nlohmann::ordered_json::object();
    for (const auto& v : values)
        obj[v.name] = round_for_output(v.value);
    return obj;
}

} // namespace

nlohmann::ordered_json to_json(const Decision& decision) {
    nlohmann::ordered_json j;
    j["verdict"] = std::string(to_string(decision.verdict));
    j["combined"] = round_for_output(decision.combined.value);
    j["components"] = named_values(decision.components);
    j["weights_used"] = named_values(decision.weights_used);
    j["leakage"] = round_for_output(decision.leakage);
    j["trace"] = decision.trace;
    return j;
}

std::string serialize(const Decision& decision) {
    return to_json(decision).dump();
}

std::string format_request(const AccessRequest& req) {
    std::string types;
    for (const auto& t : req.requested) {
        if (!types.empty())
            types += ',';
        types += t;
    }
    return req.subject + " " + req.object + " " + types;
}

} // namespace polycomb
