#pragma once

/// \file
/// Per-request evaluation: computes each policy's clearance from the loaded
/// config, fuses them with the configured combiner and explains the result.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "polycomb/combiner.hpp"
#include "polycomb/config.hpp"

namespace polycomb {

struct NamedValue {
    std::string name;
    double value = 0.0;

    friend bool operator==(const NamedValue&, const NamedValue&) = default;
};

struct Decision {
    Verdict verdict = Verdict::deny;
    Clearance combined;
    std::vector<NamedValue> components;   // p1/p2, or the four quad entries
    std::vector<NamedValue> weights_used; // resolved combiner weights
    double leakage = 0.5;
    std::vector<std::string> trace;       // derivation steps in evaluation order

    friend bool operator==(const Decision&, const Decision&) = default;
};

/// Throws DomainError / UnknownAccessTypeError for an invalid request and
/// UnknownSubjectError / UnknownObjectError when a mandatory policy has no
/// label for the subject or object.
Decision evaluate(const EngineConfig& cfg, const AccessRequest& req);

/// Same as evaluate but with the combiner parameters replaced.
Decision evaluate_with(const EngineConfig& cfg, const CombinerParams& params,
                       const AccessRequest& req);

/// The ClearanceQuad the four-policy modes feed into the combiner. Requires
/// an integrity block.
ClearanceQuad clearance_quad(const EngineConfig& cfg, const AccessRequest& req);

struct SweepRow {
    double parameter = 0.0;
    Clearance combined;
    Verdict verdict = Verdict::deny;
};

struct SweepResult {
    std::string parameter;
    std::vector<SweepRow> rows;
    /// Index of the first row whose verdict differs from row 0.
    std::optional<std::size_t> flip_index;
};

/// Re-evaluates `req` once per grid value with `parameter` substituted.
/// Throws UnknownParameterError if the parameter is not one of the active
/// mode's, DomainError for a non-positive grid value.
SweepResult sweep(const EngineConfig& cfg, const AccessRequest& req, std::string_view parameter,
                  const std::vector<double>& grid);

} // namespace polycomb
