#pragma once

/// \file
/// Fusion of per-policy clearances. Two policies combine by a weighted sum
/// driven by a dominance coefficient; four policies (discretionary and
/// mandatory, each for confidentiality and integrity) combine through a
/// two-level analytic hierarchy in one of two tree orientations.
///
/// Every pairwise comparison matrix here is the 2x2 reciprocal matrix
/// [[1, 1/ratio], [ratio, 1]], which is always perfectly consistent, so its
/// normalized first column is the exact priority vector.

#include <string_view>

#include "polycomb/policy.hpp"

namespace polycomb {

struct PairWeights {
    double low = 0.5;  // 1 / (1 + ratio)
    double high = 0.5; // ratio / (1 + ratio)
};

/// Throws DomainError unless ratio is finite and > 0.
PairWeights pairwise_weights(double ratio);

/// Dominance of policy 1 over policy 2.
struct WeightedConfig {
    double r = 1.0;
};

/// Tree rooted at the access-control model: MSP vs DSP first, then
/// confidentiality vs integrity inside each model.
struct AhpConfigFig1 {
    double r = 1.0;  // MSP over DSP
    double r1 = 1.0; // confidentiality over integrity, discretionary
    double r2 = 1.0; // confidentiality over integrity, mandatory
};

/// Tree rooted at the protected property: confidentiality vs integrity
/// first, then MSP vs DSP inside each.
struct AhpConfigFig2 {
    double x = 1.0;  // confidentiality over integrity
    double x1 = 1.0; // MSP over DSP, integrity
    double x2 = 1.0; // MSP over DSP, confidentiality
};

struct ClearanceQuad {
    Clearance dsp_int;
    Clearance msp_int;
    Clearance dsp_conf;
    Clearance msp_conf;
};

/// r/(r+1) * p1 + 1/(r+1) * p2
Clearance weighted_combine(Clearance p1, Clearance p2, const WeightedConfig& cfg);

struct IntConfWeights {
    double integrity = 0.5;       // R_int
    double confidentiality = 0.5; // R_conf
};

struct DspMspWeights {
    double dsp = 0.5; // X_DSP
    double msp = 0.5; // X_MSP
};

IntConfWeights ahp_weights_fig1(const AhpConfigFig1& cfg);
DspMspWeights ahp_weights_fig2(const AhpConfigFig2& cfg);

/// Intermediate values of a four-policy combination.
struct AhpBreakdown {
    double first = 0.0;  // p_int (fig1) or f_DSP (fig2)
    double second = 0.0; // p_conf (fig1) or f_MSP (fig2)
    double weight_first = 0.5;
    double weight_second = 0.5;
    Clearance combined;
};

AhpBreakdown ahp_breakdown_fig1(const ClearanceQuad& quad, const AhpConfigFig1& cfg);
AhpBreakdown ahp_breakdown_fig2(const ClearanceQuad& quad, const AhpConfigFig2& cfg);

Clearance ahp_combine_fig1(const ClearanceQuad& quad, const AhpConfigFig1& cfg);
Clearance ahp_combine_fig2(const ClearanceQuad& quad, const AhpConfigFig2& cfg);

enum class Verdict { deny, grant };

/// Grants only for a strictly positive clearance; zero denies.
Verdict decide(Clearance p) noexcept;

std::string_view to_string(Verdict v) noexcept;

} // namespace polycomb
