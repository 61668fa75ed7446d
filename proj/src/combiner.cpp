#include "polycomb/combiner.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "polycomb/errors.hpp"

namespace polycomb {

namespace {

// Rounding must never push a convex combination outside its operands.
double clamp_between(double value, double a, double b) {
    return std::clamp(value, std::min(a, b), std::max(a, b));
}

// (low_value + ratio * high_value) / (1 + ratio). A single division keeps
// exact ties exact, e.g. r = 2 with (p1, p2) = (-1, 2) gives 0, not 1e-16.
double blend(double low_value, double high_value, double ratio) {
    pairwise_weights(ratio); // validates
    return clamp_between((low_value + ratio * high_value) / (1.0 + ratio), low_value, high_value);
}

} // namespace

PairWeights pairwise_weights(double ratio) {
    if (!(ratio > 0.0) || !std::isfinite(ratio))
        throw DomainError("ratio must be a finite positive number, got " + std::to_string(ratio));
    return {1.0 / (1.0 + ratio), ratio / (1.0 + ratio)};
}

Clearance weighted_combine(Clearance p1, Clearance p2, const WeightedConfig& cfg) {
    return {blend(p2.value, p1.value, cfg.r)};
}

IntConfWeights ahp_weights_fig1(const AhpConfigFig1& cfg) {
    const auto model = pairwise_weights(cfg.r); // low = DSP, high = MSP
    const auto dsp = pairwise_weights(cfg.r1);  // low = int, high = conf
    const auto msp = pairwise_weights(cfg.r2);
    IntConfWeights w;
    w.integrity = dsp.low * model.low + msp.low * model.high;
    w.confidentiality = dsp.high * model.low + msp.high * model.high;
    return w;
}

DspMspWeights ahp_weights_fig2(const AhpConfigFig2& cfg) {
    const auto property = pairwise_weights(cfg.x); // low = int, high = conf
    const auto integ = pairwise_weights(cfg.x1);   // low = DSP, high = MSP
    const auto conf = pairwise_weights(cfg.x2);
    DspMspWeights w;
    w.dsp = integ.low * property.low + conf.low * property.high;
    w.msp = integ.high * property.low + conf.high * property.high;
    return w;
}

AhpBreakdown ahp_breakdown_fig1(const ClearanceQuad& quad, const AhpConfigFig1& cfg) {
    const auto w = ahp_weights_fig1(cfg);
    AhpBreakdown out;
    out.first = blend(quad.dsp_int.value, quad.msp_int.value, cfg.r);
    out.second = blend(quad.dsp_conf.value, quad.msp_conf.value, cfg.r);
    out.weight_first = w.integrity;
    out.weight_second = w.confidentiality;
    out.combined.value = clamp_between(w.integrity * out.first + w.confidentiality * out.second,
                                       out.first, out.second);
    return out;
}

AhpBreakdown ahp_breakdown_fig2(const ClearanceQuad& quad, const AhpConfigFig2& cfg) {
    const auto w = ahp_weights_fig2(cfg);
    AhpBreakdown out;
    out.first = blend(quad.dsp_int.value, quad.dsp_conf.value, cfg.x);
    out.second = blend(quad.msp_int.value, quad.msp_conf.value, cfg.x);
    out.weight_first = w.dsp;
    out.weight_second = w.msp;
    out.combined.value = clamp_between(w.dsp * out.first + w.msp * out.second, out.first,
                                       out.second);
    return out;
}

Clearance ahp_combine_fig1(const ClearanceQuad& quad, const AhpConfigFig1& cfg) {
    return ahp_breakdown_fig1(quad, cfg).combined;
}

Clearance ahp_combine_fig2(const ClearanceQuad& quad, const AhpConfigFig2& cfg) {
    return ahp_breakdown_fig2(quad, cfg).combined;
}

Verdict decide(Clearance p) noexcept {
    return p.value > 0.0 ? Verdict::grant : Verdict::deny;
}

std::string_view to_string(Verdict v) noexcept {
    return v == Verdict::grant ? "grant" : "deny";
}

} // namespace polycomb
