#include "polycomb/engine.hpp"

#include "polycomb/errors.hpp"
#include "polycomb/serialize.hpp"

namespace polycomb {

namespace {

const std::string& label_of(const std::map<std::string, std::string>& labels, const std::string& id,
                            bool subject, std::string_view policy) {
    auto it = labels.find(id);
    if (it == labels.end()) {
        if (subject)
            throw UnknownSubjectError(id, std::string(policy));
        throw UnknownObjectError(id, std::string(policy));
    }
    return it->second;
}

std::string join(const AccessSet& set) {
    std::string out = "{";
    for (const auto& s : set) {
        if (out.size() > 1)
            out += ',';
        out += s;
    }
    return out + "}";
}

std::string signed_number(double v) {
    const auto s = format_number(v);
    return v < 0 ? "(" + s + ")" : s;
}

// Evaluates one policy block, appending its trace lines.
struct BlockResult {
    Clearance mandatory;
    Clearance discretionary;
};

BlockResult evaluate_block(const EngineConfig& cfg, const PolicyBlock& block,
                           std::string_view policy, std::string_view msp_name,
                           std::string_view dsp_name, const AccessRequest& req,
                           std::vector<std::string>& trace) {
    BlockResult out;
    const auto& cs = label_of(block.labels.subject_labels, req.subject, true, policy);
    const auto& co = label_of(block.labels.object_labels, req.object, false, policy);
    const auto msp = mandatory_breakdown(block.lattice, cs, co, block.mandatory_scale,
                                         block.direction);
    out.mandatory = msp.clearance;
    std::string line = std::string(policy) + " mandatory: C(s)=" + cs + ", C(o)=" + co + ", " +
                       std::string(to_string(msp.relation)) + ", sup=" + msp.sup +
                       ", dif(C(s),sup)=" + std::to_string(msp.subject_distance) +
                       ", dif(C(o),sup)=" + std::to_string(msp.object_distance) +
                       ", L=" + std::to_string(msp.level_count) +
                       ", m=" + std::to_string(block.mandatory_scale.m());
    if (block.direction == Direction::inverted)
        line += ", direction inverted";
    trace.push_back(line + " -> " + std::string(msp_name) + "=" + format_number(msp.clearance.value));

    auto ov = cfg.overrides.find({req.subject, req.object});
    if (ov != cfg.overrides.end()) {
        out.discretionary.value = ov->second;
        trace.push_back(std::string(policy) + " discretionary: override for " + req.subject + ":" +
                        req.object + " -> " + std::string(dsp_name) + "=" +
                        format_number(ov->second));
        return out;
    }
    const auto dsp = discretionary_breakdown(req, block.matrix, cfg.universe,
                                             block.discretionary_scale);
    out.discretionary = dsp.clearance;
    line = std::string(policy) + " discretionary: granted=" +
           join(block.matrix.cell(req.subject, req.object)) + ", ";
    if (dsp.denied > 0)
        line += "denied k=" + std::to_string(dsp.denied) + ", p=-k*m/M";
    else
        line += "extra granted h=" + std::to_string(dsp.extra_granted) + ", p=h*m/M";
    line += ", M=" + std::to_string(dsp.universe_size) +
            ", m=" + std::to_string(block.discretionary_scale.m());
    trace.push_back(line + " -> " + std::string(dsp_name) + "=" + format_number(dsp.clearance.value));
    return out;
}

void finish(const EngineConfig& cfg, Decision& d) {
    d.verdict = decide(d.combined);
    d.leakage = leakage_probability(d.combined, cfg.scale);
    d.trace.push_back("leakage: P(p)=0.5-p/(2m), m=" + std::to_string(cfg.scale.m()) + " -> " +
                      format_number(d.leakage));
    d.trace.push_back("verdict: " + std::string(to_string(d.verdict)) +
                      (d.verdict == Verdict::grant ? " (p > 0)" : " (p <= 0)"));
}

} // namespace

ClearanceQuad clearance_quad(const EngineConfig& cfg, const AccessRequest& req) {
    if (!cfg.integrity)
        throw ModeMismatchError("four-policy evaluation requires an integrity policy block");
    std::vector<std::string> scratch;
    const auto conf = evaluate_block(cfg, cfg.confidentiality, "confidentiality", "msp_conf",
                                     "dsp_conf", req, scratch);
    const auto integ = evaluate_block(cfg, *cfg.integrity, "integrity", "msp_int", "dsp_int", req,
                                      scratch);
    return {integ.discretionary, integ.mandatory, conf.discretionary, conf.mandatory};
}

Decision evaluate_with(const EngineConfig& cfg, const CombinerParams& params,
                       const AccessRequest& req) {
    validate_request(req, cfg.universe);
    Decision d;
    d.trace.push_back("request: subject=" + req.subject + ", object=" + req.object +
                      ", access=" + join(req.requested));

    if (const auto* w = std::get_if<WeightedConfig>(&params)) {
        const auto block = evaluate_block(cfg, cfg.confidentiality, "confidentiality", "p1", "p2",
                                          req, d.trace);
        const auto pw = pairwise_weights(w->r);
        d.combined = weighted_combine(block.mandatory, block.discretionary, *w);
        d.components = {{"p1", block.mandatory.value}, {"p2", block.discretionary.value}};
        d.weights_used = {{"p1", pw.high}, {"p2", pw.low}};
        d.trace.push_back("weights: r=" + format_number(w->r) + ", r/(r+1)=" +
                          format_number(pw.high) + ", 1/(r+1)=" + format_number(pw.low));
        d.trace.push_back("combined: p=" + format_number(pw.high) + "*" +
                          signed_number(block.mandatory.value) + "+" + format_number(pw.low) +
                          "*" + signed_number(block.discretionary.value) + " -> " +
                          format_number(d.combined.value));
        finish(cfg, d);
        return d;
    }

    if (!cfg.integrity)
        throw ModeMismatchError("four-policy evaluation requires an integrity policy block");
    const auto conf = evaluate_block(cfg, cfg.confidentiality, "confidentiality", "msp_conf",
                                     "dsp_conf", req, d.trace);
    const auto integ = evaluate_block(cfg, *cfg.integrity, "integrity", "msp_int", "dsp_int", req,
                                      d.trace);
    const ClearanceQuad quad{integ.discretionary, integ.mandatory, conf.discretionary,
                             conf.mandatory};
    d.components = {{"dsp_int", quad.dsp_int.value},
                    {"msp_int", quad.msp_int.value},
                    {"dsp_conf", quad.dsp_conf.value},
                    {"msp_conf", quad.msp_conf.value}};

    if (const auto* a = std::get_if<AhpConfigFig1>(&params)) {
        const auto model = pairwise_weights(a->r);
        const auto b = ahp_breakdown_fig1(quad, *a);
        d.combined = b.combined;
        d.weights_used = {{"dsp", model.low},
                          {"msp", model.high},
                          {"R_int", b.weight_first},
                          {"R_conf", b.weight_second}};
        d.trace.push_back("weights: r=" + format_number(a->r) + ", r1=" + format_number(a->r1) +
                          ", r2=" + format_number(a->r2) + "; dsp=1/(1+r)=" +
                          format_number(model.low) + ", msp=r/(1+r)=" + format_number(model.high) +
                          "; R_int=" + format_number(b.weight_first) +
                          ", R_conf=" + format_number(b.weight_second));
        d.trace.push_back("p_int=dsp*dsp_int+msp*msp_int -> " + format_number(b.first));
        d.trace.push_back("p_conf=dsp*dsp_conf+msp*msp_conf -> " + format_number(b.second));
        d.trace.push_back("combined: p=R_int*p_int+R_conf*p_conf -> " +
                          format_number(d.combined.value));
    } else {
        const auto& f = std::get<AhpConfigFig2>(params);
        const auto property = pairwise_weights(f.x);
        const auto b = ahp_breakdown_fig2(quad, f);
        d.combined = b.combined;
        d.weights_used = {{"int", property.low},
                          {"conf", property.high},
                          {"X_dsp", b.weight_first},
                          {"X_msp", b.weight_second}};
        d.trace.push_back("weights: x=" + format_number(f.x) + ", x1=" + format_number(f.x1) +
                          ", x2=" + format_number(f.x2) + "; int=1/(1+x)=" +
                          format_number(property.low) + ", conf=x/(1+x)=" +
                          format_number(property.high) + "; X_dsp=" +
                          format_number(b.weight_first) + ", X_msp=" +
                          format_number(b.weight_second));
        d.trace.push_back("f_dsp=int*dsp_int+conf*dsp_conf -> " + format_number(b.first));
        d.trace.push_back("f_msp=int*msp_int+conf*msp_conf -> " + format_number(b.second));
        d.trace.push_back("combined: f=X_dsp*f_dsp+X_msp*f_msp -> " +
                          format_number(d.combined.value));
    }
    finish(cfg, d);
    return d;
}

Decision evaluate(const EngineConfig& cfg, const AccessRequest& req) {
    return evaluate_with(cfg, cfg.params, req);
}

SweepResult sweep(const EngineConfig& cfg, const AccessRequest& req, std::string_view parameter,
                  const std::vector<double>& grid) {
    get_parameter(cfg.params, parameter); // rejects names foreign to the mode
    SweepResult out;
    out.parameter = std::string(parameter);
    for (double value : grid) {
        const auto params = with_parameter(cfg.params, parameter, value);
        const auto d = evaluate_with(cfg, params, req);
        out.rows.push_back({value, d.combined, d.verdict});
        if (!out.flip_index && d.verdict != out.rows.front().verdict)
            out.flip_index = out.rows.size() - 1;
    }
    return out;
}

} // namespace polycomb
