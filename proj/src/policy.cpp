#include "polycomb/policy.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>

#include "polycomb/errors.hpp"

namespace polycomb {

ClearanceScale::ClearanceScale(long long m) : m_(m) {
    if (m < 1)
        throw DomainError("clearance scale m must be a positive integer, got " + std::to_string(m));
}

bool ClearanceScale::contains(double value) const noexcept {
    const auto bound = static_cast<double>(m_);
    return value >= -bound && value <= bound;
}

AccessUniverse::AccessUniverse(std::vector<std::string> symbols) : symbols_(std::move(symbols)) {
    if (symbols_.empty())
        throw ValidationError("access type universe is empty");
    for (const auto& s : symbols_) {
        if (s.empty())
            throw ValidationError("access type symbol is empty");
        if (!lookup_.insert(s).second)
            throw ValidationError("duplicate access type '" + s + "'");
    }
}

bool AccessUniverse::contains(std::string_view symbol) const {
    return lookup_.find(symbol) != lookup_.end();
}

void AccessMatrix::grant(const std::string& subject, const std::string& object, AccessSet types) {
    auto& cell = cells_[{subject, object}];
    cell.merge(types);
}

const AccessSet& AccessMatrix::cell(const std::string& subject, const std::string& object) const {
    static const AccessSet empty;
    auto it = cells_.find({subject, object});
    return it == cells_.end() ? empty : it->second;
}

void validate_request(const AccessRequest& req, const AccessUniverse& universe) {
    if (req.requested.empty())
        throw DomainError("access request names no access types");
    for (const auto& t : req.requested)
        if (!universe.contains(t))
            throw UnknownAccessTypeError(t);
}

MandatoryBreakdown mandatory_breakdown(const SecurityLattice& lattice, std::string_view subject_label,
                                       std::string_view object_label, const ClearanceScale& scale,
                                       Direction direction) {
    MandatoryBreakdown out;
    out.level_count = lattice.level_count();
    out.sup = lattice.sup(subject_label, object_label);
    out.subject_distance = lattice.dif(subject_label, out.sup);
    out.object_distance = lattice.dif(object_label, out.sup);

    const bool cs_le_co = lattice.leq(subject_label, object_label);
    const bool co_le_cs = lattice.leq(object_label, subject_label);

    // Signed chain distance, in lattice steps, before scaling by m / L.
    long long steps = 0;
    if (cs_le_co && co_le_cs) {
        out.relation = LabelRelation::equal;
    } else if (co_le_cs) {
        out.relation = LabelRelation::subject_above;
        steps = static_cast<long long>(lattice.dif(object_label, subject_label));
    } else if (cs_le_co) {
        out.relation = LabelRelation::subject_below;
        steps = -static_cast<long long>(lattice.dif(subject_label, object_label));
    } else {
        out.relation = LabelRelation::incomparable;
        const auto a = static_cast<long long>(out.subject_distance);
        const auto b = static_cast<long long>(out.object_distance);
        steps = -std::llabs(a - b);
    }
    if (direction == Direction::inverted && out.relation != LabelRelation::incomparable)
        steps = -steps;

    out.clearance.value = static_cast<double>(steps * scale.m()) /
                          static_cast<double>(out.level_count);
    return out;
}

Clearance mandatory_clearance(const SecurityLattice& lattice, std::string_view subject_label,
                              std::string_view object_label, const ClearanceScale& scale,
                              Direction direction) {
    return mandatory_breakdown(lattice, subject_label, object_label, scale, direction).clearance;
}

DiscretionaryBreakdown discretionary_breakdown(const AccessRequest& req, const AccessMatrix& matrix,
                                               const AccessUniverse& universe,
                                               const ClearanceScale& scale) {
    validate_request(req, universe);
    const AccessSet& granted = matrix.cell(req.subject, req.object);

    AccessSet denied;
    std::set_difference(req.requested.begin(), req.requested.end(), granted.begin(), granted.end(),
                        std::inserter(denied, denied.end()));

    DiscretionaryBreakdown out;
    out.universe_size = universe.size();
    const auto M = static_cast<double>(universe.size());
    const auto m = static_cast<long long>(scale.m());
    if (!denied.empty()) {
        out.denied = denied.size();
        out.clearance.value = -static_cast<double>(static_cast<long long>(out.denied) * m) / M;
    } else {
        AccessSet extra;
        std::set_difference(granted.begin(), granted.end(), req.requested.begin(),
                            req.requested.end(), std::inserter(extra, extra.end()));
        out.extra_granted = extra.size();
        out.clearance.value = static_cast<double>(static_cast<long long>(out.extra_granted) * m) / M;
    }
    return out;
}

Clearance discretionary_clearance(const AccessRequest& req, const AccessMatrix& matrix,
                                  const AccessUniverse& universe, const ClearanceScale& scale) {
    return discretionary_breakdown(req, matrix, universe, scale).clearance;
}

double leakage_probability(Clearance p, const ClearanceScale& scale) {
    if (!std::isfinite(p.value) || !scale.contains(p.value))
        throw OutOfRangeError("clearance " + std::to_string(p.value) + " lies outside [-" +
                              std::to_string(scale.m()) + ", " + std::to_string(scale.m()) + "]");
    return 0.5 - p.value / (2.0 * static_cast<double>(scale.m()));
}

std::string_view to_string(LabelRelation relation) noexcept {
    switch (relation) {
    case LabelRelation::equal: return "equal";
    case LabelRelation::subject_above: return "subject dominates object";
    case LabelRelation::subject_below: return "object dominates subject";
    case LabelRelation::incomparable: return "incomparable";
    }
    return "?";
}

} // namespace polycomb
