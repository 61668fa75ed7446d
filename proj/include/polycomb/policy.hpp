#pragma once

/// \file
/// Per-policy clearance levels. A clearance is a real number in [-m, m];
/// positive values lean towards granting access.

#include <compare>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "polycomb/lattice.hpp"

namespace polycomb {

/// Granularity m of the clearance range [-m, m].
class ClearanceScale {
public:
    /// Throws DomainError unless m >= 1.
    explicit ClearanceScale(long long m);

    long long m() const noexcept { return m_; }
    bool contains(double value) const noexcept;

    friend bool operator==(const ClearanceScale&, const ClearanceScale&) = default;

private:
    long long m_;
};

struct Clearance {
    double value = 0.0;

    friend auto operator<=>(const Clearance&, const Clearance&) = default;
};

/// The ordered set of access types known to a configuration; M = size().
class AccessUniverse {
public:
    /// Throws ValidationError when empty or when a symbol repeats or is empty.
    explicit AccessUniverse(std::vector<std::string> symbols);

    std::size_t size() const noexcept { return symbols_.size(); }
    const std::vector<std::string>& symbols() const noexcept { return symbols_; }
    bool contains(std::string_view symbol) const;

private:
    std::vector<std::string> symbols_;
    std::set<std::string, std::less<>> lookup_;
};

using AccessSet = std::set<std::string>;

/// Discretionary state. A missing cell is an empty permission set.
class AccessMatrix {
public:
    void grant(const std::string& subject, const std::string& object, AccessSet types);
    const AccessSet& cell(const std::string& subject, const std::string& object) const;
    std::size_t cell_count() const noexcept { return cells_.size(); }
    const std::map<std::pair<std::string, std::string>, AccessSet>& cells() const noexcept {
        return cells_;
    }

private:
    std::map<std::pair<std::string, std::string>, AccessSet> cells_;
};

/// Subject confidence levels C(S) and object secrecy levels C(O).
struct LabelAssignment {
    std::map<std::string, std::string> subject_labels;
    std::map<std::string, std::string> object_labels;
};

struct AccessRequest {
    std::string subject;
    std::string object;
    AccessSet requested;

    friend bool operator==(const AccessRequest&, const AccessRequest&) = default;
};

/// Throws DomainError for an empty request and UnknownAccessTypeError for a
/// type outside the universe.
void validate_request(const AccessRequest& req, const AccessUniverse& universe);

/// Which way a comparable label pair counts. `inverted` flips the sign for
/// comparable pairs (integrity-style reading); incomparable pairs are
/// unaffected.
enum class Direction { standard, inverted };

enum class LabelRelation { equal, subject_above, subject_below, incomparable };

struct MandatoryBreakdown {
    LabelRelation relation = LabelRelation::equal;
    std::string sup;                  // least upper bound of the two labels
    std::size_t subject_distance = 0; // dif(cs, sup)
    std::size_t object_distance = 0;  // dif(co, sup)
    std::size_t level_count = 0;
    Clearance clearance;
};

MandatoryBreakdown mandatory_breakdown(const SecurityLattice& lattice, std::string_view subject_label,
                                       std::string_view object_label, const ClearanceScale& scale,
                                       Direction direction = Direction::standard);

Clearance mandatory_clearance(const SecurityLattice& lattice, std::string_view subject_label,
                              std::string_view object_label, const ClearanceScale& scale,
                              Direction direction = Direction::standard);

struct DiscretionaryBreakdown {
    std::size_t denied = 0;        // k: requested but not granted
    std::size_t extra_granted = 0; // h: granted but not requested (only when k == 0)
    std::size_t universe_size = 0; // M
    Clearance clearance;
};

DiscretionaryBreakdown discretionary_breakdown(const AccessRequest& req, const AccessMatrix& matrix,
                                               const AccessUniverse& universe,
                                               const ClearanceScale& scale);

Clearance discretionary_clearance(const AccessRequest& req, const AccessMatrix& matrix,
                                  const AccessUniverse& universe, const ClearanceScale& scale);

/// P(p) = 0.5 - p / 2m. Throws OutOfRangeError if |p| > m.
double leakage_probability(Clearance p, const ClearanceScale& scale);

std::string_view to_string(LabelRelation relation) noexcept;

} // namespace polycomb
