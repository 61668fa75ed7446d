#pragma once

/// \file
/// Finite security lattices: order queries, least upper bounds and chain
/// distances over the Hasse diagram. Everything is computed once at build
/// time; a built lattice is immutable and safe to share between threads.

#include <cstddef>
#include <string>
#include <string_view>
#include <functional>
#include <map>
#include <utility>
#include <vector>

namespace polycomb {

using OrderPair = std::pair<std::string, std::string>; // (lower, upper)

class SecurityLattice {
public:
    /// Labels must be non-empty and unique. Validates the declared order and materializes closure, covers,
    /// sup table and pairwise chain distances.
    /// Throws UnknownLabelError, CycleError or NoSupError.
    static SecurityLattice build(const std::vector<std::string>& elements,
                                 const std::vector<OrderPair>& order_pairs);

    std::size_t level_count() const noexcept { return names_.size(); }
    const std::vector<std::string>& elements() const noexcept { return names_; }
    std::size_t declared_pair_count() const noexcept { return declared_pairs_; }

    bool contains(std::string_view label) const;

    bool leq(std::string_view a, std::string_view b) const;
    bool comparable(std::string_view a, std::string_view b) const;
    const std::string& sup(std::string_view a, std::string_view b) const;

    /// Edge count of the shortest upward chain along cover edges.
    /// Throws NotComparableError unless lower <= upper.
    std::size_t dif(std::string_view lower, std::string_view upper) const;

    /// Hasse-diagram edges as (lower, upper) names, sorted by index.
    std::vector<OrderPair> cover_edges() const;

    /// True when every pair of elements is comparable.
    bool is_chain() const noexcept { return chain_; }

    // Index-level access, mainly for exhaustive checks.
    std::size_t index_of(std::string_view label) const;
    bool leq_index(std::size_t a, std::size_t b) const noexcept { return closure_[a * n() + b] != 0; }
    std::size_t sup_index(std::size_t a, std::size_t b) const noexcept { return sup_[a * n() + b]; }

private:
    SecurityLattice() = default;
    std::size_t n() const noexcept { return names_.size(); }

    static constexpr std::size_t kUnreachable = static_cast<std::size_t>(-1);

    std::vector<std::string> names_;
    std::map<std::string, std::size_t, std::less<>> index_;
    std::vector<char> closure_;         // n*n, closure_[a*n+b] iff a <= b
    std::vector<char> cover_;           // n*n, cover_[a*n+b] iff b covers a
    std::vector<std::size_t> sup_;      // n*n
    std::vector<std::size_t> distance_; // n*n, kUnreachable unless a <= b
    std::size_t declared_pairs_ = 0;
    bool chain_ = false;
};

/// A lattice whose order is total. rank(bottom) == 0.
class LinearLattice {
public:
    /// Chain from bottom to top.
    static LinearLattice chain(const std::vector<std::string>& bottom_to_top);
    /// Throws ValidationError if the lattice is not a total order.
    static LinearLattice from(SecurityLattice lattice);

    const SecurityLattice& lattice() const noexcept { return lattice_; }
    std::size_t level_count() const noexcept { return lattice_.level_count(); }
    std::size_t rank(std::string_view label) const;

private:
    explicit LinearLattice(SecurityLattice lattice);

    SecurityLattice lattice_;
    std::vector<std::size_t> rank_;
};

} // namespace polycomb
