#include "polycomb/lattice.hpp"

#include <algorithm>
#include <deque>

#include "polycomb/errors.hpp"

namespace polycomb {

SecurityLattice SecurityLattice::build(const std::vector<std::string>& elements,
                                       const std::vector<OrderPair>& order_pairs) {
    if (elements.empty())
        throw ValidationError("lattice has no elements");

    SecurityLattice lat;
    lat.names_ = elements;
    for (std::size_t i = 0; i < elements.size(); ++i) {
        if (elements[i].empty())
            throw ValidationError("lattice label at position " + std::to_string(i) + " is empty");
        if (!lat.index_.emplace(elements[i], i).second)
            throw ValidationError("duplicate lattice label '" + elements[i] + "'");
    }

    const std::size_t n = lat.n();
    lat.closure_.assign(n * n, 0);
    for (std::size_t i = 0; i < n; ++i)
        lat.closure_[i * n + i] = 1;
    for (const auto& [lo, hi] : order_pairs)
        lat.closure_[lat.index_of(lo) * n + lat.index_of(hi)] = 1;
    lat.declared_pairs_ = order_pairs.size();

    // Warshall
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            if (lat.closure_[i * n + k])
                for (std::size_t j = 0; j < n; ++j)
                    if (lat.closure_[k * n + j])
                        lat.closure_[i * n + j] = 1;

    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (lat.closure_[i * n + j] && lat.closure_[j * n + i])
                throw CycleError(lat.names_[i], lat.names_[j]);

    // b covers a iff a < b with nothing strictly between.
    lat.cover_.assign(n * n, 0);
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            if (a == b || !lat.closure_[a * n + b])
                continue;
            bool between = false;
            for (std::size_t c = 0; c < n && !between; ++c)
                between = c != a && c != b && lat.closure_[a * n + c] && lat.closure_[c * n + b];
            lat.cover_[a * n + b] = between ? 0 : 1;
        }
    }

    // Least upper bound: the common upper bound lying below every other one.
    lat.sup_.assign(n * n, 0);
    std::vector<std::size_t> upper;
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a; b < n; ++b) {
            upper.clear();
            for (std::size_t u = 0; u < n; ++u)
                if (lat.closure_[a * n + u] && lat.closure_[b * n + u])
                    upper.push_back(u);
            if (upper.empty())
                throw NoSupError(lat.names_[a], lat.names_[b], "no common upper bound");
            auto least = std::find_if(upper.begin(), upper.end(), [&](std::size_t u) {
                return std::all_of(upper.begin(), upper.end(),
                                   [&](std::size_t v) { return lat.closure_[u * n + v] != 0; });
            });
            if (least == upper.end())
                throw NoSupError(lat.names_[a], lat.names_[b], "several minimal upper bounds");
            lat.sup_[a * n + b] = lat.sup_[b * n + a] = *least;
        }
    }

    // BFS upward along cover edges from every element.
    lat.distance_.assign(n * n, kUnreachable);
    std::deque<std::size_t> queue;
    for (std::size_t s = 0; s < n; ++s) {
        std::size_t* row = &lat.distance_[s * n];
        row[s] = 0;
        queue.assign(1, s);
        while (!queue.empty()) {
            const std::size_t v = queue.front();
            queue.pop_front();
            for (std::size_t w = 0; w < n; ++w) {
                if (lat.cover_[v * n + w] && row[w] == kUnreachable) {
                    row[w] = row[v] + 1;
                    queue.push_back(w);
                }
            }
        }
    }

    lat.chain_ = true;
    for (std::size_t i = 0; i < n && lat.chain_; ++i)
        for (std::size_t j = 0; j < n && lat.chain_; ++j)
            lat.chain_ = lat.closure_[i * n + j] || lat.closure_[j * n + i];

    return lat;
}

bool SecurityLattice::contains(std::string_view label) const {
    return index_.find(label) != index_.end();
}

std::size_t SecurityLattice::index_of(std::string_view label) const {
    auto it = index_.find(label);
    if (it == index_.end())
        throw UnknownLabelError(std::string(label));
    return it->second;
}

bool SecurityLattice::leq(std::string_view a, std::string_view b) const {
    return leq_index(index_of(a), index_of(b));
}

bool SecurityLattice::comparable(std::string_view a, std::string_view b) const {
    const auto ia = index_of(a);
    const auto ib = index_of(b);
    return leq_index(ia, ib) || leq_index(ib, ia);
}

const std::string& SecurityLattice::sup(std::string_view a, std::string_view b) const {
    return names_[sup_index(index_of(a), index_of(b))];
}

std::size_t SecurityLattice::dif(std::string_view lower, std::string_view upper) const {
    const auto lo = index_of(lower);
    const auto hi = index_of(upper);
    if (!leq_index(lo, hi))
        throw NotComparableError(std::string(lower), std::string(upper));
    return distance_[lo * n() + hi];
}

std::vector<OrderPair> SecurityLattice::cover_edges() const {
    std::vector<OrderPair> edges;
    for (std::size_t a = 0; a < n(); ++a)
        for (std::size_t b = 0; b < n(); ++b)
            if (cover_[a * n() + b])
                edges.emplace_back(names_[a], names_[b]);
    return edges;
}

LinearLattice::LinearLattice(SecurityLattice lattice) : lattice_(std::move(lattice)) {
    const std::size_t n = lattice_.level_count();
    rank_.assign(n, 0);
    // In a chain the rank of x is the number of elements strictly below it.
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y)
            if (y != x && lattice_.leq_index(y, x))
                ++rank_[x];
}

LinearLattice LinearLattice::chain(const std::vector<std::string>& bottom_to_top) {
    std::vector<OrderPair> pairs;
    for (std::size_t i = 1; i < bottom_to_top.size(); ++i)
        pairs.emplace_back(bottom_to_top[i - 1], bottom_to_top[i]);
    return LinearLattice(SecurityLattice::build(bottom_to_top, pairs));
}

LinearLattice LinearLattice::from(SecurityLattice lattice) {
    if (!lattice.is_chain())
        throw ValidationError("lattice is not a total order");
    return LinearLattice(std::move(lattice));
}

std::size_t LinearLattice::rank(std::string_view label) const {
    return rank_[lattice_.index_of(label)];
}

} // namespace polycomb
