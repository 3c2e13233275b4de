#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "latt/bitset.hpp"
#include "latt/config.hpp"
#include "latt/error.hpp"

namespace latt {

class FiniteLattice;
using LatticePtr = std::shared_ptr<const FiniteLattice>;

/// A bounded lattice on carrier {0,...,n-1}. The order is stored twice as
/// bit-rows (down_set / up_set per element) and the meet/join tables are
/// derived once at construction, so all later queries are table lookups.
/// Instances are immutable; share them freely.
class FiniteLattice {
public:
    std::size_t size() const { return names_.size(); }
    const std::vector<std::string>& names() const { return names_; }
    const std::string& name(std::size_t a) const { return names_[a]; }

    bool leq(std::size_t a, std::size_t b) const { return up_[a].test(b); }
    bool lt(std::size_t a, std::size_t b) const { return a != b && leq(a, b); }

    std::size_t meet(std::size_t a, std::size_t b) const { return meet_[a * size() + b]; }
    std::size_t join(std::size_t a, std::size_t b) const { return join_[a * size() + b]; }

    std::size_t bottom() const { return bottom_; }
    std::size_t top() const { return top_; }

    /// {c : c <= a} and {c : a <= c} as bit-rows over the carrier.
    const Bitset& down_set(std::size_t a) const { return down_[a]; }
    const Bitset& up_set(std::size_t a) const { return up_[a]; }

    /// Meet of a subset; the empty meet is top.
    std::size_t big_meet(const Bitset& s) const {
        std::size_t acc = top_;
        s.for_each([&](std::size_t a) { acc = meet(acc, a); });
        return acc;
    }

    /// Join of a subset; the empty join is bottom.
    std::size_t big_join(const Bitset& s) const {
        std::size_t acc = bottom_;
        s.for_each([&](std::size_t a) { acc = join(acc, a); });
        return acc;
    }

    std::size_t index_of(const std::string& name) const {
        for (std::size_t i = 0; i < names_.size(); ++i)
            if (names_[i] == name) return i;
        throw Error(Errc::unknown_symbol, "no element named '" + name + "'");
    }

    /// b covers a: a < b with nothing strictly between.
    bool covers(std::size_t b, std::size_t a) const {
        if (!lt(a, b)) return false;
        Bitset between = up_[a] & down_[b];
        return between.count() == 2;  // exactly {a, b}
    }

    std::vector<std::pair<std::size_t, std::size_t>> cover_pairs() const {
        std::vector<std::pair<std::size_t, std::size_t>> cs;
        for (std::size_t a = 0; a < size(); ++a)
            for (std::size_t b = 0; b < size(); ++b)
                if (covers(b, a)) cs.emplace_back(a, b);
        return cs;
    }

    /// Length of the longest chain from bottom up to each element.
    std::vector<std::size_t> heights() const {
        std::size_t n = size();
        std::vector<std::size_t> order(n), h(n, 0);
        for (std::size_t i = 0; i < n; ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return down_[a].count() < down_[b].count();
        });
        for (std::size_t b : order)
            down_[b].for_each([&](std::size_t a) {
                if (a != b) h[b] = std::max(h[b], h[a] + 1);
            });
        return h;
    }

    friend LatticePtr validate_lattice(const std::vector<Bitset>&, std::vector<std::string>);

private:
    FiniteLattice() = default;

    std::vector<std::string> names_;
    std::vector<Bitset> down_, up_;
    std::vector<std::uint32_t> meet_, join_;
    std::size_t bottom_ = 0, top_ = 0;
};

/// Checks that `leq_rows` (row a = {b : a <= b}) is a partial order in which
/// every pair has a meet and a join, and derives the operation tables.
/// Throws NotAPartialOrder / NotALattice with a witness pair otherwise.
/// The derivation is deterministic: tables depend only on the relation.
inline LatticePtr validate_lattice(const std::vector<Bitset>& leq_rows,
                                   std::vector<std::string> names) {
    const std::size_t n = leq_rows.size();
    if (n == 0) throw Error(Errc::not_a_lattice, "empty carrier has no bounds");
    if (names.size() != n)
        throw Error(Errc::invalid_argument, "name count does not match carrier size");
    for (const auto& row : leq_rows)
        if (row.size() != n) throw Error(Errc::invalid_argument, "relation is not square");
    {
        std::set<std::string> seen;
        for (const auto& nm : names)
            if (!seen.insert(nm).second)
                throw Error(Errc::name_clash, "duplicate element name '" + nm + "'");
    }

    for (std::size_t a = 0; a < n; ++a)
        if (!leq_rows[a].test(a))
            throw Error(Errc::not_a_partial_order, "not reflexive at " + names[a], a, a);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            if (a != b && leq_rows[a].test(b) && leq_rows[b].test(a))
                throw Error(Errc::not_a_partial_order,
                            "antisymmetry fails on (" + names[a] + "," + names[b] + ")", a, b);
            if (leq_rows[a].test(b) && !leq_rows[b].is_subset_of(leq_rows[a]))
                throw Error(Errc::not_a_partial_order,
                            "transitivity fails through (" + names[a] + "," + names[b] + ")", a,
                            b);
        }

    auto lat = std::shared_ptr<FiniteLattice>(new FiniteLattice());
    lat->names_ = std::move(names);
    lat->up_ = leq_rows;
    lat->down_.assign(n, Bitset(n));
    for (std::size_t a = 0; a < n; ++a)
        leq_rows[a].for_each([&](std::size_t b) { lat->down_[b].set(a); });

    std::vector<std::size_t> down_count(n), up_count(n);
    for (std::size_t a = 0; a < n; ++a) {
        down_count[a] = lat->down_[a].count();
        up_count[a] = lat->up_[a].count();
    }

    lat->meet_.assign(n * n, 0);
    lat->join_.assign(n * n, 0);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a; b < n; ++b) {
            Bitset ub = lat->up_[a] & lat->up_[b];
            std::size_t j = Bitset::npos;
            std::size_t best = 0;
            ub.for_each([&](std::size_t c) {
                if (j == Bitset::npos || up_count[c] > best) j = c, best = up_count[c];
            });
            if (j == Bitset::npos || !(lat->up_[j] == ub))
                throw Error(Errc::not_a_lattice,
                            "(" + lat->names_[a] + "," + lat->names_[b] + ") has no join", a, b);
            Bitset lb = lat->down_[a] & lat->down_[b];
            std::size_t m = Bitset::npos;
            best = 0;
            lb.for_each([&](std::size_t c) {
                if (m == Bitset::npos || down_count[c] > best) m = c, best = down_count[c];
            });
            if (m == Bitset::npos || !(lat->down_[m] == lb))
                throw Error(Errc::not_a_lattice,
                            "(" + lat->names_[a] + "," + lat->names_[b] + ") has no meet", a, b);
            lat->meet_[a * n + b] = lat->meet_[b * n + a] = static_cast<std::uint32_t>(m);
            lat->join_[a * n + b] = lat->join_[b * n + a] = static_cast<std::uint32_t>(j);
        }

    std::size_t bot = 0, top = 0;
    for (std::size_t a = 1; a < n; ++a) {
        bot = lat->meet(bot, a);
        top = lat->join(top, a);
    }
    lat->bottom_ = bot;
    lat->top_ = top;
    return lat;
}

/// Builds a lattice from a cover list by taking the reflexive-transitive
/// closure, then validating.
inline LatticePtr lattice_from_covers(std::size_t n,
                                      const std::vector<std::pair<std::size_t, std::size_t>>& covers,
                                      std::vector<std::string> names) {
    std::vector<Bitset> up(n, Bitset(n));
    for (std::size_t a = 0; a < n; ++a) up[a].set(a);
    for (auto [a, b] : covers) {
        if (a >= n || b >= n) throw Error(Errc::invalid_argument, "cover index out of range");
        up[a].set(b);
    }
    // Warshall closure.
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t a = 0; a < n; ++a)
            if (up[a].test(k)) up[a] |= up[k];
    return validate_lattice(up, std::move(names));
}

// ---------------------------------------------------------------------------
// Stock lattices.

inline std::vector<std::string> default_names(std::size_t n, const std::string& prefix = "e") {
    std::vector<std::string> v;
    v.reserve(n);
    for (std::size_t i = 0; i < n; ++i) v.push_back(prefix + std::to_string(i));
    return v;
}

inline LatticePtr chain(std::size_t n) {
    std::vector<Bitset> up(n, Bitset(n));
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a; b < n; ++b) up[a].set(b);
    return validate_lattice(up, default_names(n, "c"));
}

/// 2^k Boolean lattice; element i is the subset with bit pattern i.
inline LatticePtr boolean_lattice(std::size_t k) {
    std::size_t n = std::size_t{1} << k;
    std::vector<Bitset> up(n, Bitset(n));
    std::vector<std::string> names;
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b)
            if ((a & b) == a) up[a].set(b);
        names.push_back("b" + std::to_string(a));
    }
    return validate_lattice(up, std::move(names));
}

/// The diamond: bottom, three incomparable atoms a,b,c, top.
inline LatticePtr m3() {
    return lattice_from_covers(
        5, {{0, 1}, {0, 2}, {0, 3}, {1, 4}, {2, 4}, {3, 4}}, {"0", "a", "b", "c", "1"});
}

/// The pentagon: 0 < a < c < 1 and 0 < b < 1 with b incomparable to a,c.
inline LatticePtr n5() {
    return lattice_from_covers(5, {{0, 1}, {1, 3}, {3, 4}, {0, 2}, {2, 4}},
                               {"0", "a", "b", "c", "1"});
}

// ---------------------------------------------------------------------------
// Filters and ideals.
//
// In a finite lattice every filter (nonempty, up-closed, meet-closed subset)
// is the principal up-set of the meet of its members, so enumeration reduces
// to the up-sets; dually for ideals. The improper filter (all of L, i.e. the
// up-set of bottom) is included. Results are in bit-vector order.

inline std::vector<Bitset> filters(const FiniteLattice& L) {
    std::vector<Bitset> out;
    out.reserve(L.size());
    for (std::size_t a = 0; a < L.size(); ++a) out.push_back(L.up_set(a));
    std::sort(out.begin(), out.end());
    return out;
}

inline std::vector<Bitset> ideals(const FiniteLattice& L) {
    std::vector<Bitset> out;
    out.reserve(L.size());
    for (std::size_t a = 0; a < L.size(); ++a) out.push_back(L.down_set(a));
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------------------
// Direct products.

/// Mixed-radix index of a tuple over factor sizes (first factor most
/// significant). Shared by direct products and operation tables.
inline std::size_t tuple_index(const std::vector<std::size_t>& sizes,
                               const std::vector<std::size_t>& tup) {
    std::size_t idx = 0;
    for (std::size_t j = 0; j < sizes.size(); ++j) idx = idx * sizes[j] + tup[j];
    return idx;
}

inline std::vector<std::size_t> tuple_of_index(const std::vector<std::size_t>& sizes,
                                               std::size_t idx) {
    std::vector<std::size_t> tup(sizes.size());
    for (std::size_t j = sizes.size(); j-- > 0;) {
        tup[j] = idx % sizes[j];
        idx /= sizes[j];
    }
    return tup;
}

struct ProductLattice;  // defined in map.hpp (needs LatticeMap)

}  // namespace latt
