#pragma once

#include <deque>
#include <memory>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "latt/lattice.hpp"

namespace latt {

/// Two finite carriers X, Y and a relation R <= X x Y, stored as bit-rows in
/// both directions. Either carrier may be empty; the Galois maps degrade
/// gracefully (rho of the empty set is all of Y, lambda of the empty set is
/// all of X).
class Polarity {
public:
    Polarity(std::vector<std::string> xnames, std::vector<std::string> ynames)
        : xnames_(std::move(xnames)),
          ynames_(std::move(ynames)),
          by_x_(xnames_.size(), Bitset(ynames_.size())),
          by_y_(ynames_.size(), Bitset(xnames_.size())) {}

    static Polarity from_pairs(std::vector<std::string> xnames, std::vector<std::string> ynames,
                               const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
        Polarity p(std::move(xnames), std::move(ynames));
        for (auto [x, y] : pairs) p.relate(x, y);
        return p;
    }

    std::size_t nx() const { return xnames_.size(); }
    std::size_t ny() const { return ynames_.size(); }
    const std::vector<std::string>& xnames() const { return xnames_; }
    const std::vector<std::string>& ynames() const { return ynames_; }

    void relate(std::size_t x, std::size_t y) {
        by_x_[x].set(y);
        by_y_[y].set(x);
    }

    bool rel(std::size_t x, std::size_t y) const { return by_x_[x].test(y); }

    /// {y : x R y} and {x : x R y}.
    const Bitset& row_of_x(std::size_t x) const { return by_x_[x]; }
    const Bitset& row_of_y(std::size_t y) const { return by_y_[y]; }

private:
    std::vector<std::string> xnames_, ynames_;
    std::vector<Bitset> by_x_, by_y_;
};

using PolarityPtr = std::shared_ptr<const Polarity>;

/// rho A = {y : forall x in A, x R y}. rho of the empty set is Y.
inline Bitset rho(const Polarity& p, const Bitset& a) {
    Bitset out = Bitset::all(p.ny());
    a.for_each([&](std::size_t x) { out &= p.row_of_x(x); });
    return out;
}

/// lambda B = {x : forall y in B, x R y}. lambda of the empty set is X.
inline Bitset lambda(const Polarity& p, const Bitset& b) {
    Bitset out = Bitset::all(p.nx());
    b.for_each([&](std::size_t y) { out &= p.row_of_y(y); });
    return out;
}

/// The Galois closure lambda(rho(A)): increasing, monotone, idempotent.
inline Bitset closure(const Polarity& p, const Bitset& a) { return lambda(p, rho(p, a)); }

inline bool is_stable(const Polarity& p, const Bitset& a) { return closure(p, a) == a; }

/// The lattice of all stable subsets of X under inclusion. Meets are
/// intersections; the join of a family is the closure of its union.
struct StableSetLattice {
    PolarityPtr base;
    std::vector<Bitset> extents;  // bit-vector order
    LatticePtr lattice;
    std::unordered_map<Bitset, std::size_t, BitsetHash> index;

    std::size_t index_of(const Bitset& a) const {
        auto it = index.find(a);
        if (it == index.end())
            throw Error(Errc::not_stable,
                        "subset " + set_to_string(a, base->xnames()) + " is not an extent");
        return it->second;
    }

    bool contains(const Bitset& a) const { return index.contains(a); }
};

/// Enumerates the stable sets as the intersection closure of the attribute
/// extents lambda{y} together with X itself, via a worklist; this never
/// touches the 2^|Y| subsets of Y. The extent list is sorted in bit-vector
/// order and the lattice is built (and fully validated) from inclusion.
inline StableSetLattice stable_set_lattice(PolarityPtr p, const Config& cfg = {}) {
    std::unordered_map<Bitset, std::size_t, BitsetHash> seen;
    std::vector<Bitset> found;
    std::deque<std::size_t> work;

    auto add = [&](const Bitset& s) {
        if (seen.emplace(s, found.size()).second) {
            if (found.size() >= cfg.extent_bound)
                throw Error(Errc::size_exceeded,
                            "extent count exceeds bound " + std::to_string(cfg.extent_bound));
            found.push_back(s);
            work.push_back(found.size() - 1);
        }
    };

    add(Bitset::all(p->nx()));
    for (std::size_t y = 0; y < p->ny(); ++y) add(p->row_of_y(y));
    while (!work.empty()) {
        std::size_t i = work.front();
        work.pop_front();
        for (std::size_t j = 0; j < found.size(); ++j) {
            Bitset meet = found[i] & found[j];
            add(meet);
        }
    }

    StableSetLattice out;
    out.base = std::move(p);
    out.extents = std::move(found);
    std::sort(out.extents.begin(), out.extents.end());
    for (std::size_t i = 0; i < out.extents.size(); ++i) out.index.emplace(out.extents[i], i);

    const std::size_t n = out.extents.size();
    std::vector<Bitset> up(n, Bitset(n));
    std::vector<std::string> names(n);
    for (std::size_t i = 0; i < n; ++i) {
        names[i] = set_to_string(out.extents[i], out.base->xnames());
        for (std::size_t k = 0; k < n; ++k)
            if (out.extents[i].is_subset_of(out.extents[k])) up[i].set(k);
    }
    out.lattice = validate_lattice(up, std::move(names));
    return out;
}

/// The two canonical presentations of a stable set A: as the intersection of
/// the attribute extents lambda{y} over y in rho A, and as the join (in the
/// stable set lattice) of the point closures lambda rho {x} over x in A.
struct Decomposition {
    std::vector<std::size_t> attr;               // the y indices
    std::vector<Bitset> attribute_extents;       // lambda{y} per y in rho A
    std::vector<std::size_t> points;             // the x indices
    std::vector<Bitset> point_closures;          // lambda rho {x} per x in A
    bool meet_identity_holds = false, join_identity_holds = false;
};

inline Decomposition meetjoin_decompose(const Polarity& p, const Bitset& a) {
    if (!is_stable(p, a))
        throw Error(Errc::not_stable, "subset " + set_to_string(a, p.xnames()) + " is not stable");
    Decomposition d;
    Bitset ra = rho(p, a);
    Bitset meet_acc = Bitset::all(p.nx());  // empty intersection convention: X
    ra.for_each([&](std::size_t y) {
        d.attr.push_back(y);
        d.attribute_extents.push_back(p.row_of_y(y));
        meet_acc &= p.row_of_y(y);
    });
    Bitset uni(p.nx());
    a.for_each([&](std::size_t x) {
        d.points.push_back(x);
        Bitset c = closure(p, Bitset::single(p.nx(), x));
        d.point_closures.push_back(c);
        uni |= c;
    });
    d.meet_identity_holds = meet_acc == a;
    d.join_identity_holds = closure(p, uni) == a;  // join in P+ = closure of union
    return d;
}

// ---------------------------------------------------------------------------
// Stock polarities.

inline PolarityPtr identity_polarity(std::size_t n) {
    Polarity p(default_names(n, "x"), default_names(n, "y"));
    for (std::size_t i = 0; i < n; ++i) p.relate(i, i);
    return std::make_shared<Polarity>(std::move(p));
}

inline PolarityPtr full_polarity(std::size_t nx, std::size_t ny) {
    Polarity p(default_names(nx, "x"), default_names(ny, "y"));
    for (std::size_t x = 0; x < nx; ++x)
        for (std::size_t y = 0; y < ny; ++y) p.relate(x, y);
    return std::make_shared<Polarity>(std::move(p));
}

inline PolarityPtr empty_polarity(std::size_t nx, std::size_t ny) {
    return std::make_shared<Polarity>(Polarity(default_names(nx, "x"), default_names(ny, "y")));
}

/// (carrier, carrier, <=) for a chain of length n.
inline PolarityPtr leq_polarity(std::size_t n) {
    Polarity p(default_names(n, "x"), default_names(n, "y"));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) p.relate(i, j);
    return std::make_shared<Polarity>(std::move(p));
}

}  // namespace latt
