#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "latt/lattice.hpp"
#include "latt/rng.hpp"

namespace latt {

/// A total function between lattice carriers, given by an image table.
struct LatticeMap {
    LatticePtr source, target;
    std::vector<std::uint32_t> table;

    std::size_t operator()(std::size_t a) const { return table[a]; }

    LatticeMap() = default;
    LatticeMap(LatticePtr src, LatticePtr tgt, std::vector<std::uint32_t> tab)
        : source(std::move(src)), target(std::move(tgt)), table(std::move(tab)) {
        if (table.size() != source->size())
            throw Error(Errc::invalid_argument, "map table length != source size");
        for (auto v : table)
            if (v >= target->size())
                throw Error(Errc::invalid_argument, "map table entry out of target range");
    }
};

inline LatticeMap identity_map(LatticePtr L) {
    std::vector<std::uint32_t> t(L->size());
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = static_cast<std::uint32_t>(i);
    return LatticeMap(L, L, std::move(t));
}

/// g after f.
inline LatticeMap compose(const LatticeMap& g, const LatticeMap& f) {
    if (g.source.get() != f.target.get())
        throw Error(Errc::invalid_argument, "compose: middle lattices differ");
    std::vector<std::uint32_t> t(f.table.size());
    for (std::size_t a = 0; a < t.size(); ++a) t[a] = g.table[f.table[a]];
    return LatticeMap(f.source, g.target, std::move(t));
}

struct MapFlags {
    bool isotone = false, antitone = false;
    bool hom = false;           // preserves meet, join, 0, 1
    bool complete_hom = false;  // preserves arbitrary meets and joins
    bool injective = false, surjective = false;
    // Whether the complete_hom verdict came from the exhaustive subset scan;
    // when sampled, the seed and sample count are recorded.
    bool complete_hom_exhaustive = true;
    std::uint64_t sample_seed = 0, samples = 0;

    bool embedding() const { return hom && injective; }
    bool isomorphism() const { return hom && injective && surjective; }
};

/// Exhaustively recomputes all structural flags of a map. The complete-hom
/// check scans all subsets of the source while 2^|source| is within
/// cfg.complete_hom_exhaustive_max, and falls back to seeded random subsets
/// above that (never silently: the flags say which happened).
inline MapFlags analyze_map(const LatticeMap& f, const Config& cfg = {}) {
    const FiniteLattice& L = *f.source;
    const FiniteLattice& M = *f.target;
    const std::size_t n = L.size();
    MapFlags r;

    r.isotone = r.antitone = true;
    for (std::size_t a = 0; a < n && (r.isotone || r.antitone); ++a)
        for (std::size_t b = 0; b < n; ++b)
            if (L.leq(a, b)) {
                if (!M.leq(f(a), f(b))) r.isotone = false;
                if (!M.leq(f(b), f(a))) r.antitone = false;
            }

    r.hom = f(L.bottom()) == M.bottom() && f(L.top()) == M.top();
    for (std::size_t a = 0; a < n && r.hom; ++a)
        for (std::size_t b = a; b < n && r.hom; ++b)
            r.hom = f(L.meet(a, b)) == M.meet(f(a), f(b)) &&
                    f(L.join(a, b)) == M.join(f(a), f(b));

    r.injective = true;
    {
        std::vector<char> seen(M.size(), 0);
        for (std::size_t a = 0; a < n; ++a) {
            if (seen[f(a)]) r.injective = false;
            seen[f(a)] = 1;
        }
        r.surjective = true;
        for (std::size_t b = 0; b < M.size(); ++b)
            if (!seen[b]) r.surjective = false;
    }

    auto subset_ok = [&](const Bitset& s) {
        Bitset img(M.size());
        s.for_each([&](std::size_t a) { img.set(f(a)); });
        return f(L.big_meet(s)) == M.big_meet(img) && f(L.big_join(s)) == M.big_join(img);
    };
    r.complete_hom = true;
    if (n <= cfg.complete_hom_exhaustive_max) {
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n) && r.complete_hom; ++mask) {
            Bitset s(n);
            for (std::size_t i = 0; i < n; ++i)
                if ((mask >> i) & 1) s.set(i);
            r.complete_hom = subset_ok(s);
        }
    } else {
        r.complete_hom_exhaustive = false;
        r.sample_seed = cfg.seed;
        r.samples = cfg.complete_hom_samples;
        Rng rng(cfg.seed);
        r.complete_hom = subset_ok(Bitset(n)) && subset_ok(Bitset::all(n));
        for (std::uint64_t k = 0; k < cfg.complete_hom_samples && r.complete_hom; ++k) {
            Bitset s(n);
            for (std::size_t i = 0; i < n; ++i)
                if (rng.chance(0.5)) s.set(i);
            r.complete_hom = subset_ok(s);
        }
    }
    return r;
}

// ---------------------------------------------------------------------------
// Direct products.

struct ProductLattice {
    LatticePtr lattice;
    std::vector<std::size_t> factor_sizes;
    std::vector<LatticeMap> projections;  // all surjective homomorphisms

    std::size_t index(const std::vector<std::size_t>& tup) const {
        return tuple_index(factor_sizes, tup);
    }
    std::vector<std::size_t> tuple(std::size_t idx) const {
        return tuple_of_index(factor_sizes, idx);
    }
};

/// Componentwise-ordered product of k >= 1 lattices. Tuple elements are
/// named "(a,b,...)" from the factor names.
inline ProductLattice direct_product(const std::vector<LatticePtr>& factors,
                                     const Config& cfg = {}) {
    if (factors.empty()) throw Error(Errc::invalid_argument, "product of zero factors");
    std::size_t n = 1;
    std::vector<std::size_t> sizes;
    for (const auto& f : factors) {
        sizes.push_back(f->size());
        if (f->size() == 0 || n > cfg.product_size_bound / f->size())
            throw Error(Errc::size_exceeded, "product carrier exceeds bound " +
                                                 std::to_string(cfg.product_size_bound));
        n *= f->size();
    }

    std::vector<std::string> names(n);
    std::vector<Bitset> up(n, Bitset(n));
    for (std::size_t i = 0; i < n; ++i) {
        auto ti = tuple_of_index(sizes, i);
        std::string nm = "(";
        for (std::size_t j = 0; j < ti.size(); ++j) {
            if (j) nm += ",";
            nm += factors[j]->name(ti[j]);
        }
        names[i] = nm + ")";
        for (std::size_t k = 0; k < n; ++k) {
            auto tk = tuple_of_index(sizes, k);
            bool le = true;
            for (std::size_t j = 0; j < ti.size() && le; ++j)
                le = factors[j]->leq(ti[j], tk[j]);
            if (le) up[i].set(k);
        }
    }

    ProductLattice out;
    out.factor_sizes = sizes;
    out.lattice = validate_lattice(up, std::move(names));
    for (std::size_t j = 0; j < factors.size(); ++j) {
        std::vector<std::uint32_t> tab(n);
        for (std::size_t i = 0; i < n; ++i)
            tab[i] = static_cast<std::uint32_t>(tuple_of_index(sizes, i)[j]);
        out.projections.emplace_back(out.lattice, factors[j], std::move(tab));
    }
    return out;
}

}  // namespace latt
