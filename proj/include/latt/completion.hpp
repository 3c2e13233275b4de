#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "latt/algebra.hpp"
#include "latt/iso.hpp"
#include "latt/map.hpp"
#include "latt/polarity.hpp"
#include "latt/rng.hpp"

namespace latt {

/// An embedding of a lattice into a complete (here: finite) lattice,
/// together with the derived open and closed element sets of the target.
/// Open elements are joins of image elements, closed elements are meets.
struct Completion {
    LatticePtr source, target;
    LatticeMap embed;
    Bitset open_set, closed_set;  // subsets of target

    std::size_t e(std::size_t a) const { return embed(a); }
};

namespace detail {

/// Closes `start` under the binary operation `op` (pairwise closure computes
/// all joins/meets of nonempty subsets; the empty join/meet is already in
/// the image as e(0)/e(1)).
template <class Op>
inline Bitset pairwise_closure(Bitset start, Op&& op) {
    std::vector<std::size_t> mem = start.members();
    for (std::size_t i = 0; i < mem.size(); ++i)
        for (std::size_t j = 0; j <= i; ++j) {
            std::size_t c = op(mem[i], mem[j]);
            if (!start.test(c)) {
                start.set(c);
                mem.push_back(c);
            }
        }
    return start;
}

}  // namespace detail

/// Open = all joins of image subsets, closed = all meets, computed by
/// iterated pairwise closure of the image (never a 2^n subset scan).
inline std::pair<Bitset, Bitset> open_closed(const LatticePtr& target, const LatticeMap& embed) {
    Bitset image(target->size());
    for (auto v : embed.table) image.set(v);
    const FiniteLattice& t = *target;
    Bitset open = detail::pairwise_closure(image, [&](std::size_t a, std::size_t b) { return t.join(a, b); });
    Bitset closed = detail::pairwise_closure(image, [&](std::size_t a, std::size_t b) { return t.meet(a, b); });
    return {open, closed};
}

/// Wraps an embedding as a Completion after verifying it really is an
/// injective bounded-lattice homomorphism.
inline Completion make_completion(LatticeMap embed) {
    auto flags = analyze_map(embed);
    if (!flags.embedding())
        throw Error(Errc::not_embedding, "map is not an injective bounded-lattice homomorphism");
    Completion c;
    c.source = embed.source;
    c.target = embed.target;
    auto oc = open_closed(c.target, embed);
    c.open_set = std::move(oc.first);
    c.closed_set = std::move(oc.second);
    c.embed = std::move(embed);
    return c;
}

struct DensityReport {
    bool dense = false;
    bool joins_of_closed_ok = false;  // every element is a join of closed elements
    bool meets_of_open_ok = false;    // every element is a meet of open elements
    std::optional<std::size_t> witness;  // a target element with no representation
};

/// Exhaustive density check: each target element must equal the join of the
/// closed elements below it and the meet of the open elements above it.
inline DensityReport is_dense(const Completion& c) {
    const FiniteLattice& t = *c.target;
    DensityReport r;
    r.joins_of_closed_ok = r.meets_of_open_ok = true;
    for (std::size_t x = 0; x < t.size(); ++x) {
        Bitset below = c.closed_set & t.down_set(x);
        if (t.big_join(below) != x) {
            r.joins_of_closed_ok = false;
            if (!r.witness) r.witness = x;
        }
        Bitset above = c.open_set & t.up_set(x);
        if (t.big_meet(above) != x) {
            r.meets_of_open_ok = false;
            if (!r.witness) r.witness = x;
        }
    }
    r.dense = r.joins_of_closed_ok && r.meets_of_open_ok;
    return r;
}

struct CompactnessReport {
    bool compact = false;
    bool exhaustive = true;     // all 2^|L| x 2^|L| subset pairs scanned
    std::uint64_t seed = 0;     // recorded when sampling was engaged
    std::uint64_t pairs_checked = 0;
    bool finite_form = true;    // S' = S, T' = T suffices (always, finitely)
    std::optional<std::pair<Bitset, Bitset>> witness;  // violating (S,T)
};

/// Compactness in the source-subset form: for S,T subsets of L with
/// meet e[S] <= join e[T] in the target, some finite S' <= S, T' <= T has
/// meet S' <= join T'. On finite lattices S and T are themselves finite, so
/// the check verifies the implication with S' = S and T' = T; the report
/// says so. Exhaustive while 2^|L| * 2^|L| pairs fit the budget, otherwise
/// sampled with a recorded seed (never silently).
inline CompactnessReport is_compact(const Completion& c, const Config& cfg = {}) {
    const FiniteLattice& L = *c.source;
    const FiniteLattice& t = *c.target;
    const std::size_t n = L.size();
    CompactnessReport r;
    r.compact = true;

    auto check_pair = [&](const Bitset& s, const Bitset& tt) {
        Bitset es(t.size()), et(t.size());
        s.for_each([&](std::size_t a) { es.set(c.e(a)); });
        tt.for_each([&](std::size_t a) { et.set(c.e(a)); });
        if (t.leq(t.big_meet(es), t.big_join(et))) {
            // finite witness with S' = S, T' = T
            if (!L.leq(L.big_meet(s), L.big_join(tt))) {
                r.compact = false;
                if (!r.witness) r.witness = {s, tt};
            }
        }
        ++r.pairs_checked;
    };

    if (n < 32 && (std::uint64_t{1} << (2 * n)) <= cfg.compact_pair_budget) {
        // dp tables over subset masks keep the scan linear per pair
        const std::uint64_t full = std::uint64_t{1} << n;
        std::vector<std::uint32_t> meetL(full), joinL(full), meetC(full), joinC(full);
        meetL[0] = static_cast<std::uint32_t>(L.top());
        joinL[0] = static_cast<std::uint32_t>(L.bottom());
        meetC[0] = static_cast<std::uint32_t>(t.top());
        joinC[0] = static_cast<std::uint32_t>(t.bottom());
        for (std::uint64_t m = 1; m < full; ++m) {
            std::size_t low = static_cast<std::size_t>(std::countr_zero(m));
            std::uint64_t rest = m & (m - 1);
            meetL[m] = static_cast<std::uint32_t>(L.meet(meetL[rest], low));
            joinL[m] = static_cast<std::uint32_t>(L.join(joinL[rest], low));
            meetC[m] = static_cast<std::uint32_t>(t.meet(meetC[rest], c.e(low)));
            joinC[m] = static_cast<std::uint32_t>(t.join(joinC[rest], c.e(low)));
        }
        for (std::uint64_t sm = 0; sm < full; ++sm)
            for (std::uint64_t tm = 0; tm < full; ++tm) {
                ++r.pairs_checked;
                if (t.leq(meetC[sm], joinC[tm]) && !L.leq(meetL[sm], joinL[tm])) {
                    r.compact = false;
                    if (!r.witness) {
                        Bitset s(n), tt(n);
                        for (std::size_t i = 0; i < n; ++i) {
                            if ((sm >> i) & 1) s.set(i);
                            if ((tm >> i) & 1) tt.set(i);
                        }
                        r.witness = {s, tt};
                    }
                }
            }
    } else {
        r.exhaustive = false;
        r.seed = cfg.seed;
        Rng rng(cfg.seed);
        for (std::uint64_t k = 0; k < cfg.compact_samples; ++k) {
            Bitset s(n), tt(n);
            for (std::size_t i = 0; i < n; ++i) {
                if (rng.chance(0.5)) s.set(i);
                if (rng.chance(0.5)) tt.set(i);
            }
            check_pair(s, tt);
        }
    }
    return r;
}

// ---------------------------------------------------------------------------
// MacNeille completion.

/// The stable-set lattice of the polarity (L, L, <=), with a |-> lambda{a}
/// (the principal down-set) as the embedding. The image is meet-dense and
/// join-dense in the target.
inline Completion macneille(LatticePtr L, const Config& cfg = {}) {
    Polarity p(L->names(), L->names());
    for (std::size_t a = 0; a < L->size(); ++a)
        for (std::size_t b = 0; b < L->size(); ++b)
            if (L->leq(a, b)) p.relate(a, b);
    auto ssl = stable_set_lattice(std::make_shared<Polarity>(std::move(p)), cfg);

    std::vector<std::uint32_t> tab(L->size());
    for (std::size_t a = 0; a < L->size(); ++a)
        tab[a] = static_cast<std::uint32_t>(ssl.index_of(L->down_set(a)));
    return make_completion(LatticeMap(L, ssl.lattice, std::move(tab)));
}

// ---------------------------------------------------------------------------
// Canonical extension.

/// The filter-ideal polarity of L: X = filters, Y = ideals, x R y iff the
/// filter meets the ideal.
inline PolarityPtr filter_ideal_polarity(const LatticePtr& L) {
    auto fs = filters(*L);
    auto is = ideals(*L);
    std::vector<std::string> xn, yn;
    for (const auto& f : fs) xn.push_back(set_to_string(f, L->names()));
    for (const auto& i : is) yn.push_back(set_to_string(i, L->names()));
    Polarity p(std::move(xn), std::move(yn));
    for (std::size_t x = 0; x < fs.size(); ++x)
        for (std::size_t y = 0; y < is.size(); ++y)
            if (fs[x].intersects(is[y])) p.relate(x, y);
    return std::make_shared<Polarity>(std::move(p));
}

/// Dense and compact completion of L, constructed as the stable-set lattice
/// of the filter-ideal polarity with e(a) = {filters containing a}. For
/// finite L the embedding is onto, so the target is an isomorphic copy.
inline Completion canonical_extension(LatticePtr L, const Config& cfg = {}) {
    auto fs = filters(*L);
    auto p = filter_ideal_polarity(L);
    auto ssl = stable_set_lattice(p, cfg);

    std::vector<std::uint32_t> tab(L->size());
    for (std::size_t a = 0; a < L->size(); ++a) {
        Bitset ea(fs.size());
        for (std::size_t x = 0; x < fs.size(); ++x)
            if (fs[x].test(a)) ea.set(x);
        tab[a] = static_cast<std::uint32_t>(ssl.index_of(ea));
    }
    return make_completion(LatticeMap(L, ssl.lattice, std::move(tab)));
}

// ---------------------------------------------------------------------------
// Map extension.

namespace detail {

inline void require_dense_compact(const Completion& c, const char* which) {
    if (!is_dense(c).dense)
        throw Error(Errc::invalid_argument, std::string(which) + " completion is not dense");
}

}  // namespace detail

/// Extension of an arbitrary map f : L -> M along dense+compact completions:
/// the image of x is the join over pairs (p,q) of closed p <= x <= q open of
/// the meet of { e_M(f a) : p <= e_L(a) <= q }, every bound evaluated in the
/// finite targets. The result agrees with f on embedded elements.
inline LatticeMap extend_map_general(const LatticeMap& f, const Completion& cL,
                                     const Completion& cM) {
    if (f.source.get() != cL.source.get() || f.target.get() != cM.source.get())
        throw Error(Errc::invalid_argument, "map endpoints do not match the completions");
    detail::require_dense_compact(cL, "source");
    detail::require_dense_compact(cM, "target");

    const FiniteLattice& TL = *cL.target;
    const FiniteLattice& TM = *cM.target;
    const std::size_t nL = f.source->size();

    // meet over {e_M(f a) : p <= e_L(a) <= q}, indexed by (p,q)
    auto inner_meet = [&](std::size_t p, std::size_t q) {
        std::size_t acc = TM.top();  // empty meet
        for (std::size_t a = 0; a < nL; ++a)
            if (TL.leq(p, cL.e(a)) && TL.leq(cL.e(a), q)) acc = TM.meet(acc, cM.e(f(a)));
        return acc;
    };

    std::vector<std::uint32_t> tab(TL.size());
    auto closed = cL.closed_set.members();
    auto open = cL.open_set.members();
    for (std::size_t x = 0; x < TL.size(); ++x) {
        std::size_t acc = TM.bottom();  // empty join
        for (auto p : closed) {
            if (!TL.leq(p, x)) continue;
            for (auto q : open) {
                if (!TL.leq(x, q)) continue;
                acc = TM.join(acc, inner_meet(p, q));
            }
        }
        tab[x] = static_cast<std::uint32_t>(acc);
    }
    return LatticeMap(cL.target, cM.target, std::move(tab));
}

/// The simpler extension for isotone f: join over closed p <= x of the meet
/// of { e_M(f a) : p <= e_L(a) }. Throws NotIsotone on non-isotone input.
inline LatticeMap extend_map_isotone(const LatticeMap& f, const Completion& cL,
                                     const Completion& cM) {
    if (f.source.get() != cL.source.get() || f.target.get() != cM.source.get())
        throw Error(Errc::invalid_argument, "map endpoints do not match the completions");
    if (!analyze_map(f).isotone) throw Error(Errc::not_isotone, "map is not isotone");
    detail::require_dense_compact(cL, "source");
    detail::require_dense_compact(cM, "target");

    const FiniteLattice& TL = *cL.target;
    const FiniteLattice& TM = *cM.target;
    const std::size_t nL = f.source->size();

    std::vector<std::uint32_t> tab(TL.size());
    auto closed = cL.closed_set.members();
    for (std::size_t x = 0; x < TL.size(); ++x) {
        std::size_t acc = TM.bottom();
        for (auto p : closed) {
            if (!TL.leq(p, x)) continue;
            std::size_t inner = TM.top();
            for (std::size_t a = 0; a < nL; ++a)
                if (TL.leq(p, cL.e(a))) inner = TM.meet(inner, cM.e(f(a)));
            acc = TM.join(acc, inner);
        }
        tab[x] = static_cast<std::uint32_t>(acc);
    }
    return LatticeMap(cL.target, cM.target, std::move(tab));
}

// ---------------------------------------------------------------------------
// Canonical extension of a lattice-based algebra.

/// The k-fold product completion (e x ... x e) : L^k -> T^k used to extend
/// k-ary operations; it is dense and compact when (e, T) is.
inline Completion power_completion(const Completion& c, std::size_t k, const Config& cfg = {}) {
    std::vector<LatticePtr> src(k, c.source), tgt(k, c.target);
    auto ps = direct_product(src, cfg);
    auto pt = direct_product(tgt, cfg);
    std::vector<std::uint32_t> tab(ps.lattice->size());
    for (std::size_t i = 0; i < tab.size(); ++i) {
        auto tup = ps.tuple(i);
        for (auto& v : tup) v = c.e(v);
        tab[i] = static_cast<std::uint32_t>(pt.index(tup));
    }
    return make_completion(LatticeMap(ps.lattice, pt.lattice, std::move(tab)));
}

/// Canonical extension of an algebra: the lattice part is extended as usual
/// and each k-ary operation is extended through the k-fold product
/// completion (the extension of L^k is the k-th power of the extension).
inline LatticeBasedAlgebra canonical_extension_algebra(const LatticeBasedAlgebra& A,
                                                       const Config& cfg = {}) {
    Completion c = canonical_extension(A.lattice, cfg);
    LatticeBasedAlgebra out;
    out.lattice = c.target;
    for (const auto& op : A.ops) {
        Operation ext;
        ext.name = op.name;
        ext.arity = op.arity;
        if (op.arity == 0) {
            ext.table = {static_cast<std::uint32_t>(c.e(op.table[0]))};
        } else {
            auto cK = power_completion(c, op.arity, cfg);
            LatticeMap f(cK.source, A.lattice, op.table);
            LatticeMap fext = extend_map_general(f, cK, c);
            ext.table = fext.table;
        }
        out.ops.push_back(std::move(ext));
    }
    return LatticeBasedAlgebra(out.lattice, std::move(out.ops));
}

// ---------------------------------------------------------------------------
// Lifting an embedding of L through its canonical extension.

struct LiftedEmbedding {
    LatticeMap eta;
    MapFlags flags;  // expected: injective complete lattice homomorphism
};

/// Given a lattice embedding epsilon : L -> C (C finite, hence complete) and
/// a canonical completion (e, T) of L, evaluates
///   eta x = join { meet { epsilon a : p <= e(a) } : closed p <= x }
/// over the target T. The returned flags verify, rather than assume, that
/// eta is a complete embedding.
inline LiftedEmbedding eta_embedding(const LatticeMap& epsilon, const Completion& cL) {
    if (epsilon.source.get() != cL.source.get())
        throw Error(Errc::invalid_argument, "epsilon source does not match the completion");
    if (!analyze_map(epsilon).embedding())
        throw Error(Errc::not_embedding, "epsilon is not a lattice embedding");
    detail::require_dense_compact(cL, "source");

    const FiniteLattice& TL = *cL.target;
    const FiniteLattice& C = *epsilon.target;
    const std::size_t nL = cL.source->size();

    std::vector<std::uint32_t> tab(TL.size());
    auto closed = cL.closed_set.members();
    for (std::size_t x = 0; x < TL.size(); ++x) {
        std::size_t acc = C.bottom();
        for (auto p : closed) {
            if (!TL.leq(p, x)) continue;
            std::size_t inner = C.top();
            for (std::size_t a = 0; a < nL; ++a)
                if (TL.leq(p, cL.e(a))) inner = C.meet(inner, epsilon(a));
            acc = C.join(acc, inner);
        }
        tab[x] = static_cast<std::uint32_t>(acc);
    }
    LiftedEmbedding out;
    out.eta = LatticeMap(cL.target, epsilon.target, std::move(tab));
    out.flags = analyze_map(out.eta);
    return out;
}

}  // namespace latt
