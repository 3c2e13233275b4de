#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include "latt/map.hpp"

namespace latt {

namespace detail {

inline std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
    h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return h;
}

struct StructureInfo {
    std::vector<std::size_t> height, depth, down_count, up_count;
    std::vector<std::vector<std::size_t>> covers_up, covers_down;
    std::vector<std::uint64_t> sig;  // refined isomorphism-invariant label
};

inline StructureInfo structure_info(const FiniteLattice& L) {
    const std::size_t n = L.size();
    StructureInfo s;
    s.height = L.heights();
    s.down_count.resize(n);
    s.up_count.resize(n);
    s.covers_up.resize(n);
    s.covers_down.resize(n);
    for (std::size_t a = 0; a < n; ++a) {
        s.down_count[a] = L.down_set(a).count();
        s.up_count[a] = L.up_set(a).count();
    }
    for (auto [a, b] : L.cover_pairs()) {
        s.covers_up[a].push_back(b);
        s.covers_down[b].push_back(a);
    }
    // depth = height in the dual order
    {
        std::vector<std::size_t> order(n);
        for (std::size_t i = 0; i < n; ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return s.up_count[a] < s.up_count[b]; });
        s.depth.assign(n, 0);
        for (std::size_t a : order)
            L.up_set(a).for_each([&](std::size_t b) {
                if (b != a) s.depth[a] = std::max(s.depth[a], s.depth[b] + 1);
            });
    }
    s.sig.resize(n);
    for (std::size_t a = 0; a < n; ++a) {
        std::uint64_t h = 0x51ed270b;
        h = mix(h, s.height[a]);
        h = mix(h, s.depth[a]);
        h = mix(h, s.down_count[a]);
        h = mix(h, s.up_count[a]);
        h = mix(h, s.covers_up[a].size());
        h = mix(h, s.covers_down[a].size());
        s.sig[a] = h;
    }
    // Neighbourhood refinement over the cover graph.
    std::size_t rounds = std::min<std::size_t>(n, 8);
    for (std::size_t r = 0; r < rounds; ++r) {
        std::vector<std::uint64_t> next(n);
        for (std::size_t a = 0; a < n; ++a) {
            std::uint64_t h = s.sig[a];
            std::vector<std::uint64_t> nb;
            for (auto b : s.covers_up[a]) nb.push_back(s.sig[b]);
            std::sort(nb.begin(), nb.end());
            for (auto v : nb) h = mix(h, v);
            nb.clear();
            for (auto b : s.covers_down[a]) nb.push_back(s.sig[b]);
            std::sort(nb.begin(), nb.end());
            for (auto v : nb) h = mix(h, ~v);
            next[a] = h;
        }
        s.sig = std::move(next);
    }
    return s;
}

}  // namespace detail

struct IsoResult {
    enum class Status { found, absent, timeout };
    Status status = Status::absent;
    std::optional<LatticeMap> map;
    std::uint64_t nodes = 0;

    bool found() const { return status == Status::found; }
    bool timed_out() const { return status == Status::timeout; }
};

namespace detail {

/// Shared backtracking core for isomorphism and embedding search.
/// Deterministic: source elements in index order, candidates in index order,
/// so the identity map is found first whenever it qualifies.
class MorphismSearch {
public:
    MorphismSearch(LatticePtr L, LatticePtr M, bool bijective, std::uint64_t budget)
        : L_(std::move(L)), M_(std::move(M)), bijective_(bijective), budget_(budget) {}

    IsoResult run(const std::vector<std::pair<std::size_t, std::size_t>>& forced) {
        const std::size_t n = L_->size(), m = M_->size();
        IsoResult res;
        if (bijective_ && n != m) return res;

        infoL_ = structure_info(*L_);
        infoM_ = structure_info(*M_);
        if (bijective_) {
            auto a = infoL_.sig, b = infoM_.sig;
            std::sort(a.begin(), a.end());
            std::sort(b.begin(), b.end());
            if (a != b) return res;  // invariant multisets differ: sound Absent
        }

        img_.assign(n, Bitset::npos);
        used_.assign(m, 0);
        for (auto [a, b] : forced) {
            if (a >= n || b >= m) throw Error(Errc::invalid_argument, "forced pair out of range");
            if (img_[a] != Bitset::npos && img_[a] != b) return res;
            if (img_[a] == b) continue;
            if (!admissible(a, b) || !consistent(a, b)) return res;
            img_[a] = b;
            used_[b]++;
        }

        nodes_ = 0;
        bool ok = extend(0);
        res.nodes = nodes_;
        if (timeout_) {
            res.status = IsoResult::Status::timeout;
            return res;
        }
        if (!ok) return res;

        std::vector<std::uint32_t> tab(n);
        for (std::size_t a = 0; a < n; ++a) tab[a] = static_cast<std::uint32_t>(img_[a]);
        res.status = IsoResult::Status::found;
        res.map = LatticeMap(L_, M_, std::move(tab));
        return res;
    }

private:
    bool admissible(std::size_t a, std::size_t b) const {
        if (bijective_) return infoL_.sig[a] == infoM_.sig[b];
        // Embeddings stretch the order upward: every chain below/above a
        // survives below/above its image.
        return infoM_.height[b] >= infoL_.height[a] && infoM_.depth[b] >= infoL_.depth[a] &&
               infoM_.down_count[b] >= infoL_.down_count[a] &&
               infoM_.up_count[b] >= infoL_.up_count[a];
    }

    bool consistent(std::size_t a, std::size_t b) const {
        // bounds are preserved, and (being injective) nothing else may hit them
        if ((a == L_->bottom()) != (b == M_->bottom())) return false;
        if ((a == L_->top()) != (b == M_->top())) return false;
        for (std::size_t a2 = 0; a2 < img_.size(); ++a2) {
            std::size_t b2 = img_[a2];
            if (b2 == Bitset::npos || a2 == a) continue;
            // order-embedding in both directions (injective homs reflect order)
            if (L_->leq(a, a2) != M_->leq(b, b2)) return false;
            if (L_->leq(a2, a) != M_->leq(b2, b)) return false;
            std::size_t mL = L_->meet(a, a2), jL = L_->join(a, a2);
            if (img_[mL] != Bitset::npos && img_[mL] != M_->meet(b, b2)) return false;
            if (img_[jL] != Bitset::npos && img_[jL] != M_->join(b, b2)) return false;
        }
        // assigned pairs whose meet or join IS the new element pin its image
        for (std::size_t a1 = 0; a1 < img_.size(); ++a1) {
            if (img_[a1] == Bitset::npos) continue;
            for (std::size_t a2 = a1; a2 < img_.size(); ++a2) {
                if (img_[a2] == Bitset::npos) continue;
                if (L_->meet(a1, a2) == a && M_->meet(img_[a1], img_[a2]) != b) return false;
                if (L_->join(a1, a2) == a && M_->join(img_[a1], img_[a2]) != b) return false;
            }
        }
        return true;
    }

    // complete candidate maps are homomorphisms by the incremental
    // constraints; this is the final guard over all pairs
    bool full_verify() const {
        for (std::size_t a = 0; a < img_.size(); ++a)
            for (std::size_t b = a; b < img_.size(); ++b) {
                if (img_[L_->meet(a, b)] != M_->meet(img_[a], img_[b])) return false;
                if (img_[L_->join(a, b)] != M_->join(img_[a], img_[b])) return false;
            }
        return img_[L_->bottom()] == M_->bottom() && img_[L_->top()] == M_->top();
    }

    bool extend(std::size_t a) {
        while (a < img_.size() && img_[a] != Bitset::npos) ++a;
        if (a == img_.size()) return full_verify();
        for (std::size_t b = 0; b < used_.size(); ++b) {
            if (used_[b]) continue;
            if (++nodes_ > budget_) {
                timeout_ = true;
                return false;
            }
            if (!admissible(a, b) || !consistent(a, b)) continue;
            img_[a] = b;
            used_[b] = 1;
            if (extend(a + 1)) return true;
            if (timeout_) return false;
            img_[a] = Bitset::npos;
            used_[b] = 0;
        }
        return false;
    }

    LatticePtr L_, M_;
    bool bijective_;
    std::uint64_t budget_, nodes_ = 0;
    bool timeout_ = false;
    StructureInfo infoL_, infoM_;
    std::vector<std::size_t> img_;
    std::vector<char> used_;
};

}  // namespace detail

/// Searches for a bounded-lattice isomorphism L -> M. Returns Absent only
/// after an exhaustive (pruned) search; a blown node budget is reported as
/// Timeout, never as Absent.
inline IsoResult find_isomorphism(LatticePtr L, LatticePtr M, const Config& cfg = {}) {
    return detail::MorphismSearch(std::move(L), std::move(M), true, cfg.iso_node_budget).run({});
}

/// Isomorphism search with prescribed image pairs (e.g. "commutes with the
/// embeddings": force iso(e1(a)) = e2(a) for all a).
inline IsoResult find_isomorphism_fixing(LatticePtr L, LatticePtr M,
                                         const std::vector<std::pair<std::size_t, std::size_t>>& forced,
                                         const Config& cfg = {}) {
    return detail::MorphismSearch(std::move(L), std::move(M), true, cfg.iso_node_budget)
        .run(forced);
}

/// Searches for an injective bounded-lattice homomorphism L -> M.
inline IsoResult find_embedding(LatticePtr L, LatticePtr M, const Config& cfg = {}) {
    return detail::MorphismSearch(std::move(L), std::move(M), false, cfg.iso_node_budget).run({});
}

/// Enumerates bounded-lattice homomorphisms L -> M in deterministic order,
/// up to `cap` of them. With a nonzero `shuffle_seed` the candidate order is
/// permuted per element, which turns the enumerator into a reproducible
/// sampler of the hom set.
inline std::vector<LatticeMap> enumerate_homs(LatticePtr L, LatticePtr M, std::size_t cap,
                                              std::uint64_t shuffle_seed = 0) {
    const std::size_t n = L->size(), m = M->size();
    std::vector<LatticeMap> out;
    if (cap == 0) return out;

    std::vector<std::vector<std::uint32_t>> cand(n);
    {
        Rng rng(shuffle_seed ? shuffle_seed : 1);
        for (std::size_t a = 0; a < n; ++a) {
            cand[a].resize(m);
            for (std::size_t b = 0; b < m; ++b) cand[a][b] = static_cast<std::uint32_t>(b);
            if (shuffle_seed)
                for (std::size_t i = m; i > 1; --i)
                    std::swap(cand[a][i - 1], cand[a][rng.below(i)]);
        }
    }

    std::vector<std::size_t> img(n, Bitset::npos);
    img[L->bottom()] = M->bottom();
    img[L->top()] = M->top();
    if (L->bottom() == L->top() && M->bottom() != M->top()) return out;

    auto consistent = [&](std::size_t a, std::size_t b) {
        for (std::size_t a2 = 0; a2 < n; ++a2) {
            std::size_t b2 = img[a2];
            if (b2 == Bitset::npos || a2 == a) continue;
            if (L->leq(a, a2) && !M->leq(b, b2)) return false;
            if (L->leq(a2, a) && !M->leq(b2, b)) return false;
            std::size_t mL = L->meet(a, a2), jL = L->join(a, a2);
            if (mL != a && img[mL] != Bitset::npos && img[mL] != M->meet(b, b2)) return false;
            if (jL != a && img[jL] != Bitset::npos && img[jL] != M->join(b, b2)) return false;
        }
        return true;
    };

    auto full_check = [&]() {
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = a; b < n; ++b) {
                if (img[L->meet(a, b)] != M->meet(img[a], img[b])) return false;
                if (img[L->join(a, b)] != M->join(img[a], img[b])) return false;
            }
        return true;
    };

    auto emit = [&]() {
        std::vector<std::uint32_t> tab(n);
        for (std::size_t a = 0; a < n; ++a) tab[a] = static_cast<std::uint32_t>(img[a]);
        out.emplace_back(L, M, std::move(tab));
    };

    // plain recursive enumeration; leaves are fully verified
    auto rec = [&](auto&& self, std::size_t a) -> bool {
        while (a < n && img[a] != Bitset::npos) ++a;
        if (a == n) {
            if (full_check()) emit();
            return out.size() >= cap;
        }
        for (auto b : cand[a]) {
            if (!consistent(a, b)) continue;
            img[a] = b;
            if (self(self, a + 1)) return true;
            img[a] = Bitset::npos;
        }
        return false;
    };
    rec(rec, 0);
    return out;
}

}  // namespace latt
