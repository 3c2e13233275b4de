#pragma once

#include <vector>

#include "latt/iso.hpp"
#include "latt/polarity.hpp"
#include "latt/rng.hpp"

namespace latt {

/// Random polarity with carrier sizes in [min_side, max_side] and i.i.d.
/// relation bits. Density is drawn per polarity so sparse and dense
/// relations both occur.
inline PolarityPtr random_polarity(Rng& rng, std::size_t max_side, std::size_t min_side = 1) {
    std::size_t nx = min_side + rng.below(max_side - min_side + 1);
    std::size_t ny = min_side + rng.below(max_side - min_side + 1);
    Polarity p(default_names(nx, "x"), default_names(ny, "y"));
    double density = 0.15 + 0.7 * rng.unit();
    for (std::size_t x = 0; x < nx; ++x)
        for (std::size_t y = 0; y < ny; ++y)
            if (rng.chance(density)) p.relate(x, y);
    return std::make_shared<Polarity>(std::move(p));
}

/// Random bounded lattice of size <= max_size, produced as the stable-set
/// lattice of a random polarity (every finite lattice arises this way) and
/// relabelled with plain element names. Rejection-sampled on the size.
inline LatticePtr random_lattice(Rng& rng, std::size_t max_size, std::size_t min_size = 1) {
    for (;;) {
        std::size_t side = 1 + rng.below(5);
        auto p = random_polarity(rng, side);
        auto ssl = stable_set_lattice(p);
        const auto& L = *ssl.lattice;
        if (L.size() < min_size || L.size() > max_size) continue;
        std::vector<Bitset> up;
        for (std::size_t a = 0; a < L.size(); ++a) up.push_back(L.up_set(a));
        return validate_lattice(up, default_names(L.size()));
    }
}

/// Random subset of an n-element carrier.
inline Bitset random_subset(Rng& rng, std::size_t n, double density = 0.5) {
    Bitset s(n);
    for (std::size_t i = 0; i < n; ++i)
        if (rng.chance(density)) s.set(i);
    return s;
}

/// Up to `want` bounded-lattice homomorphisms L -> M, drawn from the
/// shuffled enumeration. Deterministic for a fixed seed.
inline std::vector<LatticeMap> sample_homs(Rng& rng, LatticePtr L, LatticePtr M,
                                           std::size_t want) {
    return enumerate_homs(std::move(L), std::move(M), want, rng.u64() | 1);
}

}  // namespace latt
