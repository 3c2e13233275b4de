#include <catch2/catch_amalgamated.hpp>

#include <algorithm>

#include "latt/completion.hpp"
#include "latt/gen.hpp"
#include "latt/iso.hpp"

using namespace latt;

namespace {

// Oracle: try every bijection (for iso) or every injection (tiny sizes).
bool oracle_iso_exists(const FiniteLattice& L, const FiniteLattice& M) {
    if (L.size() != M.size()) return false;
    std::vector<std::size_t> perm(L.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    do {
        bool ok = true;
        for (std::size_t a = 0; a < L.size() && ok; ++a)
            for (std::size_t b = 0; b < L.size() && ok; ++b) {
                if (perm[L.meet(a, b)] != M.meet(perm[a], perm[b])) ok = false;
                if (perm[L.join(a, b)] != M.join(perm[a], perm[b])) ok = false;
            }
        if (ok && perm[L.bottom()] == M.bottom() && perm[L.top()] == M.top()) return true;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
}

}  // namespace

TEST_CASE("identity map has every flag") {
    auto f = analyze_map(identity_map(m3()));
    REQUIRE(f.isotone);
    REQUIRE(f.hom);
    REQUIRE(f.complete_hom);
    REQUIRE(f.injective);
    REQUIRE(f.surjective);
    REQUIRE(f.isomorphism());
}

TEST_CASE("constant-bottom map on the two-chain is isotone but not a hom") {
    auto L = chain(2);
    LatticeMap f(L, L, {0, 0});
    auto fl = analyze_map(f);
    REQUIRE(fl.isotone);
    REQUIRE(fl.antitone);  // constants are both
    REQUIRE_FALSE(fl.hom);  // 1 |-> 0 != 1
    REQUIRE_FALSE(fl.injective);
    REQUIRE_FALSE(fl.surjective);
}

TEST_CASE("projection is a surjective non-injective hom") {
    auto pr = direct_product({chain(2), chain(2)});
    auto fl = analyze_map(pr.projections[0]);
    REQUIRE(fl.hom);
    REQUIRE(fl.complete_hom);
    REQUIRE(fl.surjective);
    REQUIRE_FALSE(fl.injective);
}

TEST_CASE("complete-hom check samples above the exhaustive bound") {
    auto B = boolean_lattice(4);  // 16 > 14
    Config cfg;
    auto fl = analyze_map(identity_map(B), cfg);
    REQUIRE(fl.complete_hom);
    REQUIRE_FALSE(fl.complete_hom_exhaustive);
    REQUIRE(fl.sample_seed == cfg.seed);
    REQUIRE(fl.samples == cfg.complete_hom_samples);
}

TEST_CASE("homs are isotone; bijective homs are isomorphisms") {
    Rng rng(5);
    int iso_checked = 0;
    for (int i = 0; i < 25; ++i) {
        auto L = random_lattice(rng, 7);
        auto M = random_lattice(rng, 7);
        for (const auto& h : sample_homs(rng, L, M, 3)) {
            auto fl = analyze_map(h);
            REQUIRE(fl.hom);
            REQUIRE(fl.isotone);
            if (fl.injective && fl.surjective) {
                REQUIRE(find_isomorphism(L, M).found());
                ++iso_checked;
            }
        }
    }
    (void)iso_checked;
}

TEST_CASE("self-isomorphism is the identity (lowest-index-first search)") {
    for (auto L : {chain(4), m3(), n5(), boolean_lattice(3)}) {
        auto r = find_isomorphism(L, L);
        REQUIRE(r.found());
        for (std::size_t a = 0; a < L->size(); ++a) REQUIRE((*r.map)(a) == a);
    }
}

TEST_CASE("4-chain vs Boolean diamond: absent") {
    auto r = find_isomorphism(chain(4), boolean_lattice(2));
    REQUIRE(r.status == IsoResult::Status::absent);
}

TEST_CASE("m3 vs n5: absent") {
    auto r = find_isomorphism(m3(), n5());
    REQUIRE(r.status == IsoResult::Status::absent);
    REQUIRE_FALSE(oracle_iso_exists(*m3(), *n5()));
}

TEST_CASE("search verdict matches the all-bijections oracle") {
    Rng rng(99);
    for (int i = 0; i < 40; ++i) {
        auto L = random_lattice(rng, 6);
        auto M = random_lattice(rng, 6);
        REQUIRE(find_isomorphism(L, M).found() == oracle_iso_exists(*L, *M));
    }
}

TEST_CASE("timeout is reported as timeout, not absent") {
    Config cfg;
    cfg.iso_node_budget = 1;
    auto r = find_isomorphism(chain(3), chain(3), cfg);
    REQUIRE(r.status == IsoResult::Status::timeout);
    REQUIRE(r.nodes >= 1);
}

TEST_CASE("constrained isomorphism search") {
    auto L = chain(3);
    SECTION("forcing the identity works") {
        auto r = find_isomorphism_fixing(L, L, {{0, 0}, {1, 1}});
        REQUIRE(r.found());
    }
    SECTION("forcing bottom to top is refused") {
        auto r = find_isomorphism_fixing(L, L, {{0, 2}});
        REQUIRE(r.status == IsoResult::Status::absent);
    }
    SECTION("forcing a non-automorphic swap is refused") {
        auto r = find_isomorphism_fixing(L, L, {{1, 2}});
        REQUIRE(r.status == IsoResult::Status::absent);
    }
}

TEST_CASE("embedding search") {
    REQUIRE(find_embedding(chain(2), chain(3)).found());
    REQUIRE(find_embedding(chain(3), boolean_lattice(2)).found());
    REQUIRE(find_embedding(boolean_lattice(2), m3()).found());
    // N5 cannot embed into the modular M3
    REQUIRE(find_embedding(n5(), m3()).status == IsoResult::Status::absent);
    // found embeddings are verified injective homs
    auto r = find_embedding(boolean_lattice(2), boolean_lattice(3));
    REQUIRE(r.found());
    auto fl = analyze_map(*r.map);
    REQUIRE(fl.embedding());
}

TEST_CASE("hom enumeration matches the all-maps oracle") {
    auto count_brute = [](const FiniteLattice& L, const FiniteLattice& M) {
        std::size_t count = 0;
        std::vector<std::size_t> f(L.size(), 0);
        for (;;) {
            bool hom = f[L.bottom()] == M.bottom() && f[L.top()] == M.top();
            for (std::size_t a = 0; a < L.size() && hom; ++a)
                for (std::size_t b = a; b < L.size() && hom; ++b)
                    hom = f[L.meet(a, b)] == M.meet(f[a], f[b]) &&
                          f[L.join(a, b)] == M.join(f[a], f[b]);
            if (hom) ++count;
            std::size_t i = 0;
            while (i < f.size() && ++f[i] == M.size()) f[i++] = 0;
            if (i == f.size()) break;
        }
        return count;
    };
    auto b2 = boolean_lattice(2);
    REQUIRE(enumerate_homs(chain(2), chain(2), 100).size() == 1);
    REQUIRE(enumerate_homs(chain(3), chain(2), 100).size() == 2);
    REQUIRE(enumerate_homs(b2, b2, 100).size() == count_brute(*b2, *b2));
    REQUIRE(enumerate_homs(m3(), chain(3), 100).empty());  // no bounded hom exists
    REQUIRE(enumerate_homs(chain(3), n5(), 100).size() == count_brute(*chain(3), *n5()));
}

TEST_CASE("map table validation") {
    REQUIRE_THROWS_AS(LatticeMap(chain(2), chain(2), {0}), Error);
    REQUIRE_THROWS_AS(LatticeMap(chain(2), chain(2), {0, 5}), Error);
    REQUIRE_THROWS_AS(compose(identity_map(chain(2)), identity_map(chain(3))), Error);
}
