#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "latt/gen.hpp"
#include "latt/lattice.hpp"
#include "latt/map.hpp"

using namespace latt;

namespace {

// Independent meet/join oracle: literal scans over the order relation,
// no use of the derived tables.
std::optional<std::size_t> oracle_meet(const FiniteLattice& L, std::size_t a, std::size_t b) {
    std::optional<std::size_t> best;
    for (std::size_t c = 0; c < L.size(); ++c) {
        if (!L.leq(c, a) || !L.leq(c, b)) continue;
        bool greatest = true;
        for (std::size_t d = 0; d < L.size(); ++d)
            if (L.leq(d, a) && L.leq(d, b) && !L.leq(d, c)) greatest = false;
        if (greatest) {
            if (best) return std::nullopt;  // not unique
            best = c;
        }
    }
    return best;
}

std::optional<std::size_t> oracle_join(const FiniteLattice& L, std::size_t a, std::size_t b) {
    std::optional<std::size_t> best;
    for (std::size_t c = 0; c < L.size(); ++c) {
        if (!L.leq(a, c) || !L.leq(b, c)) continue;
        bool least = true;
        for (std::size_t d = 0; d < L.size(); ++d)
            if (L.leq(a, d) && L.leq(b, d) && !L.leq(c, d)) least = false;
        if (least) {
            if (best) return std::nullopt;
            best = c;
        }
    }
    return best;
}

std::vector<Bitset> chain_rows(std::size_t n) {
    std::vector<Bitset> up(n, Bitset(n));
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a; b < n; ++b) up[a].set(b);
    return up;
}

}  // namespace

TEST_CASE("two-element chain validates") {
    auto L = validate_lattice(chain_rows(2), {"0", "1"});
    REQUIRE(L->size() == 2);
    REQUIRE(L->bottom() == 0);
    REQUIRE(L->top() == 1);
    REQUIRE(L->meet(0, 1) == 0);
    REQUIRE(L->join(0, 1) == 1);
}

TEST_CASE("antichain is rejected with the offending pair") {
    std::vector<Bitset> up(2, Bitset(2));
    up[0].set(0);
    up[1].set(1);
    try {
        validate_lattice(up, {"a", "b"});
        FAIL("expected NotALattice");
    } catch (const Error& e) {
        REQUIRE(e.code == Errc::not_a_lattice);
        REQUIRE(e.witness_a == 0);
        REQUIRE(e.witness_b == 1);
    }
}

TEST_CASE("partial order violations carry witnesses") {
    SECTION("reflexivity") {
        std::vector<Bitset> up(1, Bitset(1));
        REQUIRE_THROWS_MATCHES(validate_lattice(up, {"a"}), Error, Catch::Matchers::Predicate<Error>(
            [](const Error& e) { return e.code == Errc::not_a_partial_order; }));
    }
    SECTION("antisymmetry") {
        std::vector<Bitset> up(2, Bitset::all(2));
        REQUIRE_THROWS_MATCHES(validate_lattice(up, {"a", "b"}), Error,
                               Catch::Matchers::Predicate<Error>([](const Error& e) {
                                   return e.code == Errc::not_a_partial_order;
                               }));
    }
    SECTION("transitivity") {
        std::vector<Bitset> up(3, Bitset(3));
        up[0].set(0);
        up[0].set(1);
        up[1].set(1);
        up[1].set(2);
        up[2].set(2);
        REQUIRE_THROWS_MATCHES(validate_lattice(up, {"a", "b", "c"}), Error,
                               Catch::Matchers::Predicate<Error>([](const Error& e) {
                                   return e.code == Errc::not_a_partial_order;
                               }));
    }
    SECTION("duplicate names") {
        REQUIRE_THROWS_MATCHES(validate_lattice(chain_rows(2), {"a", "a"}), Error,
                               Catch::Matchers::Predicate<Error>(
                                   [](const Error& e) { return e.code == Errc::name_clash; }));
    }
    SECTION("empty carrier") {
        REQUIRE_THROWS_MATCHES(validate_lattice({}, {}), Error,
                               Catch::Matchers::Predicate<Error>(
                                   [](const Error& e) { return e.code == Errc::not_a_lattice; }));
    }
}

TEST_CASE("n5 from covers matches the brute-force meet/join oracle") {
    auto L = n5();
    REQUIRE(L->size() == 5);
    for (std::size_t a = 0; a < 5; ++a)
        for (std::size_t b = 0; b < 5; ++b) {
            auto m = oracle_meet(*L, a, b), j = oracle_join(*L, a, b);
            REQUIRE(m.has_value());
            REQUIRE(j.has_value());
            REQUIRE(L->meet(a, b) == *m);
            REQUIRE(L->join(a, b) == *j);
        }
}

TEST_CASE("tables are glb/lub on random lattices") {
    Rng rng(7);
    for (int i = 0; i < 30; ++i) {
        auto L = random_lattice(rng, 10);
        for (std::size_t a = 0; a < L->size(); ++a)
            for (std::size_t b = 0; b < L->size(); ++b) {
                REQUIRE(L->meet(a, b) == *oracle_meet(*L, a, b));
                REQUIRE(L->join(a, b) == *oracle_join(*L, a, b));
            }
    }
}

TEST_CASE("one-element lattice is allowed") {
    auto L = validate_lattice(chain_rows(1), {"*"});
    REQUIRE(L->bottom() == L->top());
    REQUIRE(filters(*L).size() == 1);
    REQUIRE(ideals(*L).size() == 1);
}

TEST_CASE("m3 atom operations") {
    auto L = m3();
    std::size_t a = L->index_of("a"), b = L->index_of("b"), c = L->index_of("c");
    REQUIRE(L->join(a, b) == L->top());
    REQUIRE(L->meet(a, b) == L->bottom());
    REQUIRE(L->join(b, c) == L->top());
    REQUIRE(L->meet(a, c) == L->bottom());
}

TEST_CASE("big meet/join conventions") {
    auto L = m3();
    REQUIRE(L->big_join(Bitset(5)) == L->bottom());
    REQUIRE(L->big_meet(Bitset(5)) == L->top());
    REQUIRE(L->big_join(Bitset::all(5)) == L->top());
    REQUIRE(L->big_meet(Bitset::all(5)) == L->bottom());
    for (std::size_t x = 0; x < 5; ++x) {
        REQUIRE(L->big_meet(Bitset::single(5, x)) == x);
        REQUIRE(L->big_join(Bitset::single(5, x)) == x);
    }
}

TEST_CASE("direct product of one factor is an isomorphic copy") {
    auto L = m3();
    auto pr = direct_product({L});
    REQUIRE(pr.lattice->size() == 5);
    REQUIRE(pr.projections.size() == 1);
    for (std::size_t i = 0; i < 5; ++i) REQUIRE(pr.projections[0](i) == i);
    REQUIRE(find_isomorphism(pr.lattice, L).found());
}

TEST_CASE("2x2 product is the Boolean diamond") {
    auto pr = direct_product({chain(2), chain(2)});
    REQUIRE(pr.lattice->size() == 4);
    REQUIRE(find_isomorphism(pr.lattice, boolean_lattice(2)).found());
    REQUIRE(pr.lattice->name(0) == "(c0,c0)");
}

TEST_CASE("2x3 grid: componentwise order and surjective hom projections") {
    auto A = chain(2), B = chain(3);
    auto pr = direct_product({A, B});
    REQUIRE(pr.lattice->size() == 6);
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t k = 0; k < 6; ++k) {
            auto ti = pr.tuple(i), tk = pr.tuple(k);
            bool expect = A->leq(ti[0], tk[0]) && B->leq(ti[1], tk[1]);
            REQUIRE(pr.lattice->leq(i, k) == expect);
        }
    for (const auto& proj : pr.projections) {
        auto f = analyze_map(proj);
        REQUIRE(f.hom);
        REQUIRE(f.surjective);
    }
    REQUIRE_FALSE(analyze_map(pr.projections[0]).injective);
}

TEST_CASE("product size bound") {
    Config cfg;
    cfg.product_size_bound = 5;
    REQUIRE_THROWS_MATCHES(direct_product({chain(3), chain(2)}, cfg), Error,
                           Catch::Matchers::Predicate<Error>(
                               [](const Error& e) { return e.code == Errc::size_exceeded; }));
}

TEST_CASE("filters and ideals of the two-element chain") {
    auto L = chain(2);
    auto fs = filters(*L);
    auto is = ideals(*L);
    REQUIRE(fs.size() == 2);
    REQUIRE(is.size() == 2);
    // bit-vector order: {1} before {0,1}; {0} before {0,1}
    REQUIRE(fs[0] == Bitset::single(2, 1));
    REQUIRE(fs[1] == Bitset::all(2));
    REQUIRE(is[0] == Bitset::single(2, 0));
    REQUIRE(is[1] == Bitset::all(2));
}

TEST_CASE("filters are exactly the nonempty up-closed meet-closed subsets") {
    // brute-force oracle over all subsets, on a spread of small lattices
    for (auto L : {chain(4), m3(), n5(), boolean_lattice(3)}) {
        std::set<Bitset> brute;
        const std::size_t n = L->size();
        for (std::uint64_t m = 1; m < (std::uint64_t{1} << n); ++m) {
            Bitset s(n);
            for (std::size_t i = 0; i < n; ++i)
                if ((m >> i) & 1) s.set(i);
            bool ok = true;
            s.for_each([&](std::size_t a) {
                if (!L->up_set(a).is_subset_of(s)) ok = false;  // up-closed
                s.for_each([&](std::size_t b) {
                    if (!s.test(L->meet(a, b))) ok = false;  // meet-closed
                });
            });
            if (ok) brute.insert(s);
        }
        auto fs = filters(*L);
        REQUIRE(fs.size() == n);  // every filter of a finite lattice is principal
        REQUIRE(std::set<Bitset>(fs.begin(), fs.end()) == brute);
        for (std::size_t a = 0; a < n; ++a)
            REQUIRE(std::find(fs.begin(), fs.end(), L->up_set(a)) != fs.end());
    }
}

TEST_CASE("filters and ideals biject with the carrier order-(anti)tonically") {
    Rng rng(11);
    for (int i = 0; i < 20; ++i) {
        auto L = random_lattice(rng, 9);
        auto fs = filters(*L);
        auto is = ideals(*L);
        REQUIRE(fs.size() == L->size());
        REQUIRE(is.size() == L->size());
        for (std::size_t a = 0; a < L->size(); ++a)
            for (std::size_t b = 0; b < L->size(); ++b) {
                // a <= b iff up(b) <= up(a) iff down(a) <= down(b)
                REQUIRE(L->leq(a, b) == L->up_set(b).is_subset_of(L->up_set(a)));
                REQUIRE(L->leq(a, b) == L->down_set(a).is_subset_of(L->down_set(b)));
            }
    }
}

TEST_CASE("covers and heights") {
    auto L = n5();
    auto cs = L->cover_pairs();
    REQUIRE(cs.size() == 5);
    auto hs = L->heights();
    REQUIRE(hs[L->bottom()] == 0);
    REQUIRE(hs[L->top()] == 3);  // 0 < a < c < 1 is the longest chain
}
