#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "latt/gen.hpp"
#include "latt/io.hpp"

using namespace latt;

TEST_CASE("lattice files") {
    SECTION("canonical write/read round-trip") {
        std::string text = dump_canonical(lattice_to_json(*m3()));
        auto L = lattice_from_json(parse_json_text(text, "m3"));
        REQUIRE(L->size() == 5);
        REQUIRE(find_isomorphism(L, m3()).found());
        REQUIRE(dump_canonical(lattice_to_json(*L)) == text);  // writer is a fixpoint
    }
    SECTION("leq form, including reflexive pairs") {
        json j;
        j["elements"] = json::array({"a", "b"});
        j["leq"] = json::array({json::array({"a", "a"}), json::array({"a", "b"}),
                                json::array({"b", "b"})});
        auto L = lattice_from_json(j);
        REQUIRE(L->leq(0, 1));
    }
    SECTION("leq without reflexivity is NotAPartialOrder") {
        json j;
        j["elements"] = json::array({"a", "b"});
        j["leq"] = json::array({json::array({"a", "b"})});
        REQUIRE_THROWS_MATCHES(lattice_from_json(j), Error,
                               Catch::Matchers::Predicate<Error>([](const Error& e) {
                                   return e.code == Errc::not_a_partial_order;
                               }));
    }
    SECTION("exactly one of leq/covers") {
        json j;
        j["elements"] = json::array({"a"});
        REQUIRE_THROWS_AS(lattice_from_json(j), Error);
        j["leq"] = json::array();
        j["covers"] = json::array();
        REQUIRE_THROWS_AS(lattice_from_json(j), Error);
    }
    SECTION("unknown element names are rejected") {
        json j;
        j["elements"] = json::array({"a", "b"});
        j["covers"] = json::array({json::array({"a", "zz"})});
        REQUIRE_THROWS_MATCHES(lattice_from_json(j), Error,
                               Catch::Matchers::Predicate<Error>(
                                   [](const Error& e) { return e.code == Errc::io_error; }));
    }
    SECTION("duplicate names are rejected") {
        json j;
        j["elements"] = json::array({"a", "a"});
        j["covers"] = json::array();
        REQUIRE_THROWS_MATCHES(lattice_from_json(j), Error,
                               Catch::Matchers::Predicate<Error>(
                                   [](const Error& e) { return e.code == Errc::name_clash; }));
    }
}

TEST_CASE("polarity JSON files") {
    SECTION("round-trip") {
        auto p = identity_polarity(2);
        std::string text = dump_canonical(polarity_to_json(*p));
        auto q = polarity_from_json(parse_json_text(text, "p"));
        REQUIRE(q->nx() == 2);
        REQUIRE(q->rel(0, 0));
        REQUIRE_FALSE(q->rel(0, 1));
        REQUIRE(dump_canonical(polarity_to_json(*q)) == text);
    }
    SECTION("duplicate names") {
        json j;
        j["X"] = json::array({"a", "a"});
        j["Y"] = json::array({"y"});
        j["R"] = json::array();
        REQUIRE_THROWS_MATCHES(polarity_from_json(j), Error,
                               Catch::Matchers::Predicate<Error>(
                                   [](const Error& e) { return e.code == Errc::name_clash; }));
    }
    SECTION("R with unknown names") {
        json j;
        j["X"] = json::array({"a"});
        j["Y"] = json::array({"y"});
        j["R"] = json::array({json::array({"a", "zz"})});
        REQUIRE_THROWS_AS(polarity_from_json(j), Error);
    }
}

TEST_CASE("burmeister contexts") {
    SECTION("write and read back, bit-exact") {
        auto p = identity_polarity(2);
        std::ostringstream os;
        write_burmeister(os, *p);
        REQUIRE(os.str() == "B\n\n2\n2\n\nx0\nx1\ny0\ny1\nX.\n.X\n");
        std::istringstream is(os.str());
        auto q = read_burmeister(is);
        std::ostringstream os2;
        write_burmeister(os2, *q);
        REQUIRE(os2.str() == os.str());
    }
    SECTION("row length mismatch") {
        std::istringstream is("B\n\n1\n2\n\nx0\ny0\ny1\nX\n");
        REQUIRE_THROWS_MATCHES(read_burmeister(is), Error,
                               Catch::Matchers::Predicate<Error>([](const Error& e) {
                                   return e.code == Errc::malformed_context;
                               }));
    }
    SECTION("bad header") {
        std::istringstream is("Q\n\n1\n1\n\nx\ny\nX\n");
        REQUIRE_THROWS_AS(read_burmeister(is), Error);
    }
    SECTION("bad cell character") {
        std::istringstream is("B\n\n1\n1\n\nx\ny\n?\n");
        REQUIRE_THROWS_AS(read_burmeister(is), Error);
    }
    SECTION("trailing garbage") {
        std::istringstream is("B\n\n1\n1\n\nx\ny\nX\nleftover\n");
        REQUIRE_THROWS_AS(read_burmeister(is), Error);
    }
    SECTION("duplicate object names") {
        std::istringstream is("B\n\n2\n1\n\nx\nx\ny\nX\nX\n");
        REQUIRE_THROWS_MATCHES(read_burmeister(is), Error,
                               Catch::Matchers::Predicate<Error>(
                                   [](const Error& e) { return e.code == Errc::name_clash; }));
    }
    SECTION("empty carriers still round-trip") {
        auto p = empty_polarity(0, 2);
        std::ostringstream os;
        write_burmeister(os, *p);
        std::istringstream is(os.str());
        auto q = read_burmeister(is);
        REQUIRE(q->nx() == 0);
        REQUIRE(q->ny() == 2);
    }
}

TEST_CASE("family files") {
    SECTION("polarity family with ultrafilter") {
        json fam;
        fam["ultrafilter"] = 1;
        fam["members"] = json::array(
            {polarity_to_json(*identity_polarity(2)), polarity_to_json(*full_polarity(2, 2))});
        auto f = family_from_json(fam);
        REQUIRE(f.is_polarity_family());
        REQUIRE(f.size() == 2);
        REQUIRE(f.principal == 1);
    }
    SECTION("lattice family defaults to index 0") {
        json fam;
        fam["members"] = json::array({lattice_to_json(*chain(2)), lattice_to_json(*m3())});
        auto f = family_from_json(fam);
        REQUIRE_FALSE(f.is_polarity_family());
        REQUIRE(f.principal == 0);
    }
    SECTION("mixed families are rejected") {
        json fam;
        fam["members"] =
            json::array({polarity_to_json(*identity_polarity(2)), lattice_to_json(*chain(2))});
        REQUIRE_THROWS_AS(family_from_json(fam), Error);
    }
    SECTION("empty family / bad index") {
        json fam;
        fam["members"] = json::array();
        REQUIRE_THROWS_AS(family_from_json(fam), Error);
        fam["members"] = json::array({lattice_to_json(*chain(2))});
        fam["ultrafilter"] = 5;
        REQUIRE_THROWS_AS(family_from_json(fam), Error);
    }
}

TEST_CASE("dot export") {
    auto d = to_dot(*chain(3));
    REQUIRE(d == to_dot(*chain(3)));  // deterministic
    std::size_t edges = 0, pos = 0;
    while ((pos = d.find("->", pos)) != std::string::npos) {
        ++edges;
        pos += 2;
    }
    REQUIRE(edges == 2);  // the covers of the 3-chain
    REQUIRE(d.find("rankdir=BT") != std::string::npos);
    REQUIRE(d.find("rank=same") != std::string::npos);
}

TEST_CASE("dot ranks by height") {
    auto d = to_dot(*m3());
    // three atoms share a rank line
    REQUIRE(d.find("{ rank=same; n1; n2; n3; }") != std::string::npos);
}

TEST_CASE("corpus and file helpers") {
    std::ifstream in("data/formulas.corpus");
    REQUIRE(in.good());
    auto corpus = read_formula_corpus(in);
    REQUIRE(corpus.size() >= 10);
    bool has_join_formula = false;
    for (const auto& e : corpus)
        if (e.text.find("S1") != std::string::npos && e.text.find("S2") != std::string::npos)
            has_join_formula = true;
    REQUIRE(has_join_formula);

    auto tmp = std::filesystem::temp_directory_path() / "latt_io_test.txt";
    write_file(tmp.string(), "hello\n");
    REQUIRE(read_file(tmp.string()) == "hello\n");
    std::filesystem::remove(tmp);
    REQUIRE_THROWS_MATCHES(read_file("/nonexistent/latt/file"), Error,
                           Catch::Matchers::Predicate<Error>(
                               [](const Error& e) { return e.code == Errc::io_error; }));
    REQUIRE_THROWS_MATCHES(parse_json_text("{ nope", "x"), Error,
                           Catch::Matchers::Predicate<Error>(
                               [](const Error& e) { return e.code == Errc::io_error; }));
}
