#include <catch2/catch_amalgamated.hpp>

#include <fstream>

#include "latt/formula.hpp"
#include "latt/gen.hpp"
#include "latt/io.hpp"
#include "latt/los.hpp"
#include "latt/term.hpp"

using namespace latt;

namespace {

bool same_tree(const Formula& a, const Formula& b) {
    if (a.kind != b.kind || a.var != b.var || a.var2 != b.var2 || a.symbol != b.symbol)
        return false;
    if ((a.lhs != nullptr) != (b.lhs != nullptr)) return false;
    if ((a.rhs != nullptr) != (b.rhs != nullptr)) return false;
    if (a.lhs && !same_tree(*a.lhs, *b.lhs)) return false;
    if (a.rhs && !same_tree(*a.rhs, *b.rhs)) return false;
    return true;
}

Bitset subset_of(std::uint64_t mask, std::size_t n) {
    Bitset s(n);
    for (std::size_t i = 0; i < n; ++i)
        if ((mask >> i) & 1) s.set(i);
    return s;
}

Bitset restrict_to_y(const ExpandedPolarity& s, const Bitset& combined) {
    Bitset out(s.base->ny());
    combined.for_each([&](std::size_t u) {
        if (s.is_y(u)) out.set(s.as_y(u));
    });
    return out;
}

}  // namespace

TEST_CASE("formula parsing") {
    SECTION("the right-set formula") {
        auto f = parse_formula("forall v0 (S(v0) -> R(v0,v1))");
        REQUIRE(f->kind == Formula::Kind::forall);
        REQUIRE(f->var == 0);
        REQUIRE(f->lhs->kind == Formula::Kind::impl);
        REQUIRE(f->lhs->lhs->kind == Formula::Kind::atom_sym);
        REQUIRE(f->lhs->lhs->symbol == "S");
        REQUIRE(f->lhs->rhs->kind == Formula::Kind::atom_r);
        REQUIRE(f->free_mask == 0b10);  // only v1 free
    }
    SECTION("precedence: ~ binds tighter than & than | than ->") {
        auto f = parse_formula("~X(v0) & Y(v0) | X(v0) -> Y(v0)");
        REQUIRE(f->kind == Formula::Kind::impl);
        REQUIRE(f->lhs->kind == Formula::Kind::disj);
        REQUIRE(f->lhs->lhs->kind == Formula::Kind::conj);
        REQUIRE(f->lhs->lhs->lhs->kind == Formula::Kind::neg);
    }
    SECTION("implication is right-associative") {
        auto f = parse_formula("X(v0) -> Y(v0) -> X(v1)");
        REQUIRE(f->kind == Formula::Kind::impl);
        REQUIRE(f->rhs->kind == Formula::Kind::impl);
    }
    SECTION("optional dot after the quantified variable") {
        REQUIRE(same_tree(*parse_formula("forall v0 . X(v0)"), *parse_formula("forall v0 X(v0)")));
    }
    SECTION("errors carry positions") {
        try {
            parse_formula("forall v0 (");
            FAIL("expected SyntaxError");
        } catch (const ParseError& e) {
            REQUIRE(e.code == Errc::syntax_error);
            REQUIRE(e.line == 1);
            REQUIRE(e.col >= 11);
        }
        REQUIRE_THROWS_AS(parse_formula(""), ParseError);
        REQUIRE_THROWS_AS(parse_formula("X(v0) X(v1)"), ParseError);
        REQUIRE_THROWS_AS(parse_formula("forall w X(v0)"), ParseError);
    }
    SECTION("arity is enforced syntactically") {
        try {
            parse_formula("R(v0)");
            FAIL("expected ArityMismatch");
        } catch (const ParseError& e) {
            REQUIRE(e.code == Errc::arity_mismatch);
        }
        REQUIRE_THROWS_AS(parse_formula("S(v0,v1)"), ParseError);
        REQUIRE_THROWS_AS(parse_formula("X(v0,v1)"), ParseError);
    }
}

TEST_CASE("printer round-trips the corpus") {
    std::ifstream in("data/formulas.corpus");
    REQUIRE(in.good());
    auto corpus = read_formula_corpus(in);
    REQUIRE(corpus.size() >= 10);
    for (const auto& entry : corpus) {
        auto reparsed = parse_formula(to_string(*entry.formula));
        REQUIRE(same_tree(*entry.formula, *reparsed));
    }
}

TEST_CASE("evaluation on the identity polarity") {
    ExpandedPolarity ex(identity_polarity(2));
    ex.interpret_on_x("S", Bitset::single(2, 0));
    auto rho_s = rho_formula("S");

    std::vector<int> asg(64, -1);
    asg[1] = 2;  // y0 in the combined carrier
    REQUIRE(evaluate(ex, *rho_s, asg));
    asg[1] = 3;  // y1
    REQUIRE_FALSE(evaluate(ex, *rho_s, asg));

    REQUIRE(evaluate(ex, *stable_formula("S"), std::vector<int>(64, -1)));
}

TEST_CASE("stability sentence is false for a non-stable set") {
    ExpandedPolarity ex(empty_polarity(2, 2));
    ex.interpret_on_x("S", Bitset::single(2, 0));  // closure is all of X
    REQUIRE_FALSE(evaluate(ex, *stable_formula("S"), std::vector<int>(64, -1)));
}

TEST_CASE("evaluation errors") {
    ExpandedPolarity ex(identity_polarity(2));
    SECTION("unbound variable") {
        REQUIRE_THROWS_MATCHES(evaluate(ex, *parse_formula("X(v0)"), std::vector<int>{}), Error,
                               Catch::Matchers::Predicate<Error>([](const Error& e) {
                                   return e.code == Errc::unbound_variable;
                               }));
    }
    SECTION("unknown symbol") {
        std::vector<int> asg(64, -1);
        asg[0] = 0;
        REQUIRE_THROWS_MATCHES(evaluate(ex, *parse_formula("S(v0)"), asg), Error,
                               Catch::Matchers::Predicate<Error>([](const Error& e) {
                                   return e.code == Errc::unknown_symbol;
                               }));
    }
    SECTION("definable_set needs exactly one free variable") {
        REQUIRE_THROWS_MATCHES(definable_set(ex, *parse_formula("R(v0,v1)")), Error,
                               Catch::Matchers::Predicate<Error>([](const Error& e) {
                                   return e.code == Errc::free_variable_count;
                               }));
        REQUIRE_THROWS_MATCHES(definable_set(ex, *parse_formula("forall v0 X(v0)")), Error,
                               Catch::Matchers::Predicate<Error>([](const Error& e) {
                                   return e.code == Errc::free_variable_count;
                               }));
    }
}

TEST_CASE("definable sets match the galois operations exhaustively") {
    Rng rng(71);
    auto rho_s = rho_formula("S");
    auto cl_s = closure_formula("S");
    auto st_s = stable_formula("S");
    for (int i = 0; i < 25; ++i) {
        auto p = random_polarity(rng, 6);
        for (std::uint64_t m = 0; m < (std::uint64_t{1} << p->nx()); ++m) {
            Bitset a = subset_of(m, p->nx());
            ExpandedPolarity ex(p);
            ex.interpret_on_x("S", a);
            REQUIRE(restrict_to_y(ex, definable_set(ex, *rho_s)) == rho(*p, a));
            REQUIRE(restrict_to_x(ex, definable_set(ex, *cl_s)) == closure(*p, a));
            REQUIRE(evaluate(ex, *st_s, std::vector<int>(64, -1)) == is_stable(*p, a));
        }
    }
}

TEST_CASE("sort axioms hold in every polarity") {
    Rng rng(73);
    for (int i = 0; i < 20; ++i) {
        ExpandedPolarity ex(random_polarity(rng, 6));
        for (const auto& ax : sort_axioms())
            REQUIRE(evaluate(ex, *ax, std::vector<int>(64, -1)));
    }
}

TEST_CASE("the X side of a definable set can be taken") {
    ExpandedPolarity ex(identity_polarity(2));
    Bitset both = definable_set(ex, *parse_formula("X(v0)"));
    REQUIRE(restrict_to_x(ex, both) == Bitset::all(2));
    REQUIRE(restrict_to_y(ex, both).none());
}

// ---------------------------------------------------------------------------
// Terms and equations.

TEST_CASE("term parsing") {
    auto t = parse_term("x ^ (y v z)");
    REQUIRE(t->kind == Term::Kind::meet);
    REQUIRE(t->args[0]->kind == Term::Kind::var);
    REQUIRE(t->args[0]->name == "x");
    REQUIRE(t->args[1]->kind == Term::Kind::join);

    SECTION("meet binds tighter than join") {
        auto u = parse_term("x ^ y v z");
        REQUIRE(u->kind == Term::Kind::join);
        REQUIRE(u->args[0]->kind == Term::Kind::meet);
    }
    SECTION("constants and named operations") {
        auto u = parse_term("f(x, 0) v 1");
        REQUIRE(u->kind == Term::Kind::join);
        REQUIRE(u->args[0]->kind == Term::Kind::op);
        REQUIRE(u->args[0]->args[1]->kind == Term::Kind::zero);
        REQUIRE(u->args[1]->kind == Term::Kind::one);
    }
    SECTION("identifiers starting with v are variables, bare v is the join") {
        auto u = parse_term("va v vb");
        REQUIRE(u->kind == Term::Kind::join);
        REQUIRE(u->args[0]->name == "va");
    }
    SECTION("syntax errors") {
        REQUIRE_THROWS_AS(parse_term("x ^"), ParseError);
        REQUIRE_THROWS_AS(parse_term("(x"), ParseError);
        REQUIRE_THROWS_AS(parse_term("x y"), ParseError);
    }
    SECTION("round-trip") {
        for (const char* s : {"x ^ (y v z)", "f(x,g(y),0) v 1", "x", "0 ^ 1"}) {
            auto a = parse_term(s);
            auto b = parse_term(to_string(*a));
            REQUIRE(to_string(*a) == to_string(*b));
        }
    }
}

TEST_CASE("term evaluation") {
    LatticeBasedAlgebra A(m3(), {{"s", 1, {0, 2, 1, 3, 4}}});
    std::map<std::string, std::size_t> asg{{"x", 1}, {"y", 2}};
    REQUIRE(eval_term(A, *parse_term("x ^ y"), asg) == 0);
    REQUIRE(eval_term(A, *parse_term("x v y"), asg) == 4);
    REQUIRE(eval_term(A, *parse_term("s(x)"), asg) == 2);
    REQUIRE(eval_term(A, *parse_term("0"), asg) == 0);
    REQUIRE(eval_term(A, *parse_term("1"), asg) == 4);
    REQUIRE_THROWS_MATCHES(eval_term(A, *parse_term("z"), asg), Error,
                           Catch::Matchers::Predicate<Error>(
                               [](const Error& e) { return e.code == Errc::unbound_variable; }));
    REQUIRE_THROWS_MATCHES(eval_term(A, *parse_term("g(x)"), asg), Error,
                           Catch::Matchers::Predicate<Error>(
                               [](const Error& e) { return e.code == Errc::unknown_symbol; }));
    REQUIRE_THROWS_MATCHES(eval_term(A, *parse_term("s(x,y)"), asg), Error,
                           Catch::Matchers::Predicate<Error>(
                               [](const Error& e) { return e.code == Errc::arity_mismatch; }));
}

TEST_CASE("equation checking") {
    auto dist = parse_equation("x ^ (y v z) = (x ^ y) v (x ^ z)");
    auto mod = parse_equation("x ^ (y v (x ^ z)) = (x ^ y) v (x ^ z)");

    SECTION("Boolean 2-element lattice is distributive") {
        REQUIRE(check_equation(boolean_lattice(1), *dist.first, *dist.second).holds);
    }
    SECTION("m3 fails distributivity at the atoms") {
        auto r = check_equation(m3(), *dist.first, *dist.second);
        REQUIRE_FALSE(r.holds);
        REQUIRE(r.vars == std::vector<std::string>{"x", "y", "z"});
        REQUIRE(*r.witness == std::vector<std::size_t>{1, 2, 3});
    }
    SECTION("m3 is modular, n5 is not") {
        REQUIRE(check_equation(m3(), *mod.first, *mod.second).holds);
        auto r = check_equation(n5(), *mod.first, *mod.second);
        REQUIRE_FALSE(r.holds);
        REQUIRE(r.witness.has_value());
    }
    SECTION("s = s always holds") {
        Rng rng(83);
        for (int i = 0; i < 10; ++i) {
            auto L = random_lattice(rng, 7);
            auto t = parse_term("x ^ (y v z) v (x ^ 1)");
            REQUIRE(check_equation(L, *t, *t).holds);
        }
    }
    SECTION("satisfaction is isomorphism-invariant") {
        // relabel m3 by reversing element order
        std::vector<Bitset> up(5, Bitset(5));
        auto L = m3();
        for (std::size_t a = 0; a < 5; ++a)
            for (std::size_t b = 0; b < 5; ++b)
                if (L->leq(4 - a, 4 - b)) up[a].set(b);
        auto M = validate_lattice(up, {"t", "z", "y", "x", "b"});
        REQUIRE(find_isomorphism(L, M).found());
        REQUIRE(check_equation(M, *dist.first, *dist.second).holds ==
                check_equation(L, *dist.first, *dist.second).holds);
        REQUIRE(check_equation(M, *mod.first, *mod.second).holds ==
                check_equation(L, *mod.first, *mod.second).holds);
    }
    SECTION("budget is enforced") {
        Config cfg;
        cfg.term_eval_budget = 10;
        REQUIRE_THROWS_MATCHES(check_equation(m3(), *dist.first, *dist.second, cfg), Error,
                               Catch::Matchers::Predicate<Error>([](const Error& e) {
                                   return e.code == Errc::budget_exceeded;
                               }));
    }
    SECTION("equations over algebra operations") {
        LatticeBasedAlgebra A(m3(), {{"s", 1, {0, 2, 1, 3, 4}}});
        // s is an involution
        auto eq = parse_equation("s(s(x)) = x");
        REQUIRE(check_equation(A, *eq.first, *eq.second).holds);
        auto bad = parse_equation("s(x) = x");
        auto r = check_equation(A, *bad.first, *bad.second);
        REQUIRE_FALSE(r.holds);
        REQUIRE(*r.witness == std::vector<std::size_t>{1});  // first moved point
    }
}

TEST_CASE("equation file parsing") {
    std::ifstream in("data/equations.txt");
    REQUIRE(in.good());
    auto eqs = read_equations(in);
    REQUIRE(eqs.size() == 4);
}

// ---------------------------------------------------------------------------
// Transfer checks.

TEST_CASE("transfer with a single factor reduces to plain evaluation") {
    Rng rng(91);
    auto p = random_polarity(rng, 4);
    ExpandedFamily fam;
    fam.U = Ultrafilter{1, 0};
    ExpandedPolarity ex(p);
    Bitset s = random_subset(rng, p->nx());
    ex.interpret_on_x("S", s);
    fam.factors.push_back(ex);

    auto rep = check_los(fam, *stable_formula("S"), {});
    REQUIRE(rep.transfer_ok);
    REQUIRE(rep.rhs == is_stable(*p, s));
}

TEST_CASE("transfer at a principal ultrafilter projects to that factor") {
    auto p1 = identity_polarity(2);
    auto p2 = empty_polarity(2, 2);
    ExpandedFamily fam;
    fam.U = Ultrafilter{2, 1};
    for (auto p : {p1, p2}) {
        ExpandedPolarity ex(p);
        ex.interpret_on_x("S", Bitset::single(2, 0));
        fam.factors.push_back(ex);
    }
    // {x0} is stable in the identity polarity but not in the empty one
    auto rep = check_los(fam, *stable_formula("S"), {});
    REQUIRE(rep.transfer_ok);
    REQUIRE_FALSE(rep.lhs);  // factor 1 wins
    fam.U = Ultrafilter{2, 0};
    auto rep0 = check_los(fam, *stable_formula("S"), {});
    REQUIRE(rep0.transfer_ok);
    REQUIRE(rep0.lhs);
}

TEST_CASE("definable-set route across a 3-family") {
    Rng rng(97);
    for (int trial = 0; trial < 10; ++trial) {
        ExpandedFamily fam;
        fam.U = Ultrafilter{3, rng.below(3)};
        std::vector<std::vector<std::size_t>> ytuple(1);
        for (int i = 0; i < 3; ++i) {
            auto p = random_polarity(rng, 4);
            ExpandedPolarity ex(p);
            ex.interpret_on_x("S", random_subset(rng, p->nx()));
            fam.factors.push_back(ex);
        }
        std::vector<std::size_t> fn;
        for (int i = 0; i < 3; ++i)
            fn.push_back(fam.factors[i].base->nx() + rng.below(fam.factors[i].base->ny()));
        auto rep = check_los(fam, *rho_formula("S"), {{1, fn}});
        REQUIRE(rep.transfer_ok);
        REQUIRE(rep.lemma_applicable);
        REQUIRE(rep.lemma_ok);
    }
}

TEST_CASE("mixed-sort tuples are rejected") {
    ExpandedFamily fam;
    fam.U = Ultrafilter{2, 0};
    for (int i = 0; i < 2; ++i) fam.factors.emplace_back(identity_polarity(2));
    // first coordinate in X, second in Y
    REQUIRE_THROWS_MATCHES(check_los(fam, *parse_formula("X(v0)"), {{0, {0, 2}}}), Error,
                           Catch::Matchers::Predicate<Error>([](const Error& e) {
                               return e.code == Errc::invalid_argument;
                           }));
}
