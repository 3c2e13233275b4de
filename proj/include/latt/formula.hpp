#pragma once

#include <cctype>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "latt/polarity.hpp"

namespace latt {

/// First-order formulas over a polarity: unary atoms X(v), Y(v) and named
/// expansion symbols S(v); the binary atom R(v,w); ~ & | ->; forall/exists
/// with variables v0, v1, ... ranging over the combined carrier X u Y.
struct Formula {
    enum class Kind { atom_x, atom_y, atom_sym, atom_r, neg, conj, disj, impl, forall, exists };

    Kind kind;
    std::size_t var = 0, var2 = 0;  // atom arguments / quantified variable
    std::string symbol;             // atom_sym only
    std::shared_ptr<const Formula> lhs, rhs;
    std::uint64_t free_mask = 0;  // bit i set iff v_i occurs free

    bool is_quantifier() const { return kind == Kind::forall || kind == Kind::exists; }
};

using FormulaPtr = std::shared_ptr<const Formula>;

namespace detail {

inline FormulaPtr mk_atom(Formula::Kind k, std::size_t v, std::size_t w = 0,
                          std::string sym = {}) {
    auto f = std::make_shared<Formula>();
    f->kind = k;
    f->var = v;
    f->var2 = w;
    f->symbol = std::move(sym);
    f->free_mask = (std::uint64_t{1} << v) | (k == Formula::Kind::atom_r ? (std::uint64_t{1} << w) : 0);
    return f;
}

inline FormulaPtr mk_unary(Formula::Kind k, FormulaPtr sub) {
    auto f = std::make_shared<Formula>();
    f->kind = k;
    f->free_mask = sub->free_mask;
    f->lhs = std::move(sub);
    return f;
}

inline FormulaPtr mk_binary(Formula::Kind k, FormulaPtr l, FormulaPtr r) {
    auto f = std::make_shared<Formula>();
    f->kind = k;
    f->free_mask = l->free_mask | r->free_mask;
    f->lhs = std::move(l);
    f->rhs = std::move(r);
    return f;
}

inline FormulaPtr mk_quant(Formula::Kind k, std::size_t v, FormulaPtr body) {
    auto f = std::make_shared<Formula>();
    f->kind = k;
    f->var = v;
    f->free_mask = body->free_mask & ~(std::uint64_t{1} << v);
    f->lhs = std::move(body);
    return f;
}

class FormulaParser {
public:
    explicit FormulaParser(std::string_view text) : text_(text) {}

    FormulaPtr parse() {
        auto f = formula();
        skip_ws();
        if (pos_ != text_.size()) fail("trailing input");
        return f;
    }

private:
    [[noreturn]] void fail(const std::string& msg) {
        throw ParseError(Errc::syntax_error, msg, line_, col_);
    }

    void skip_ws() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '\n') {
                ++line_;
                col_ = 1;
                ++pos_;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++col_;
                ++pos_;
            } else {
                break;
            }
        }
    }

    bool eat(std::string_view tok) {
        skip_ws();
        if (text_.substr(pos_, tok.size()) == tok) {
            // identifiers must not run into a longer word
            if (std::isalpha(static_cast<unsigned char>(tok[0]))) {
                std::size_t end = pos_ + tok.size();
                if (end < text_.size() &&
                    (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_'))
                    return false;
            }
            pos_ += tok.size();
            col_ += tok.size();
            return true;
        }
        return false;
    }

    std::string ident() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                       text_[pos_] == '_')) {
            ++pos_;
            ++col_;
        }
        if (start == pos_) fail("expected identifier");
        return std::string(text_.substr(start, pos_ - start));
    }

    std::size_t variable() {
        std::string id = ident();
        if (id.size() < 2 || id[0] != 'v') fail("expected a variable v0, v1, ...");
        std::size_t n = 0;
        for (std::size_t i = 1; i < id.size(); ++i) {
            if (!std::isdigit(static_cast<unsigned char>(id[i])))
                fail("expected a variable v0, v1, ...");
            n = n * 10 + static_cast<std::size_t>(id[i] - '0');
        }
        if (n >= 64) fail("variable index above 63");
        return n;
    }

    void expect(char c) {
        skip_ws();
        if (pos_ >= text_.size() || text_[pos_] != c)
            fail(std::string("expected '") + c + "'");
        ++pos_;
        ++col_;
    }

    // formula := quantified | implication
    FormulaPtr formula() {
        skip_ws();
        if (eat("forall")) return quantified(Formula::Kind::forall);
        if (eat("exists")) return quantified(Formula::Kind::exists);
        return implication();
    }

    FormulaPtr quantified(Formula::Kind k) {
        std::size_t v = variable();
        eat(".");  // optional dot; scope extends as far right as possible
        return mk_quant(k, v, formula());
    }

    FormulaPtr implication() {
        FormulaPtr l = disjunction();
        if (eat("->")) {
            FormulaPtr r = formula();  // sequence the sub-parse before the node
            return mk_binary(Formula::Kind::impl, std::move(l), std::move(r));
        }
        return l;
    }

    FormulaPtr disjunction() {
        FormulaPtr l = conjunction();
        while (eat("|")) {
            FormulaPtr r = conjunction();
            l = mk_binary(Formula::Kind::disj, std::move(l), std::move(r));
        }
        return l;
    }

    FormulaPtr conjunction() {
        FormulaPtr l = negation();
        while (eat("&")) {
            FormulaPtr r = negation();
            l = mk_binary(Formula::Kind::conj, std::move(l), std::move(r));
        }
        return l;
    }

    FormulaPtr negation() {
        if (eat("~")) return mk_unary(Formula::Kind::neg, negation());
        return primary();
    }

    FormulaPtr primary() {
        skip_ws();
        if (pos_ >= text_.size()) fail("unexpected end of input");
        if (text_[pos_] == '(') {
            expect('(');
            auto f = formula();
            expect(')');
            return f;
        }
        std::size_t at_line = line_, at_col = col_;
        std::string id = ident();
        if (id == "forall" || id == "exists")
            throw ParseError(Errc::syntax_error, "quantifier must start a formula (parenthesise it)",
                             at_line, at_col);
        expect('(');
        if (id == "R") {
            std::size_t v = variable();
            skip_ws();
            if (pos_ < text_.size() && text_[pos_] == ')')
                throw ParseError(Errc::arity_mismatch, "R takes two arguments", at_line, at_col);
            expect(',');
            std::size_t w = variable();
            expect(')');
            return mk_atom(Formula::Kind::atom_r, v, w);
        }
        std::size_t v = variable();
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == ',')
            throw ParseError(Errc::arity_mismatch, id + " takes one argument", at_line, at_col);
        expect(')');
        if (id == "X") return mk_atom(Formula::Kind::atom_x, v);
        if (id == "Y") return mk_atom(Formula::Kind::atom_y, v);
        return mk_atom(Formula::Kind::atom_sym, v, 0, id);
    }

    std::string_view text_;
    std::size_t pos_ = 0, line_ = 1, col_ = 1;
};

}  // namespace detail

inline FormulaPtr parse_formula(std::string_view text) {
    return detail::FormulaParser(text).parse();
}

/// Canonical ASCII rendering; parse(to_string(f)) rebuilds the same tree.
inline std::string to_string(const Formula& f) {
    auto var = [](std::size_t v) { return "v" + std::to_string(v); };
    switch (f.kind) {
        case Formula::Kind::atom_x: return "X(" + var(f.var) + ")";
        case Formula::Kind::atom_y: return "Y(" + var(f.var) + ")";
        case Formula::Kind::atom_sym: return f.symbol + "(" + var(f.var) + ")";
        case Formula::Kind::atom_r: return "R(" + var(f.var) + "," + var(f.var2) + ")";
        case Formula::Kind::neg: return "~" + to_string(*f.lhs);
        case Formula::Kind::conj: return "(" + to_string(*f.lhs) + " & " + to_string(*f.rhs) + ")";
        case Formula::Kind::disj: return "(" + to_string(*f.lhs) + " | " + to_string(*f.rhs) + ")";
        case Formula::Kind::impl: return "(" + to_string(*f.lhs) + " -> " + to_string(*f.rhs) + ")";
        // quantifiers scope maximally, so they are always fenced off
        case Formula::Kind::forall: return "(forall " + var(f.var) + " " + to_string(*f.lhs) + ")";
        case Formula::Kind::exists: return "(exists " + var(f.var) + " " + to_string(*f.lhs) + ")";
    }
    return "?";
}

inline std::vector<std::string> symbols_of(const Formula& f) {
    std::vector<std::string> out;
    auto walk = [&](auto&& self, const Formula& g) -> void {
        if (g.kind == Formula::Kind::atom_sym) {
            for (const auto& s : out)
                if (s == g.symbol) return;
            out.push_back(g.symbol);
            return;
        }
        if (g.lhs) self(self, *g.lhs);
        if (g.rhs) self(self, *g.rhs);
    };
    walk(walk, f);
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------------------
// Structures and evaluation.

/// A polarity together with interpretations of expansion symbols as subsets
/// of the combined carrier (x elements are 0..nx-1, y elements follow).
struct ExpandedPolarity {
    PolarityPtr base;
    std::map<std::string, Bitset> interp;  // over the combined carrier

    explicit ExpandedPolarity(PolarityPtr p) : base(std::move(p)) {}

    std::size_t carrier_size() const { return base->nx() + base->ny(); }
    bool is_x(std::size_t u) const { return u < base->nx(); }
    bool is_y(std::size_t u) const { return u >= base->nx(); }
    std::size_t as_y(std::size_t u) const { return u - base->nx(); }

    void interpret_on_x(const std::string& name, const Bitset& over_x) {
        Bitset s(carrier_size());
        over_x.for_each([&](std::size_t x) { s.set(x); });
        interp[name] = std::move(s);
    }
    void interpret_on_y(const std::string& name, const Bitset& over_y) {
        Bitset s(carrier_size());
        over_y.for_each([&](std::size_t y) { s.set(base->nx() + y); });
        interp[name] = std::move(s);
    }

    std::string element_name(std::size_t u) const {
        return is_x(u) ? base->xnames()[u] : base->ynames()[as_y(u)];
    }
};

namespace detail {

/// Tarskian evaluation with per-quantifier memo tables keyed by the values
/// of the (at most two) free variables of the subformula.
class Evaluator {
public:
    Evaluator(const ExpandedPolarity& s, const Formula& root) : s_(s), root_(root) {}

    bool eval(std::vector<int>& assignment) { return eval_node(root_, assignment); }

private:
    bool eval_node(const Formula& f, std::vector<int>& asg) {
        switch (f.kind) {
            case Formula::Kind::atom_x: return s_.is_x(value(f.var, asg));
            case Formula::Kind::atom_y: return s_.is_y(value(f.var, asg));
            case Formula::Kind::atom_sym: {
                auto it = s_.interp.find(f.symbol);
                if (it == s_.interp.end())
                    throw Error(Errc::unknown_symbol, "no interpretation for '" + f.symbol + "'");
                return it->second.test(value(f.var, asg));
            }
            case Formula::Kind::atom_r: {
                std::size_t u = value(f.var, asg), w = value(f.var2, asg);
                return s_.is_x(u) && s_.is_y(w) && s_.base->rel(u, s_.as_y(w));
            }
            case Formula::Kind::neg: return !eval_node(*f.lhs, asg);
            case Formula::Kind::conj: return eval_node(*f.lhs, asg) && eval_node(*f.rhs, asg);
            case Formula::Kind::disj: return eval_node(*f.lhs, asg) || eval_node(*f.rhs, asg);
            case Formula::Kind::impl: return !eval_node(*f.lhs, asg) || eval_node(*f.rhs, asg);
            case Formula::Kind::forall:
            case Formula::Kind::exists: return eval_quant(f, asg);
        }
        return false;
    }

    std::size_t value(std::size_t var, const std::vector<int>& asg) {
        if (var >= asg.size() || asg[var] < 0)
            throw Error(Errc::unbound_variable, "v" + std::to_string(var) + " is unbound");
        return static_cast<std::size_t>(asg[var]);
    }

    bool eval_quant(const Formula& f, std::vector<int>& asg) {
        const std::size_t m = s_.carrier_size();
        // memo over free-variable values (only worthwhile with <= 2 free vars)
        std::vector<std::size_t> fv;
        for (std::size_t v = 0; v < 64; ++v)
            if ((f.free_mask >> v) & 1) fv.push_back(v);
        std::int8_t* slot = nullptr;
        if (fv.size() <= 2) {
            auto& tab = memo_[&f];
            std::size_t want = 1;
            for (std::size_t i = 0; i < fv.size(); ++i) want *= m;
            if (tab.empty()) tab.assign(std::max<std::size_t>(want, 1), -1);
            std::size_t key = 0;
            for (auto v : fv) key = key * m + value(v, asg);
            slot = &tab[key];
            if (*slot >= 0) return *slot != 0;
        }
        bool is_forall = f.kind == Formula::Kind::forall;
        bool result = is_forall;
        if (f.var >= asg.size()) asg.resize(f.var + 1, -1);
        int saved = asg[f.var];
        for (std::size_t u = 0; u < m; ++u) {
            asg[f.var] = static_cast<int>(u);
            bool b = eval_node(*f.lhs, asg);
            if (is_forall && !b) {
                result = false;
                break;
            }
            if (!is_forall && b) {
                result = true;
                break;
            }
        }
        asg[f.var] = saved;
        if (slot) *slot = result ? 1 : 0;
        return result;
    }

    const ExpandedPolarity& s_;
    const Formula& root_;
    std::unordered_map<const Formula*, std::vector<std::int8_t>> memo_;
};

}  // namespace detail

/// Evaluates the formula under an assignment of combined-carrier indices to
/// variables (-1 = unassigned). Quantifiers range over X u Y.
inline bool evaluate(const ExpandedPolarity& s, const Formula& f, std::vector<int> assignment) {
    if (assignment.size() < 64) assignment.resize(64, -1);
    for (std::size_t v = 0; v < 64; ++v)
        if (((f.free_mask >> v) & 1) && assignment[v] < 0)
            throw Error(Errc::unbound_variable, "v" + std::to_string(v) + " is unbound");
    return detail::Evaluator(s, f).eval(assignment);
}

/// {u in X u Y : s |= f[u]} for a formula with exactly one free variable.
inline Bitset definable_set(const ExpandedPolarity& s, const Formula& f) {
    std::vector<std::size_t> fv;
    for (std::size_t v = 0; v < 64; ++v)
        if ((f.free_mask >> v) & 1) fv.push_back(v);
    if (fv.size() != 1)
        throw Error(Errc::free_variable_count,
                    "expected exactly one free variable, found " + std::to_string(fv.size()));
    Bitset out(s.carrier_size());
    detail::Evaluator ev(s, f);
    std::vector<int> asg(64, -1);
    for (std::size_t u = 0; u < s.carrier_size(); ++u) {
        asg[fv[0]] = static_cast<int>(u);
        if (ev.eval(asg)) out.set(u);
    }
    return out;
}

/// Restriction of a combined-carrier subset to the X part.
inline Bitset restrict_to_x(const ExpandedPolarity& s, const Bitset& combined) {
    Bitset out(s.base->nx());
    combined.for_each([&](std::size_t u) {
        if (s.is_x(u)) out.set(u);
    });
    return out;
}

// ---------------------------------------------------------------------------
// The stock formulas of the polarity language.

// The stock formulas carry explicit sort guards. The guards only matter in
// the degenerate cases (an empty S, or a right set that is empty): without
// them the unsorted quantification over X u Y lets X elements slip into the
// inner sets and the defined set goes wrong exactly there.

/// forall v0 (S(v0) -> R(v0,v1)) — defines rho(S) within Y (free: v1).
inline FormulaPtr rho_formula(const std::string& sym = "S") {
    return parse_formula("forall v0 (" + sym + "(v0) -> R(v0,v1))");
}

/// forall v1 (Y(v1) & rhoS(v1) -> R(v2,v1)) — defines the closure of S
/// within X (free: v2).
inline FormulaPtr closure_formula(const std::string& sym = "S") {
    return parse_formula("forall v1 (Y(v1) & (forall v0 (" + sym +
                         "(v0) -> R(v0,v1))) -> R(v2,v1))");
}

/// The sentence asserting that S (a subset of X) is stable.
inline FormulaPtr stable_formula(const std::string& sym = "S") {
    return parse_formula("forall v2 (X(v2) & (forall v1 (Y(v1) & (forall v0 (" + sym +
                         "(v0) -> R(v0,v1))) -> R(v2,v1))) -> " + sym + "(v2))");
}

/// Defines the join (closure of the union) of S1 and S2 in the stable-set
/// lattice, within X (free: v0).
inline FormulaPtr join_formula(const std::string& s1 = "S1", const std::string& s2 = "S2") {
    return parse_formula("forall v1 (Y(v1) & (forall v2 ((" + s1 + "(v2) | " + s2 +
                         "(v2)) -> R(v2,v1))) -> R(v0,v1))");
}

/// The two standing sort axioms: everything is an X or a Y, and R relates
/// X elements to Y elements.
inline std::vector<FormulaPtr> sort_axioms() {
    return {parse_formula("forall v0 (X(v0) | Y(v0))"),
            parse_formula("forall v0 forall v1 (R(v0,v1) -> X(v0) & Y(v1))")};
}

}  // namespace latt
