#pragma once

#include <cctype>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "latt/algebra.hpp"

namespace latt {

/// Bounded-lattice terms: variables, constants 0 and 1, binary ^ (meet) and
/// v (join), plus named extra-operation symbols f(t1,...,tk).
struct Term {
    enum class Kind { var, zero, one, meet, join, op };

    Kind kind;
    std::string name;  // variable or operation name
    std::vector<std::shared_ptr<const Term>> args;
};

using TermPtr = std::shared_ptr<const Term>;

namespace detail {

class TermParser {
public:
    explicit TermParser(std::string_view text) : text_(text) {}

    TermPtr parse() {
        auto t = join_level();
        skip_ws();
        if (pos_ != text_.size()) fail("trailing input");
        return t;
    }

private:
    [[noreturn]] void fail(const std::string& msg) {
        throw ParseError(Errc::syntax_error, msg, 1, col_);
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
            ++col_;
        }
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            ++col_;
            return true;
        }
        return false;
    }

    // 'v' is the join operator only when it stands alone
    bool eat_join() {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == 'v') {
            std::size_t end = pos_ + 1;
            if (end < text_.size() &&
                (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_'))
                return false;
            ++pos_;
            ++col_;
            return true;
        }
        return false;
    }

    TermPtr mk(Term::Kind k, std::string name = {}, std::vector<TermPtr> args = {}) {
        auto t = std::make_shared<Term>();
        t->kind = k;
        t->name = std::move(name);
        t->args = std::move(args);
        return t;
    }

    TermPtr join_level() {
        TermPtr l = meet_level();
        while (eat_join()) {
            TermPtr r = meet_level();  // sequence the sub-parse before the node
            l = mk(Term::Kind::join, "", {std::move(l), std::move(r)});
        }
        return l;
    }

    TermPtr meet_level() {
        TermPtr l = primary();
        while (eat('^')) {
            TermPtr r = primary();
            l = mk(Term::Kind::meet, "", {std::move(l), std::move(r)});
        }
        return l;
    }

    TermPtr primary() {
        skip_ws();
        if (pos_ >= text_.size()) fail("unexpected end of input");
        char c = text_[pos_];
        if (c == '(') {
            eat('(');
            auto t = join_level();
            if (!eat(')')) fail("expected ')'");
            return t;
        }
        if (c == '0') {
            eat('0');
            return mk(Term::Kind::zero);
        }
        if (c == '1') {
            eat('1');
            return mk(Term::Kind::one);
        }
        if (!std::isalpha(static_cast<unsigned char>(c)) && c != '_') fail("expected a term");
        std::size_t start = pos_;
        while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                       text_[pos_] == '_')) {
            ++pos_;
            ++col_;
        }
        std::string id(text_.substr(start, pos_ - start));
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == '(') {
            eat('(');
            std::vector<TermPtr> args;
            skip_ws();
            if (!eat(')')) {
                args.push_back(join_level());
                while (eat(',')) args.push_back(join_level());
                if (!eat(')')) fail("expected ')'");
            }
            return mk(Term::Kind::op, id, std::move(args));
        }
        return mk(Term::Kind::var, id);
    }

    std::string_view text_;
    std::size_t pos_ = 0, col_ = 1;
};

}  // namespace detail

inline TermPtr parse_term(std::string_view text) { return detail::TermParser(text).parse(); }

inline std::string to_string(const Term& t) {
    switch (t.kind) {
        case Term::Kind::var: return t.name;
        case Term::Kind::zero: return "0";
        case Term::Kind::one: return "1";
        case Term::Kind::meet: return "(" + to_string(*t.args[0]) + " ^ " + to_string(*t.args[1]) + ")";
        case Term::Kind::join: return "(" + to_string(*t.args[0]) + " v " + to_string(*t.args[1]) + ")";
        case Term::Kind::op: {
            std::string s = t.name + "(";
            for (std::size_t i = 0; i < t.args.size(); ++i) {
                if (i) s += ",";
                s += to_string(*t.args[i]);
            }
            return s + ")";
        }
    }
    return "?";
}

/// Variable names of a term, sorted (the canonical assignment-enumeration
/// order for equation checking).
inline void collect_vars(const Term& t, std::vector<std::string>& out) {
    if (t.kind == Term::Kind::var) {
        for (const auto& v : out)
            if (v == t.name) return;
        out.push_back(t.name);
        return;
    }
    for (const auto& a : t.args) collect_vars(*a, out);
}

inline std::size_t eval_term(const LatticeBasedAlgebra& A, const Term& t,
                             const std::map<std::string, std::size_t>& assignment) {
    const FiniteLattice& L = *A.lattice;
    switch (t.kind) {
        case Term::Kind::var: {
            auto it = assignment.find(t.name);
            if (it == assignment.end())
                throw Error(Errc::unbound_variable, "variable '" + t.name + "' is unbound");
            return it->second;
        }
        case Term::Kind::zero: return L.bottom();
        case Term::Kind::one: return L.top();
        case Term::Kind::meet:
            return L.meet(eval_term(A, *t.args[0], assignment), eval_term(A, *t.args[1], assignment));
        case Term::Kind::join:
            return L.join(eval_term(A, *t.args[0], assignment), eval_term(A, *t.args[1], assignment));
        case Term::Kind::op: {
            const Operation* op = A.find_op(t.name);
            if (!op) throw Error(Errc::unknown_symbol, "no operation named '" + t.name + "'");
            if (op->arity != t.args.size())
                throw Error(Errc::arity_mismatch, "'" + t.name + "' expects " +
                                                      std::to_string(op->arity) + " arguments");
            std::vector<std::size_t> args;
            for (const auto& a : t.args) args.push_back(eval_term(A, *a, assignment));
            return op->apply(L.size(), args);
        }
    }
    throw Error(Errc::invalid_argument, "bad term");
}

inline std::size_t eval_term(const FiniteLattice&, const Term&,
                             const std::map<std::string, std::size_t>&) = delete;

struct EquationResult {
    bool holds = false;
    std::vector<std::string> vars;               // sorted by name
    std::optional<std::vector<std::size_t>> witness;  // first failing assignment
    std::uint64_t assignments_checked = 0;

    std::string witness_string(const FiniteLattice& L) const {
        std::string s;
        for (std::size_t i = 0; i < vars.size(); ++i) {
            if (i) s += " ";
            s += vars[i] + "=" + L.name((*witness)[i]);
        }
        return s;
    }
};

/// Exhaustively checks s = t over all assignments, enumerated in
/// lexicographic order over the sorted variable names (first variable most
/// significant). The first failing assignment is the witness. Throws
/// BudgetExceeded when |carrier|^vars would exceed the configured budget.
inline EquationResult check_equation(const LatticeBasedAlgebra& A, const Term& s, const Term& t,
                                     const Config& cfg = {}) {
    EquationResult r;
    collect_vars(s, r.vars);
    collect_vars(t, r.vars);
    std::sort(r.vars.begin(), r.vars.end());

    const std::size_t n = A.lattice->size();
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < r.vars.size(); ++i) {
        if (n != 0 && total > cfg.term_eval_budget / n)
            throw Error(Errc::budget_exceeded,
                        "assignment count exceeds budget " + std::to_string(cfg.term_eval_budget));
        total *= n;
    }

    std::vector<std::size_t> asg(r.vars.size(), 0);
    std::map<std::string, std::size_t> amap;
    for (std::uint64_t k = 0; k < total; ++k) {
        std::uint64_t rem = k;
        for (std::size_t i = r.vars.size(); i-- > 0;) {
            asg[i] = static_cast<std::size_t>(rem % n);
            rem /= n;
        }
        amap.clear();
        for (std::size_t i = 0; i < r.vars.size(); ++i) amap[r.vars[i]] = asg[i];
        ++r.assignments_checked;
        if (eval_term(A, s, amap) != eval_term(A, t, amap)) {
            r.holds = false;
            r.witness = asg;
            return r;
        }
    }
    r.holds = true;
    return r;
}

inline EquationResult check_equation(LatticePtr L, const Term& s, const Term& t,
                                     const Config& cfg = {}) {
    return check_equation(LatticeBasedAlgebra(std::move(L)), s, t, cfg);
}

/// Parses a line "s = t" into the two terms.
inline std::pair<TermPtr, TermPtr> parse_equation(std::string_view line) {
    std::size_t eq = line.find('=');
    if (eq == std::string_view::npos)
        throw ParseError(Errc::syntax_error, "equation needs '='", 1, 1);
    return {parse_term(line.substr(0, eq)), parse_term(line.substr(eq + 1))};
}

}  // namespace latt
