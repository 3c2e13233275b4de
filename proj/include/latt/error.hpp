#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace latt {

enum class Errc {
    not_a_partial_order,
    not_a_lattice,
    size_exceeded,
    timeout,
    not_stable,
    not_isotone,
    not_embedding,
    budget_exceeded,
    syntax_error,
    unknown_symbol,
    arity_mismatch,
    unbound_variable,
    free_variable_count,
    malformed_context,
    name_clash,
    invalid_argument,
    io_error,
};

inline const char* errc_name(Errc c) {
    switch (c) {
        case Errc::not_a_partial_order: return "NotAPartialOrder";
        case Errc::not_a_lattice: return "NotALattice";
        case Errc::size_exceeded: return "SizeExceeded";
        case Errc::timeout: return "Timeout";
        case Errc::not_stable: return "NotStable";
        case Errc::not_isotone: return "NotIsotone";
        case Errc::not_embedding: return "NotEmbedding";
        case Errc::budget_exceeded: return "BudgetExceeded";
        case Errc::syntax_error: return "SyntaxError";
        case Errc::unknown_symbol: return "UnknownSymbol";
        case Errc::arity_mismatch: return "ArityMismatch";
        case Errc::unbound_variable: return "UnboundVariable";
        case Errc::free_variable_count: return "FreeVariableCount";
        case Errc::malformed_context: return "MalformedContext";
        case Errc::name_clash: return "NameClash";
        case Errc::invalid_argument: return "InvalidArgument";
        case Errc::io_error: return "IoError";
    }
    return "?";
}

class Error : public std::runtime_error {
public:
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    Error(Errc code, const std::string& msg, std::size_t a = npos, std::size_t b = npos)
        : std::runtime_error(std::string(errc_name(code)) + ": " + msg),
          code(code),
          witness_a(a),
          witness_b(b) {}

    Errc code;
    // Witness element indices when the failure has a concrete pair (e.g. the
    // incomparable pair lacking a join), npos otherwise.
    std::size_t witness_a, witness_b;
};

class ParseError : public Error {
public:
    ParseError(Errc code, const std::string& msg, std::size_t line, std::size_t col)
        : Error(code, msg + " at " + std::to_string(line) + ":" + std::to_string(col)),
          line(line),
          col(col) {}

    std::size_t line, col;
};

}  // namespace latt
