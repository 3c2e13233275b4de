#pragma once

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "latt/formula.hpp"
#include "latt/lattice.hpp"
#include "latt/polarity.hpp"
#include "latt/term.hpp"

namespace latt {

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Structured lattice files.
//
// A JSON object with "elements" (list of names) and exactly one of "leq" or
// "covers" (lists of name pairs). The writer is canonical: element names
// sorted, cover pairs sorted, two-space indentation, trailing newline.

inline LatticePtr lattice_from_json(const json& j) {
    if (!j.is_object() || !j.contains("elements"))
        throw Error(Errc::io_error, "lattice file needs an \"elements\" list");
    std::vector<std::string> names = j.at("elements").get<std::vector<std::string>>();
    bool has_leq = j.contains("leq"), has_covers = j.contains("covers");
    if (has_leq == has_covers)
        throw Error(Errc::io_error, "lattice file needs exactly one of \"leq\" or \"covers\"");

    std::map<std::string, std::size_t> idx;
    for (std::size_t i = 0; i < names.size(); ++i)
        if (!idx.emplace(names[i], i).second)
            throw Error(Errc::name_clash, "duplicate element name '" + names[i] + "'");
    auto lookup = [&](const std::string& n) {
        auto it = idx.find(n);
        if (it == idx.end()) throw Error(Errc::io_error, "unknown element name '" + n + "'");
        return it->second;
    };

    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (const auto& pr : j.at(has_leq ? "leq" : "covers")) {
        if (!pr.is_array() || pr.size() != 2)
            throw Error(Errc::io_error, "relation entries must be [a,b] pairs");
        pairs.emplace_back(lookup(pr[0].get<std::string>()), lookup(pr[1].get<std::string>()));
    }

    const std::size_t n = names.size();
    if (has_covers) return lattice_from_covers(n, pairs, std::move(names));

    std::vector<Bitset> up(names.size(), Bitset(names.size()));
    for (auto [a, b] : pairs) up[a].set(b);
    return validate_lattice(up, std::move(names));
}

inline json lattice_to_json(const FiniteLattice& L) {
    std::vector<std::size_t> order(L.size());
    for (std::size_t i = 0; i < L.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return L.name(a) < L.name(b); });

    json j;
    json elems = json::array();
    for (auto i : order) elems.push_back(L.name(i));
    j["elements"] = std::move(elems);

    std::vector<std::pair<std::string, std::string>> covers;
    for (auto [a, b] : L.cover_pairs()) covers.emplace_back(L.name(a), L.name(b));
    std::sort(covers.begin(), covers.end());
    json cov = json::array();
    for (const auto& [a, b] : covers) cov.push_back(json::array({a, b}));
    j["covers"] = std::move(cov);
    return j;
}

// ---------------------------------------------------------------------------
// Structured polarity files: {"X": names, "Y": names, "R": [[x,y],...]}.

inline PolarityPtr polarity_from_json(const json& j) {
    if (!j.is_object() || !j.contains("X") || !j.contains("Y") || !j.contains("R"))
        throw Error(Errc::io_error, "polarity file needs \"X\", \"Y\" and \"R\"");
    auto xn = j.at("X").get<std::vector<std::string>>();
    auto yn = j.at("Y").get<std::vector<std::string>>();
    std::map<std::string, std::size_t> xi, yi;
    for (std::size_t i = 0; i < xn.size(); ++i)
        if (!xi.emplace(xn[i], i).second)
            throw Error(Errc::name_clash, "duplicate X name '" + xn[i] + "'");
    for (std::size_t i = 0; i < yn.size(); ++i)
        if (!yi.emplace(yn[i], i).second)
            throw Error(Errc::name_clash, "duplicate Y name '" + yn[i] + "'");
    Polarity p(xn, yn);
    for (const auto& pr : j.at("R")) {
        if (!pr.is_array() || pr.size() != 2)
            throw Error(Errc::io_error, "R entries must be [x,y] pairs");
        auto x = xi.find(pr[0].get<std::string>());
        auto y = yi.find(pr[1].get<std::string>());
        if (x == xi.end() || y == yi.end())
            throw Error(Errc::io_error, "R refers to an unknown name");
        p.relate(x->second, y->second);
    }
    return std::make_shared<Polarity>(std::move(p));
}

inline json polarity_to_json(const Polarity& p) {
    std::vector<std::size_t> xo(p.nx()), yo(p.ny());
    for (std::size_t i = 0; i < p.nx(); ++i) xo[i] = i;
    for (std::size_t i = 0; i < p.ny(); ++i) yo[i] = i;
    std::sort(xo.begin(), xo.end(),
              [&](std::size_t a, std::size_t b) { return p.xnames()[a] < p.xnames()[b]; });
    std::sort(yo.begin(), yo.end(),
              [&](std::size_t a, std::size_t b) { return p.ynames()[a] < p.ynames()[b]; });

    json j;
    json xs = json::array(), ys = json::array();
    for (auto i : xo) xs.push_back(p.xnames()[i]);
    for (auto i : yo) ys.push_back(p.ynames()[i]);
    j["X"] = std::move(xs);
    j["Y"] = std::move(ys);

    std::vector<std::pair<std::string, std::string>> rel;
    for (std::size_t x = 0; x < p.nx(); ++x)
        p.row_of_x(x).for_each([&](std::size_t y) { rel.emplace_back(p.xnames()[x], p.ynames()[y]); });
    std::sort(rel.begin(), rel.end());
    json r = json::array();
    for (const auto& [a, b] : rel) r.push_back(json::array({a, b}));
    j["R"] = std::move(r);
    return j;
}

// ---------------------------------------------------------------------------
// Burmeister formal-context format, read and written bit-exactly:
//
//   B\n \n |X|\n |Y|\n \n  (object names, one per line) (attribute names)
//   then |X| rows of '.'/'X' characters, trailing newline.

inline PolarityPtr read_burmeister(std::istream& in) {
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    std::size_t at = 0;
    auto need = [&](const char* what) -> const std::string& {
        if (at >= lines.size())
            throw Error(Errc::malformed_context, std::string("unexpected end of context: need ") + what);
        return lines[at++];
    };
    if (need("the header 'B'") != "B")
        throw Error(Errc::malformed_context, "context must start with 'B'");
    if (!need("a blank line").empty())
        throw Error(Errc::malformed_context, "line 2 must be blank");
    std::size_t nx, ny;
    try {
        nx = std::stoul(need("the object count"));
        ny = std::stoul(need("the attribute count"));
    } catch (const std::exception&) {
        throw Error(Errc::malformed_context, "bad carrier count");
    }
    if (!need("a blank line").empty())
        throw Error(Errc::malformed_context, "line 5 must be blank");

    std::vector<std::string> xn, yn;
    for (std::size_t i = 0; i < nx; ++i) xn.push_back(need("an object name"));
    for (std::size_t i = 0; i < ny; ++i) yn.push_back(need("an attribute name"));
    {
        std::map<std::string, int> seen;
        for (const auto& n : xn)
            if (++seen[n] > 1) throw Error(Errc::name_clash, "duplicate object name '" + n + "'");
        seen.clear();
        for (const auto& n : yn)
            if (++seen[n] > 1) throw Error(Errc::name_clash, "duplicate attribute name '" + n + "'");
    }

    Polarity p(std::move(xn), std::move(yn));
    for (std::size_t x = 0; x < nx; ++x) {
        const std::string& row = need("an incidence row");
        if (row.size() != ny)
            throw Error(Errc::malformed_context,
                        "row " + std::to_string(x + 1) + " has length " +
                            std::to_string(row.size()) + ", expected " + std::to_string(ny));
        for (std::size_t y = 0; y < ny; ++y) {
            if (row[y] == 'X')
                p.relate(x, y);
            else if (row[y] != '.')
                throw Error(Errc::malformed_context, "rows may contain only '.' and 'X'");
        }
    }
    if (at != lines.size()) throw Error(Errc::malformed_context, "trailing content after rows");
    return std::make_shared<Polarity>(std::move(p));
}

inline void write_burmeister(std::ostream& out, const Polarity& p) {
    out << "B\n\n" << p.nx() << "\n" << p.ny() << "\n\n";
    for (const auto& n : p.xnames()) out << n << "\n";
    for (const auto& n : p.ynames()) out << n << "\n";
    for (std::size_t x = 0; x < p.nx(); ++x) {
        for (std::size_t y = 0; y < p.ny(); ++y) out << (p.rel(x, y) ? 'X' : '.');
        out << "\n";
    }
}

// ---------------------------------------------------------------------------
// Family files: {"members": [payloads...], "ultrafilter": i}. A member with
// an "X" key is a polarity; one with "elements" is a lattice.

struct Family {
    std::vector<PolarityPtr> polarities;
    std::vector<LatticePtr> lattices;  // exactly one of the two is populated
    std::size_t principal = 0;

    bool is_polarity_family() const { return !polarities.empty(); }
    std::size_t size() const { return polarities.empty() ? lattices.size() : polarities.size(); }
};

inline Family family_from_json(const json& j) {
    if (!j.is_object() || !j.contains("members"))
        throw Error(Errc::io_error, "family file needs a \"members\" list");
    Family fam;
    for (const auto& m : j.at("members")) {
        if (m.contains("X"))
            fam.polarities.push_back(polarity_from_json(m));
        else if (m.contains("elements"))
            fam.lattices.push_back(lattice_from_json(m));
        else
            throw Error(Errc::io_error, "family member is neither a polarity nor a lattice");
    }
    if (!fam.polarities.empty() && !fam.lattices.empty())
        throw Error(Errc::io_error, "family mixes polarities and lattices");
    if (fam.size() == 0) throw Error(Errc::io_error, "family is empty");
    if (j.contains("ultrafilter")) {
        fam.principal = j.at("ultrafilter").get<std::size_t>();
        if (fam.principal >= fam.size())
            throw Error(Errc::io_error, "ultrafilter index out of range");
    }
    return fam;
}

// ---------------------------------------------------------------------------
// DOT export: covers only, nodes in element order, one rank group per
// height level. Deterministic output.

inline std::string to_dot(const FiniteLattice& L) {
    std::ostringstream os;
    os << "digraph lattice {\n  rankdir=BT;\n  node [shape=plaintext];\n";
    for (std::size_t i = 0; i < L.size(); ++i)
        os << "  n" << i << " [label=\"" << L.name(i) << "\"];\n";
    auto hs = L.heights();
    std::size_t maxh = 0;
    for (auto h : hs) maxh = std::max(maxh, h);
    for (std::size_t h = 0; h <= maxh; ++h) {
        os << "  { rank=same;";
        for (std::size_t i = 0; i < L.size(); ++i)
            if (hs[i] == h) os << " n" << i << ";";
        os << " }\n";
    }
    for (auto [a, b] : L.cover_pairs()) os << "  n" << a << " -> n" << b << ";\n";
    os << "}\n";
    return os.str();
}

// ---------------------------------------------------------------------------
// Formula corpus (one formula per line, '#' comments) and equation files
// (lines "s = t").

struct CorpusEntry {
    std::string text;
    FormulaPtr formula;
};

inline std::vector<CorpusEntry> read_formula_corpus(std::istream& in) {
    std::vector<CorpusEntry> out;
    std::string line;
    while (std::getline(in, line)) {
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::size_t a = line.find_first_not_of(" \t\r");
        if (a == std::string::npos) continue;
        std::size_t b = line.find_last_not_of(" \t\r");
        std::string text = line.substr(a, b - a + 1);
        out.push_back({text, parse_formula(text)});
    }
    return out;
}

inline std::vector<std::pair<TermPtr, TermPtr>> read_equations(std::istream& in) {
    std::vector<std::pair<TermPtr, TermPtr>> out;
    std::string line;
    while (std::getline(in, line)) {
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        out.push_back(parse_equation(line));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Filesystem helpers.

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::io_error, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Errc::io_error, "cannot write '" + path + "'");
    out << content;
}

inline json parse_json_text(const std::string& text, const std::string& what) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw Error(Errc::io_error, "malformed JSON in " + what);
    return j;
}

inline std::string dump_canonical(const json& j) { return j.dump(2) + "\n"; }

}  // namespace latt
