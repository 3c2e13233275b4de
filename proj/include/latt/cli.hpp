#pragma once

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "latt/los.hpp"
#include "latt/suites.hpp"

namespace latt {

/// Command-line driver. Exit contract: 0 = success / everything verified,
/// 1 = a verification failed (witness printed), 2 = input or usage error.
/// Machine output (files, DOT, reports) goes to `out`; the effective
/// configuration and diagnostics go to `err`.
class Cli {
public:
    Cli(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

    int run(std::vector<std::string> args);

private:
    static constexpr int kOk = 0, kVerifyFail = 1, kInputError = 2;

    std::ostream& out_;
    std::ostream& err_;
    Config cfg_;
    std::string output_path_;

    void print_config() { err_ << "config: " << cfg_ << "\n"; }

    void emit(const std::string& content) {
        if (output_path_.empty())
            out_ << content;
        else
            write_file(output_path_, content);
    }

    PolarityPtr load_polarity(const std::string& path) {
        std::string text = read_file(path);
        if (!text.empty() && text[0] == 'B' && (text.size() == 1 || text[1] == '\n')) {
            std::istringstream in(text);
            return read_burmeister(in);
        }
        return polarity_from_json(parse_json_text(text, path));
    }

    LatticePtr load_lattice(const std::string& path) {
        return lattice_from_json(parse_json_text(read_file(path), path));
    }

    int cmd_stable_lattice(const std::string& path) {
        auto ssl = stable_set_lattice(load_polarity(path), cfg_);
        emit(dump_canonical(lattice_to_json(*ssl.lattice)));
        err_ << "extents: " << ssl.extents.size() << "\n";
        return kOk;
    }

    int cmd_macneille(const std::string& path) {
        auto L = load_lattice(path);
        auto c = macneille(L, cfg_);
        emit(dump_canonical(lattice_to_json(*c.target)));
        return report_completion(c, /*expect_surjective=*/true);
    }

    int cmd_canext(const std::string& path) {
        auto L = load_lattice(path);
        auto c = canonical_extension(L, cfg_);
        emit(dump_canonical(lattice_to_json(*c.target)));
        return report_completion(c, /*expect_surjective=*/true);
    }

    int report_completion(const Completion& c, bool expect_surjective) {
        auto d = is_dense(c);
        auto k = is_compact(c, cfg_);
        auto flags = analyze_map(c.embed, cfg_);
        err_ << "embedding:";
        for (std::size_t a = 0; a < c.source->size(); ++a)
            err_ << " " << c.source->name(a) << " -> " << c.target->name(c.e(a)) << ";";
        err_ << "\n";
        err_ << "dense: " << (d.dense ? "yes" : "no") << ", compact: " << (k.compact ? "yes" : "no")
             << ", embedding surjective: " << (flags.surjective ? "yes" : "no") << "\n";
        if (!k.exhaustive)
            err_ << "compactness sampled: seed=" << k.seed << " pairs=" << k.pairs_checked << "\n";
        if (!d.dense && d.witness)
            err_ << "density witness: " << c.target->name(*d.witness) << "\n";
        bool ok = d.dense && k.compact && (!expect_surjective || flags.surjective);
        return ok ? kOk : kVerifyFail;
    }

    int cmd_ultraproduct(const std::string& path, int at) {
        Family fam = family_from_json(parse_json_text(read_file(path), path));
        std::size_t principal = at >= 0 ? static_cast<std::size_t>(at) : fam.principal;
        if (principal >= fam.size()) throw Error(Errc::invalid_argument, "--at out of range");
        Ultrafilter u{fam.size(), principal};
        if (fam.is_polarity_family()) {
            auto pu = ultraproduct_polarities(fam.polarities, u, cfg_);
            emit(dump_canonical(polarity_to_json(*pu.ultra)));
        } else {
            auto lu = ultraproduct_lattices(fam.lattices, u, cfg_);
            emit(dump_canonical(lattice_to_json(*lu.ultra)));
            auto q = quotient_map(lu, cfg_);
            auto chk = check_quotient(lu, q, cfg_);
            err_ << "quotient map surjective hom: " << (chk.ok() ? "yes" : "no")
                 << (chk.exhaustive ? "" : " (sampled)") << "\n";
            if (!chk.ok()) return kVerifyFail;
        }
        return kOk;
    }

    int cmd_theta(const std::string& path, int at) {
        Family fam = family_from_json(parse_json_text(read_file(path), path));
        if (!fam.is_polarity_family())
            throw Error(Errc::invalid_argument, "theta needs a polarity family");
        std::size_t principal = at >= 0 ? static_cast<std::size_t>(at) : fam.principal;
        if (principal >= fam.size()) throw Error(Errc::invalid_argument, "--at out of range");
        auto th = theta_stable(fam.polarities, Ultrafilter{fam.size(), principal}, cfg_);
        std::ostringstream map;
        map << "theta:";
        for (std::size_t a = 0; a < th.lat_up.ultra->size(); ++a)
            map << " " << th.lat_up.ultra->name(a) << " -> "
                << th.target_ssl.lattice->name(th.theta(a)) << ";";
        map << "\n";
        emit(map.str());
        err_ << "injective: " << yn(th.injective) << ", hom: " << yn(th.hom)
             << ", bounds: " << yn(th.bounds_ok)
             << ", meets=intersections: " << yn(th.meets_are_intersections)
             << ", joins-by-formula: " << yn(th.joins_by_formula) << "\n";
        return th.all_ok() ? kOk : kVerifyFail;
    }

    static const char* yn(bool b) { return b ? "yes" : "no"; }

    int cmd_eval(const std::string& path, const std::string& formula_text,
                 const std::vector<std::string>& assigns, const std::vector<std::string>& interps) {
        ExpandedPolarity ex(load_polarity(path));
        FormulaPtr f = parse_formula(formula_text);
        for (const auto& spec : interps) apply_interp(ex, spec);
        std::vector<int> asg(64, -1);
        for (const auto& a : assigns) apply_assign(ex, asg, a);
        bool v = evaluate(ex, *f, asg);
        out_ << (v ? "true" : "false") << "\n";
        return kOk;
    }

    // --interp S=X:a,b  or  --interp T=Y:p,q  (empty set: "S=X:")
    void apply_interp(ExpandedPolarity& ex, const std::string& spec) {
        auto eq = spec.find('=');
        auto colon = spec.find(':', eq == std::string::npos ? 0 : eq);
        if (eq == std::string::npos || colon == std::string::npos)
            throw Error(Errc::invalid_argument, "--interp wants NAME=X:a,b or NAME=Y:a,b");
        std::string name = spec.substr(0, eq);
        std::string sort = spec.substr(eq + 1, colon - eq - 1);
        std::string rest = spec.substr(colon + 1);
        bool on_x = sort == "X" || sort == "x";
        if (!on_x && sort != "Y" && sort != "y")
            throw Error(Errc::invalid_argument, "--interp sort must be X or Y");
        const auto& names = on_x ? ex.base->xnames() : ex.base->ynames();
        Bitset s(names.size());
        std::istringstream ss(rest);
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (item.empty()) continue;
            s.set(index_in(names, item));
        }
        if (on_x)
            ex.interpret_on_x(name, s);
        else
            ex.interpret_on_y(name, s);
    }

    // --assign v0=X:a  or  v1=Y:b
    void apply_assign(const ExpandedPolarity& ex, std::vector<int>& asg, const std::string& spec) {
        auto eq = spec.find('=');
        auto colon = spec.find(':');
        if (eq == std::string::npos || colon == std::string::npos || spec[0] != 'v')
            throw Error(Errc::invalid_argument, "--assign wants vN=X:name or vN=Y:name");
        std::size_t var = std::stoul(spec.substr(1, eq - 1));
        std::string sort = spec.substr(eq + 1, colon - eq - 1);
        std::string name = spec.substr(colon + 1);
        if (var >= 64) throw Error(Errc::invalid_argument, "variable index above 63");
        if (sort == "X" || sort == "x")
            asg[var] = static_cast<int>(index_in(ex.base->xnames(), name));
        else if (sort == "Y" || sort == "y")
            asg[var] = static_cast<int>(ex.base->nx() + index_in(ex.base->ynames(), name));
        else
            throw Error(Errc::invalid_argument, "--assign sort must be X or Y");
    }

    static std::size_t index_in(const std::vector<std::string>& names, const std::string& n) {
        for (std::size_t i = 0; i < names.size(); ++i)
            if (names[i] == n) return i;
        throw Error(Errc::unknown_symbol, "no element named '" + n + "'");
    }

    int cmd_check_eq(const std::string& path, const std::string& eqspec) {
        auto L = load_lattice(path);
        std::vector<std::pair<TermPtr, TermPtr>> eqs;
        if (eqspec.find('=') != std::string::npos) {
            eqs.push_back(parse_equation(eqspec));
        } else {
            std::istringstream in(read_file(eqspec));
            eqs = read_equations(in);
        }
        bool all_hold = true;
        for (const auto& [s, t] : eqs) {
            auto res = check_equation(L, *s, *t, cfg_);
            out_ << to_string(*s) << " = " << to_string(*t) << ": ";
            if (res.holds) {
                out_ << "Holds\n";
            } else {
                out_ << "Fails at " << res.witness_string(*L) << "\n";
                all_hold = false;
            }
        }
        return all_hold ? kOk : kVerifyFail;
    }

    int cmd_dot(const std::string& path) {
        emit(to_dot(*load_lattice(path)));
        return kOk;
    }

    int cmd_convert(const std::string& path, const std::string& to) {
        auto p = load_polarity(path);
        if (to == "cxt") {
            std::ostringstream os;
            write_burmeister(os, *p);
            emit(os.str());
        } else if (to == "polarity") {
            emit(dump_canonical(polarity_to_json(*p)));
        } else {
            throw Error(Errc::invalid_argument, "--to must be cxt or polarity");
        }
        return kOk;
    }

    int cmd_verify(const std::string& suite, const std::string& corpus, std::uint64_t seed) {
        std::vector<SuiteResult> results;
        auto want = [&](const char* n) { return suite == "all" || suite == n; };
        if (want("galois-laws")) results.push_back(suites::galois_laws(cfg_, seed));
        if (want("stable-set-lattice")) results.push_back(suites::stable_lattice(cfg_, seed));
        if (want("decomposition")) results.push_back(suites::decomposition(cfg_, seed));
        if (want("macneille")) results.push_back(suites::macneille_suite(cfg_, seed));
        if (want("canonical-extension"))
            results.push_back(suites::canonical_extension_suite(cfg_, seed));
        if (want("map-extension")) results.push_back(suites::map_extension(cfg_, seed));
        if (want("ultraproduct-embedding"))
            results.push_back(suites::ultraproduct_embedding(cfg_, seed));
        if (want("los-transfer")) {
            std::istringstream in(read_file(corpus));
            results.push_back(suites::los_transfer(cfg_, seed, read_formula_corpus(in)));
        }
        if (want("product-extension")) results.push_back(suites::product_extension(cfg_, seed));
        if (want("ultrapower-macneille"))
            results.push_back(suites::ultrapower_macneille(cfg_, seed));
        if (want("canonicity-framework")) {
            auto r = suites::framework(cfg_, seed);
            results.push_back(r);
        }
        if (want("equations")) results.push_back(suites::equations(cfg_, seed));
        if (want("formats")) results.push_back(suites::formats(cfg_, seed));
        if (results.empty()) throw Error(Errc::invalid_argument, "unknown suite '" + suite + "'");

        bool all = true;
        for (const auto& r : results) {
            out_ << r.name << ": " << (r.pass ? "PASS" : "FAIL") << " (" << r.cases << " cases, "
                 << r.note << ")\n";
            for (const auto& f : r.failures) out_ << "  witness: " << f << "\n";
            all = all && r.pass;
        }
        return all ? kOk : kVerifyFail;
    }

    int cmd_framework_report(std::uint64_t) {
        std::vector<PolarityPtr> sample = {full_polarity(2, 2), empty_polarity(2, 2),
                                           identity_polarity(2), leq_polarity(3),
                                           identity_polarity(3)};
        auto rep = verify_framework_axioms(sample, cfg_);
        for (const auto& inst : rep.instances)
            out_ << (inst.pass ? "pass" : "FAIL") << " " << inst.axiom << " " << inst.subject
                 << " (" << inst.detail << ")\n";
        return rep.all_pass ? kOk : kVerifyFail;
    }
};

inline int Cli::run(std::vector<std::string> args) {
    CLI::App app{"finite-scale workbench for polarities, stable-set lattices, completions and "
                 "ultraproducts"};
    app.require_subcommand(1);
    app.fallthrough();  // global options may follow the subcommand
    std::uint64_t seed = cfg_.seed;
    app.add_option("--seed", seed, "seed for any sampling fallback");
    app.add_option("--iso-budget", cfg_.iso_node_budget, "isomorphism search node budget");
    app.add_option("--extent-bound", cfg_.extent_bound, "stable-set enumeration bound");
    app.add_option("--product-bound", cfg_.product_size_bound, "direct product carrier bound");
    app.add_option("--compact-budget", cfg_.compact_pair_budget,
                   "compactness subset-pair budget");
    app.add_option("--term-budget", cfg_.term_eval_budget, "equation assignment budget");
    app.add_option("-o,--output", output_path_, "write the primary output to this file");

    std::string in_path, formula_text, eq_spec, to_format = "polarity";
    std::string suite = "all", corpus = "data/formulas.corpus";
    int at = -1;
    std::vector<std::string> assigns, interps;

    auto* sl = app.add_subcommand("stable-lattice", "stable-set lattice of a polarity");
    sl->add_option("polarity", in_path)->required();

    auto* mc = app.add_subcommand("macneille", "MacNeille completion of a lattice");
    mc->add_option("lattice", in_path)->required();

    auto* cx = app.add_subcommand("canext", "canonical extension of a lattice");
    cx->add_option("lattice", in_path)->required();

    auto* up = app.add_subcommand("ultraproduct", "ultraproduct of a family file");
    up->add_option("family", in_path)->required();
    up->add_option("--at", at, "principal ultrafilter index");

    auto* th = app.add_subcommand("theta", "stable-set embedding for a polarity family");
    th->add_option("family", in_path)->required();
    th->add_option("--at", at, "principal ultrafilter index");

    auto* ev = app.add_subcommand("eval", "evaluate a formula over a polarity");
    ev->add_option("polarity", in_path)->required();
    ev->add_option("--formula", formula_text)->required();
    ev->add_option("--assign", assigns, "vN=X:name or vN=Y:name");
    ev->add_option("--interp", interps, "SYM=X:a,b or SYM=Y:a,b");

    auto* ce = app.add_subcommand("check-eq", "check lattice equations");
    ce->add_option("lattice", in_path)->required();
    ce->add_option("--equation", eq_spec, "equation string \"s = t\" or an equation file")
        ->required();

    auto* vf = app.add_subcommand("verify", "run a verification suite");
    vf->add_option("suite", suite, "suite name or 'all'");
    vf->add_option("--corpus", corpus, "formula corpus file for los-transfer");

    auto* fw = app.add_subcommand("framework", "canonicity-framework axiom report");

    auto* dt = app.add_subcommand("dot", "Hasse diagram (DOT) of a lattice");
    dt->add_option("lattice", in_path)->required();

    auto* cv = app.add_subcommand("convert", "convert between polarity formats");
    cv->add_option("input", in_path)->required();
    cv->add_option("--to", to_format, "cxt or polarity")->required();

    try {
        std::reverse(args.begin(), args.end());  // CLI11 parses reversed vectors
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {  // --help
            out_ << app.help();
            return kOk;
        }
        err_ << "error: " << e.what() << "\n";
        return kInputError;
    }

    cfg_.seed = seed;
    print_config();
    try {
        if (sl->parsed()) return cmd_stable_lattice(in_path);
        if (mc->parsed()) return cmd_macneille(in_path);
        if (cx->parsed()) return cmd_canext(in_path);
        if (up->parsed()) return cmd_ultraproduct(in_path, at);
        if (th->parsed()) return cmd_theta(in_path, at);
        if (ev->parsed()) return cmd_eval(in_path, formula_text, assigns, interps);
        if (ce->parsed()) return cmd_check_eq(in_path, eq_spec);
        if (vf->parsed()) return cmd_verify(suite, corpus, seed);
        if (fw->parsed()) return cmd_framework_report(seed);
        if (dt->parsed()) return cmd_dot(in_path);
        if (cv->parsed()) return cmd_convert(in_path, to_format);
    } catch (const Error& e) {
        err_ << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const std::exception& e) {
        err_ << "error: " << e.what() << "\n";
        return kInputError;
    }
    return kInputError;
}

inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    return Cli(out, err).run(std::move(args));
}

}  // namespace latt
