#pragma once

#include <string>
#include <vector>

#include "latt/formula.hpp"
#include "latt/ultra.hpp"

namespace latt {

/// The transfer check for one formula and one tuple of product functions:
/// truth at the classes in the expanded ultraproduct versus membership of
/// the truth set in the ultrafilter. `lemma` additionally compares, for the
/// lowest free variable, the theta image of the per-factor definable sets
/// with the set the formula defines in the ultraproduct.
struct LosReport {
    bool lhs = false;        // prod_U P'_i |= phi[f^U...]
    bool rhs = false;        // [[phi(f...)]] in U
    bool transfer_ok = false;
    bool lemma_applicable = false;
    bool lemma_ok = true;
    std::string detail;

    bool all_ok() const { return transfer_ok && (!lemma_applicable || lemma_ok); }
};

/// A family of expanded polarities (same symbol names in each factor)
/// destined for an ultraproduct.
struct ExpandedFamily {
    std::vector<ExpandedPolarity> factors;
    Ultrafilter U;
};

namespace detail {

/// Interprets every expansion symbol in the ultraproduct via the
/// equaliser-membership rule applied to the per-factor interpretations.
inline ExpandedPolarity expand_ultraproduct(const PolarityUltraproduct& pu,
                                            const std::vector<ExpandedPolarity>& factors) {
    ExpandedPolarity out(pu.ultra);
    if (factors.empty()) return out;
    for (const auto& [name, first_interp] : factors[0].interp) {
        (void)first_interp;
        Bitset s(out.carrier_size());
        for (std::size_t u = 0; u < pu.x_reps.size(); ++u) {
            Bitset member(factors.size());
            for (std::size_t i = 0; i < factors.size(); ++i) {
                auto it = factors[i].interp.find(name);
                if (it == factors[i].interp.end())
                    throw Error(Errc::unknown_symbol,
                                "factor lacks interpretation of '" + name + "'");
                if (it->second.test(pu.x_reps[u][i])) member.set(i);
            }
            if (pu.U.contains(member)) s.set(u);
        }
        for (std::size_t w = 0; w < pu.y_reps.size(); ++w) {
            Bitset member(factors.size());
            for (std::size_t i = 0; i < factors.size(); ++i) {
                const auto& interp = factors[i].interp.at(name);
                if (interp.test(factors[i].base->nx() + pu.y_reps[w][i])) member.set(i);
            }
            if (pu.U.contains(member)) s.set(pu.x_reps.size() + w);
        }
        out.interp[name] = std::move(s);
    }
    return out;
}

}  // namespace detail

/// Evaluates both sides of the transfer equivalence for `phi` and the given
/// tuple of product functions (one per free variable, each a per-factor
/// combined-carrier index, sort-uniform across factors).
inline LosReport check_los(const ExpandedFamily& fam, const Formula& phi,
                           const std::vector<std::pair<std::size_t, std::vector<std::size_t>>>& tuple,
                           const Config& cfg = {}) {
    const std::size_t k = fam.factors.size();
    if (k == 0 || k != fam.U.index_set_size)
        throw Error(Errc::invalid_argument, "family size does not match the ultrafilter");

    std::vector<PolarityPtr> bases;
    for (const auto& f : fam.factors) bases.push_back(f.base);
    auto pu = ultraproduct_polarities(bases, fam.U, cfg);
    ExpandedPolarity ultra = detail::expand_ultraproduct(pu, fam.factors);

    // classes of the tuple functions in the combined ultraproduct carrier
    std::vector<int> asg(64, -1);
    for (const auto& [var, fn] : tuple) {
        if (fn.size() != k) throw Error(Errc::arity_mismatch, "tuple function of wrong length");
        bool all_x = true, all_y = true;
        for (std::size_t i = 0; i < k; ++i) {
            if (fn[i] < fam.factors[i].base->nx())
                all_y = false;
            else
                all_x = false;
        }
        if (!all_x && !all_y)
            throw Error(Errc::invalid_argument,
                        "tuple function mixes the X and Y product carriers");
        if (all_x) {
            asg[var] = static_cast<int>(pu.x_class_of(fn));
        } else {
            std::vector<std::size_t> ys(k);
            for (std::size_t i = 0; i < k; ++i) ys[i] = fn[i] - fam.factors[i].base->nx();
            asg[var] = static_cast<int>(pu.x_reps.size() + pu.y_class_of(ys));
        }
    }

    LosReport rep;
    rep.lhs = evaluate(ultra, phi, asg);

    Bitset truth(k);
    for (std::size_t i = 0; i < k; ++i) {
        std::vector<int> fasg(64, -1);
        for (const auto& [var, fn] : tuple) fasg[var] = static_cast<int>(fn[i]);
        if (evaluate(fam.factors[i], phi, fasg)) truth.set(i);
    }
    rep.rhs = fam.U.contains(truth);
    rep.transfer_ok = rep.lhs == rep.rhs;

    // Definability route: the set phi defines (in its lowest free variable,
    // the others fixed by the tuple) factorwise, pushed through theta, must
    // equal the set it defines in the ultraproduct.
    std::vector<std::size_t> fv;
    for (std::size_t v = 0; v < 64; ++v)
        if ((phi.free_mask >> v) & 1) fv.push_back(v);
    if (!fv.empty()) {
        rep.lemma_applicable = true;
        std::size_t v0 = fv[0];

        std::vector<Bitset> alpha;
        for (std::size_t i = 0; i < k; ++i) {
            const auto& P = fam.factors[i];
            std::vector<int> fasg(64, -1);
            for (const auto& [var, fn] : tuple)
                if (var != v0) fasg[var] = static_cast<int>(fn[i]);
            Bitset s(P.base->nx());
            for (std::size_t x = 0; x < P.base->nx(); ++x) {
                fasg[v0] = static_cast<int>(x);
                if (evaluate(P, phi, fasg)) s.set(x);
            }
            alpha.push_back(std::move(s));
        }

        Bitset via_theta(pu.x_reps.size());
        for (std::size_t u = 0; u < pu.x_reps.size(); ++u) {
            Bitset member(k);
            for (std::size_t i = 0; i < k; ++i)
                if (alpha[i].test(pu.x_reps[u][i])) member.set(i);
            if (pu.U.contains(member)) via_theta.set(u);
        }

        Bitset in_ultra(pu.x_reps.size());
        std::vector<int> uasg = asg;
        for (std::size_t u = 0; u < pu.x_reps.size(); ++u) {
            uasg[v0] = static_cast<int>(u);
            if (evaluate(ultra, phi, uasg)) in_ultra.set(u);
        }
        rep.lemma_ok = via_theta == in_ultra;
    }
    return rep;
}

}  // namespace latt
