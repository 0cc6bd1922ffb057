#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "jet.hpp"
#include "linsolve.hpp"
#include "monomial.hpp"
#include "poly.hpp"

namespace meroform {

// Witness for h = sum_i a_i g_i modulo degrees > order, with the vanishing
// order of each coefficient jet bounded below (the "which ideal are we
// really in" knob: constraint 2 puts the combination in m^2 <g_1, g_2>).
struct MembershipWitness {
    std::vector<Jet> coefficients;
    Jet target = Jet::zero(1, 0);
    int order = 0;
};

namespace detail {

inline std::vector<Monomial> monomials_of_degree(int nvars, int degree)
{
    std::vector<Monomial> out;
    Monomial cur(nvars);
    std::function<void(int, int)> rec = [&](int var, int left) {
        if (var == nvars - 1) {
            cur.exps[var] = left;
            out.push_back(cur);
            return;
        }
        for (int e = 0; e <= left; ++e) {
            cur.exps[var] = e;
            rec(var + 1, left - e);
        }
    };
    rec(0, degree);
    std::sort(out.begin(), out.end(), GradedLexLess{});
    return out;
}

} // namespace detail

// Decides, at the given jet order, whether h lies in the ideal generated by
// `generators` with coefficient jets of vanishing order >= the per-generator
// constraint. Exact linear algebra; "nullopt" means the truncated system is
// infeasible, which refutes membership at this order.
inline std::optional<MembershipWitness>
jet_ideal_membership(const Jet& h, const std::vector<Jet>& generators, int order,
                     const std::vector<int>& coeff_min_orders)
{
    if (h.nvars() != 2)
        throw std::invalid_argument("jet_ideal_membership is a two-variable operation");
    if (generators.size() != coeff_min_orders.size())
        throw std::invalid_argument("jet_ideal_membership: one constraint per generator");
    int n = h.nvars();
    struct Col {
        int gen;
        Monomial m;
    };
    std::vector<Col> cols;
    for (std::size_t i = 0; i < generators.size(); ++i) {
        const Poly& gi = generators[i].poly();
        if (gi.is_zero())
            continue;
        int lo = std::max(coeff_min_orders[i], 0);
        int hi = order - *gi.order_of_vanishing();
        for (int d = lo; d <= hi; ++d)
            for (const auto& m : detail::monomials_of_degree(n, d))
                cols.push_back({static_cast<int>(i), m});
    }

    std::map<Monomial, std::vector<std::pair<int, Rational>>, GradedLexLess> rows;
    std::map<Monomial, Rational, GradedLexLess> rhs;
    for (std::size_t j = 0; j < cols.size(); ++j) {
        const Poly& gi = generators[cols[j].gen].poly();
        int room = order - cols[j].m.degree();
        for (const auto& [m, c] : gi.terms()) {
            if (m.degree() > room)
                break;
            rows[m * cols[j].m].emplace_back(static_cast<int>(j), c);
        }
    }
    for (const auto& [m, c] : h.poly().terms()) {
        if (m.degree() > order)
            break;
        rhs[m] = c;
        rows.try_emplace(m); // make sure pure-rhs rows exist
    }

    SparseLinearSolver solver(static_cast<int>(cols.size()));
    for (auto& [m, entries] : rows) {
        auto it = rhs.find(m);
        solver.add_row(std::move(entries), it == rhs.end() ? Rational(0) : it->second);
    }
    if (!solver.eliminate())
        return std::nullopt;
    std::vector<Rational> values = solver.solution();

    MembershipWitness w;
    w.order = order;
    w.target = h.truncated(order);
    w.coefficients.assign(generators.size(), Jet::zero(n, order));
    std::vector<Poly> coeff_polys(generators.size(), Poly::zero(n));
    for (std::size_t j = 0; j < cols.size(); ++j)
        coeff_polys[cols[j].gen].add_term(cols[j].m, values[j]);
    Poly recombined = Poly::zero(n);
    for (std::size_t i = 0; i < generators.size(); ++i) {
        w.coefficients[i] = Jet(coeff_polys[i], order);
        recombined += coeff_polys[i] * generators[i].poly();
    }
    if (recombined.truncated(order) != w.target.poly())
        throw std::logic_error("jet_ideal_membership: witness failed re-verification");
    return w;
}

inline std::optional<MembershipWitness> jet_ideal_membership(const Jet& h,
                                                             const std::vector<Jet>& generators,
                                                             int order,
                                                             int coeff_constraint = 0)
{
    return jet_ideal_membership(h, generators, order,
                                std::vector<int>(generators.size(), coeff_constraint));
}

// Certificate that g is k-determined: every monomial of degree k+1 lies in
// m^2 J(g), witnessed explicitly and re-checked at an escalated jet order.
struct DeterminacyCertificate {
    int k = 0;
    std::map<Monomial, MembershipWitness, GradedLexLess> witnesses;
    int checked_order = 0;
};

// Smallest k <= max_k with m^{k+1} contained in m^2 J(g), decided on jets.
// Feasibility at a truncation order is monotone (adding equations only
// removes solutions), so two agreeing escalations settle membership for
// the finitely generated ideal.
inline std::optional<DeterminacyCertificate> determinacy_bound(const Poly& g, int max_k,
                                                               int slack = 4)
{
    if (g.nvars() != 2)
        throw std::invalid_argument("determinacy_bound is a two-variable operation");
    if (g.constant_term() != 0)
        throw math_error("determinacy_bound: g must vanish at the origin");
    std::vector<Poly> jacobian{g.derivative(0), g.derivative(1)};
    for (int k = 1; k <= max_k; ++k) {
        DeterminacyCertificate cert;
        cert.k = k;
        bool all_in = true;
        for (const auto& mono : detail::monomials_of_degree(2, k + 1)) {
            Jet target(Poly::from_term(mono, Rational(1)), k + 1);
            std::optional<MembershipWitness> accepted;
            int base = k + 1 + slack;
            for (int o = base; o <= base + 8; o += 2) {
                std::vector<Jet> gens{Jet(jacobian[0], o), Jet(jacobian[1], o)};
                auto first = jet_ideal_membership(target.truncated(o), gens, o, 2);
                std::vector<Jet> gens2{Jet(jacobian[0], o + 2), Jet(jacobian[1], o + 2)};
                auto second = jet_ideal_membership(target.truncated(o + 2), gens2, o + 2, 2);
                if (first.has_value() == second.has_value()) {
                    if (second) {
                        accepted = std::move(second);
                        cert.checked_order = o + 2;
                    }
                    break;
                }
            }
            if (!accepted) {
                all_in = false;
                break;
            }
            cert.witnesses.emplace(mono, std::move(*accepted));
        }
        if (all_in)
            return cert;
    }
    return std::nullopt;
}

// Formal coordinate change tangent to the identity, stored by the images of
// the variables.
struct Conjugation {
    std::vector<Jet> component_maps;
    int order = 0;

    static Conjugation identity(int nvars, int order)
    {
        Conjugation c;
        c.order = order;
        for (int i = 0; i < nvars; ++i)
            c.component_maps.push_back(Jet(Poly::variable(nvars, i), order));
        return c;
    }

    void check_invariants() const
    {
        int n = static_cast<int>(component_maps.size());
        for (int i = 0; i < n; ++i) {
            if (component_maps[i].poly().constant_term() != 0)
                throw std::invalid_argument("conjugation image has a constant term");
            for (int j = 0; j < n; ++j) {
                Monomial lin(n);
                lin.exps[j] = 1;
                Rational c = component_maps[i].poly().coeff(lin);
                if (c != (i == j ? 1 : 0))
                    throw std::invalid_argument("conjugation is not tangent to the identity");
            }
        }
    }
};

// g composed with phi, truncated.
inline Jet apply_conjugation(const Jet& g, const Conjugation& phi, int order)
{
    int cap = std::min({order, g.order(), phi.order});
    return substitute_jets(g.poly(), phi.component_maps, cap);
}

// Checks g . phi == g0 up to `order` by explicit jet composition.
inline bool verify_conjugation(const Jet& g, const Poly& g0, const Conjugation& phi, int order)
{
    phi.check_invariants();
    int cap = std::min({order, g.order(), phi.order});
    Jet composed = apply_conjugation(g, phi, cap);
    return composed.poly() == g0.truncated(cap);
}

struct NormalizeResult {
    Poly g0;
    Conjugation phi;
};

// Degree-by-degree removal of the tail above the k-jet: repeatedly witness
// the tail h as a1 dx(g) + a2 dy(g) with a_i in m^2 and substitute
// (x, y) -> (x - a1, y - a2). Each step must strictly raise the vanishing
// order of the tail (guaranteed by the stronger per-generator constraint
// ord a_i >= ord(tail) - ord(g_i); a plain m^2 witness is tried as a
// fallback and the progress check catches it if it stalls).
inline NormalizeResult normalize_to_finite_jet(const Jet& g, int k, int order)
{
    if (g.nvars() != 2)
        throw std::invalid_argument("normalize_to_finite_jet is a two-variable operation");
    if (k < 0 || order < k)
        throw std::invalid_argument("normalize_to_finite_jet: need 0 <= k <= order");
    if (g.order() < order)
        throw math_error("normalize_to_finite_jet: input jet order below requested order");

    Poly g0 = g.poly().truncated(k);
    Jet current = g.truncated(order);
    Conjugation phi = Conjugation::identity(2, order);

    for (;;) {
        Poly tail = current.poly() - g0;
        if (tail.is_zero())
            break;
        int t = *tail.order_of_vanishing();
        if (t <= k)
            throw math_error("normalize_to_finite_jet: iterate disagrees with the k-jet at degree " +
                             std::to_string(t));
        std::vector<Jet> gens{current.derivative(0).truncated(order),
                              current.derivative(1).truncated(order)};
        std::vector<int> strong(2, 2);
        for (int i = 0; i < 2; ++i) {
            auto ord_gi = gens[i].poly().order_of_vanishing();
            if (ord_gi)
                strong[i] = std::max(2, t - *ord_gi);
        }
        auto witness = jet_ideal_membership(Jet(tail, order), gens, order, strong);
        if (!witness)
            witness = jet_ideal_membership(Jet(tail, order), gens, order, 2);
        if (!witness)
            throw math_error("normalize_to_finite_jet: no membership witness for the tail at degree " +
                             std::to_string(t) + " (certificate invalid for this input)");
        std::vector<Jet> step{Jet(Poly::variable(2, 0) - witness->coefficients[0].poly(), order),
                              Jet(Poly::variable(2, 1) - witness->coefficients[1].poly(), order)};
        Jet next = substitute_jets(current.poly(), step, order);
        Poly next_tail = next.poly() - g0;
        if (!next_tail.is_zero() && *next_tail.order_of_vanishing() <= t)
            throw math_error("normalize_to_finite_jet: tail order did not increase at degree " +
                             std::to_string(t) + " (certificate invalid for this input)");
        current = next;
        for (auto& comp : phi.component_maps)
            comp = substitute_jets(comp.poly(), step, order);
    }

    if (!verify_conjugation(g, g0, phi, order))
        throw std::logic_error("normalize_to_finite_jet: conjugation failed final verification");
    return NormalizeResult{g0, phi};
}

} // namespace meroform
