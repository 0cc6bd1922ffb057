#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "linsolve.hpp"
#include "mero_form.hpp"

namespace meroform {

// Result of the partial-fraction decomposition
//   omega = sum_i lambda_i dlog f_i + d(G / prod f_i^{n_i}),
// with G pinned modulo Q*F by zeroing one designated monomial (by default
// the graded-lex leading monomial of F at the working order).
struct Decomposition {
    std::vector<Rational> lambdas;
    Jet G = Jet::zero(1, 0);
    Monomial normalization_monomial;
    bool g_suspected_polynomial = false;
    int valid_order = 0;
};

enum class SolveStatus { solved, inconsistent, order_too_low };

inline const char* to_string(SolveStatus s)
{
    switch (s) {
    case SolveStatus::solved: return "solved";
    case SolveStatus::inconsistent: return "inconsistent";
    case SolveStatus::order_too_low: return "order_too_low";
    }
    return "?";
}

struct SolveReport {
    SolveStatus status = SolveStatus::solved;
    OneForm residual = OneForm(1);
    int equations = 0;
    int unknowns = 0;
    int lambda_stable_from_order = -1;
    std::string diagnostic;
};

struct DecomposeResult {
    std::optional<Decomposition> decomposition;
    SolveReport report;

    bool solved() const { return report.status == SolveStatus::solved; }
};

namespace detail {

// graded-lex ascending list of all monomials of total degree <= max_degree
inline std::vector<Monomial> monomials_up_to(int nvars, int max_degree)
{
    std::vector<Monomial> out;
    Monomial cur(nvars);
    // enumerate degree by degree, lexicographic within a degree
    for (int d = 0; d <= max_degree; ++d) {
        std::vector<int> stack;
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
        rec(0, d);
    }
    std::sort(out.begin(), out.end(), GradedLexLess{});
    return out;
}

struct AssembledSystem {
    SparseLinearSolver solver;
    std::vector<Monomial> g_monomials;
    std::map<Monomial, int, GradedLexLess> g_col;
    int p;          // lambda count
    int lambda_base; // lambda_i lives in column lambda_base + i
};

// Coefficient-matching system for the cleared-denominator identity
//   eta = sum_i lambda_i A_i + P dG - G B,
// unknowns (lambda_1..lambda_p, coefficients of G up to degree `order`),
// one equation per dx_k-monomial of total degree <= order.
inline AssembledSystem assemble(const MeroOneForm& w, int order)
{
    int n = w.nvars();
    int p = w.divisor.count();
    std::vector<Monomial> gmons = monomials_up_to(n, order);
    // G columns first (the band), lambda columns last: elimination then
    // sweeps the band degree by degree instead of dragging the dense
    // lambda columns through every row.
    std::map<Monomial, int, GradedLexLess> gcol;
    for (std::size_t j = 0; j < gmons.size(); ++j)
        gcol.emplace(gmons[j], static_cast<int>(j));
    int lambda_base = static_cast<int>(gmons.size());
    int ncols = p + static_cast<int>(gmons.size());

    struct RowData {
        std::vector<std::pair<int, Rational>> entries;
        Rational rhs{0};
    };
    struct RowKeyLess {
        bool operator()(const std::pair<Monomial, int>& a,
                        const std::pair<Monomial, int>& b) const
        {
            int da = a.first.degree(), db = b.first.degree();
            if (da != db)
                return da < db;
            if (a.second != b.second)
                return a.second < b.second;
            return graded_lex_less(a.first, b.first);
        }
    };
    std::map<std::pair<Monomial, int>, RowData, RowKeyLess> rows;
    auto emit = [&](int k, const Monomial& m, int col, const Rational& c) {
        rows[{m, k}].entries.emplace_back(col, c);
    };

    for (int i = 0; i < p; ++i) {
        OneForm a = w.divisor.residue_term(i);
        for (int k = 0; k < n; ++k)
            for (const auto& [m, c] : a.coeff(k).terms()) {
                if (m.degree() > order)
                    break;
                emit(k, m, lambda_base + i, c);
            }
    }

    Poly radical = w.divisor.radical_product();
    OneForm correction = w.divisor.exact_part_correction();
    for (const auto& gm : gmons) {
        int col = gcol.at(gm);
        int gdeg = gm.degree();
        for (int k = 0; k < n; ++k) {
            if (gm.exps[k] > 0) {
                Monomial dm = gm;
                dm.exps[k] -= 1;
                Rational e(gm.exps[k]);
                int room = order - dm.degree();
                for (const auto& [m, c] : radical.terms()) {
                    if (m.degree() > room)
                        break;
                    emit(k, m * dm, col, c * e);
                }
            }
            const Poly& bk = correction.coeff(k);
            if (!bk.is_zero()) {
                int room = order - gdeg;
                for (const auto& [m, c] : bk.terms()) {
                    if (m.degree() > room)
                        break;
                    emit(k, m * gm, col, -c);
                }
            }
        }
    }

    for (int k = 0; k < n; ++k)
        for (const auto& [m, c] : w.eta.coeff(k).terms()) {
            if (m.degree() > order)
                break;
            rows[{m, k}].rhs = c;
        }

    AssembledSystem sys{SparseLinearSolver(ncols), std::move(gmons), std::move(gcol), p,
                        lambda_base};
    for (auto& [key, rd] : rows)
        sys.solver.add_row(std::move(rd.entries), rd.rhs);
    return sys;
}

struct RawSolve {
    bool consistent = false;
    bool lambda_unique = false;
    std::vector<Rational> lambdas;
    Poly g;
    int equations = 0;
    int unknowns = 0;

    RawSolve() : g(1) {}
};

inline RawSolve solve_at_order(const MeroOneForm& w, int order)
{
    AssembledSystem sys = assemble(w, order);
    RawSolve out;
    out.equations = sys.solver.equations();
    out.unknowns = sys.solver.columns();
    out.g = Poly::zero(w.nvars());
    if (!sys.solver.eliminate())
        return out;
    out.consistent = true;
    std::vector<Rational> values = sys.solver.solution();
    out.lambdas.assign(values.begin() + sys.lambda_base,
                       values.begin() + sys.lambda_base + sys.p);
    out.lambda_unique = true;
    for (int i = 0; i < sys.p; ++i)
        if (!sys.solver.is_value_unique(sys.lambda_base + i, out.lambdas[i])) {
            out.lambda_unique = false;
            break;
        }
    for (std::size_t j = 0; j < sys.g_monomials.size(); ++j)
        out.g.add_term(sys.g_monomials[j], values[j]);
    return out;
}

// G is pinned modulo Q*F; zero the coefficient of `mono` by subtracting the
// right multiple of F (truncated to the jet order).
inline Poly normalize_against(const Poly& g, const Poly& f_reduced, const Monomial& mono,
                              int order)
{
    Poly f_tr = f_reduced.truncated(order);
    Rational fm = f_tr.coeff(mono);
    if (fm == 0)
        throw math_error("normalization monomial has zero coefficient in F");
    Rational c = g.coeff(mono) / fm;
    return g - f_tr * c;
}

} // namespace detail

// Solves Theoreme 1 for a closed meromorphic 1-form: exact residues
// lambda_i and the jet G, matched for all total degrees <= order. The
// residues must re-solve identically at order+2 (recorded in the report);
// a disagreement or an underdetermined lambda reports order_too_low rather
// than guessing.
inline DecomposeResult decompose(const MeroOneForm& w, int order,
                                 std::optional<Monomial> normalization = std::nullopt)
{
    if (order < 0)
        throw std::invalid_argument("decompose: negative order");
    if (w.eta.validity() && *w.eta.validity() < order + 2)
        throw math_error("decompose: input jet validity is below the requested order");
    w.divisor.validate();
    ClosednessResult closed = closedness_check(w);
    if (!closed.closed)
        throw math_error("decompose: input form is not closed (precondition violation)");

    SolveReport report;
    report.residual = OneForm(w.nvars());

    detail::RawSolve first = detail::solve_at_order(w, order);
    report.equations = first.equations;
    report.unknowns = first.unknowns;
    if (!first.consistent) {
        report.status = SolveStatus::inconsistent;
        report.diagnostic =
            "master identity unsatisfiable at order " + std::to_string(order) +
            "; likely a divisor invariant violation (reducible component with "
            "branch-dependent residues) or a corrupted numerator";
        report.residual = w.eta;
        return {std::nullopt, report};
    }
    if (!first.lambda_unique) {
        report.status = SolveStatus::order_too_low;
        report.diagnostic = "residues are underdetermined at order " + std::to_string(order) +
                            "; raise the order";
        return {std::nullopt, report};
    }

    detail::RawSolve second = detail::solve_at_order(w, order + 2);
    if (!second.consistent || !second.lambda_unique || second.lambdas != first.lambdas) {
        report.status = SolveStatus::order_too_low;
        report.diagnostic = "residues did not stabilize between orders " +
                            std::to_string(order) + " and " + std::to_string(order + 2);
        return {std::nullopt, report};
    }

    Poly f_reduced = w.divisor.reduced_product();
    Monomial mono = normalization ? *normalization
                                  : f_reduced.truncated(order).leading_monomial();
    Poly g_norm = detail::normalize_against(first.g, f_reduced, mono, order);
    Poly g2_norm = detail::normalize_against(second.g, f_reduced, mono, order + 2);

    Decomposition dec;
    dec.lambdas = first.lambdas;
    dec.G = Jet(g_norm, order);
    dec.normalization_monomial = mono;
    dec.valid_order = order;
    dec.g_suspected_polynomial =
        g_norm.total_degree() <= order - 3 && g2_norm == g_norm;

    // independent re-verification of the identity
    MeroOneForm resynth = synthesize_form(dec.lambdas, dec.G, w.divisor);
    OneForm residual = (w.eta - resynth.eta).truncated(order);
    report.residual = residual;
    if (!residual.is_zero()) {
        report.status = SolveStatus::inconsistent;
        report.diagnostic = "solution failed re-verification";
        return {std::nullopt, report};
    }
    report.status = SolveStatus::solved;
    report.lambda_stable_from_order = order;
    return {dec, report};
}

// Re-derives eta from a claimed decomposition and reports the residual,
// truncated to the decomposition's valid order.
inline SolveReport verify_decomposition(const MeroOneForm& w, const Decomposition& d)
{
    if (static_cast<int>(d.lambdas.size()) != w.divisor.count())
        throw std::invalid_argument("verify_decomposition: lambda count does not match divisor");
    MeroOneForm resynth = synthesize_form(d.lambdas, d.G, w.divisor);
    OneForm residual = (w.eta - resynth.eta).truncated(d.valid_order);
    SolveReport report;
    report.residual = residual;
    report.lambda_stable_from_order = d.valid_order;
    if (residual.is_zero()) {
        report.status = SolveStatus::solved;
    } else {
        report.status = SolveStatus::inconsistent;
        report.diagnostic = "recomputed numerator differs from the input";
    }
    return report;
}

struct ExactnessResult {
    bool exact;
    Decomposition decomposition; // when exact, G/F is the primitive (up to a constant)
    SolveReport report;
};

// Lemme-3 test: a closed meromorphic form is exact iff every residue is
// zero, in which case G/F is a meromorphic primitive.
inline ExactnessResult is_exact_form(const MeroOneForm& w, int order)
{
    DecomposeResult r = decompose(w, order);
    if (!r.solved())
        throw math_error("is_exact_form: decomposition failed: " + r.report.diagnostic);
    bool exact = true;
    for (const auto& l : r.decomposition->lambdas)
        if (l != 0) {
            exact = false;
            break;
        }
    return ExactnessResult{exact, *r.decomposition, r.report};
}

} // namespace meroform
