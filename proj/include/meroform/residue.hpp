#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "decompose.hpp"
#include "errors.hpp"
#include "jet.hpp"
#include "mero_form.hpp"
#include "rng.hpp"

namespace meroform {

// Residue at the origin of (P/Q) dx for univariate P, Q with Q(0) = 0:
// write Q = x^m u with u a unit and read the coefficient of x^{m-1} in
// P u^{-1}. `order` caps the jet work and must be at least m-1.
inline Rational univariate_residue_at_origin(const Poly& p, const Poly& q, int order)
{
    if (p.nvars() != 1 || q.nvars() != 1)
        throw std::invalid_argument("univariate_residue_at_origin expects one variable");
    if (q.is_zero())
        throw math_error("univariate_residue_at_origin: zero denominator");
    int m = *q.order_of_vanishing();
    if (m == 0)
        throw math_error("univariate_residue_at_origin: denominator is a unit, no pole");
    if (order < m - 1)
        throw math_error("univariate_residue_at_origin: order too low (need >= " +
                         std::to_string(m - 1) + ")");
    // u = Q / x^m
    Poly u(1);
    for (const auto& [mo, c] : q.terms()) {
        Monomial shifted(1);
        shifted.exps[0] = mo.exps[0] - m;
        u.add_term(shifted, c);
    }
    Jet series = Jet(p, m - 1 >= 0 ? m - 1 : 0) * jet_inverse_unit(Jet(u, m - 1));
    Monomial target(1);
    target.exps[0] = m - 1;
    return series.poly().coeff(target);
}

// Rational linear embedding of a line (n x 1) or 2-plane (n x 2) through
// the origin; the restriction maps i_t.
struct PlaneSpec {
    LinearMapSpec embedding;
    std::string label;
};

// Pullback of a meromorphic form to the given line/plane; multiplicities
// are preserved component-wise. Degenerate embeddings (a component
// restricting to zero) are rejected.
inline MeroOneForm restrict_to_plane(const MeroOneForm& w, const PlaneSpec& plane)
{
    if (!plane.embedding.columns_independent())
        throw math_error("restrict_to_plane: embedding columns are dependent");
    return pullback_form(w, plane.embedding);
}

struct LineSample {
    LinearMapSpec line;
    bool degenerate = false;
    Rational residue{0};
    bool matches = false;
};

struct LineCheckReport {
    Rational expected{0}; // sum_i lambda_i * mult(f_i)
    std::vector<LineSample> samples;
    int usable = 0;
    int failures = 0;

    bool all_match() const { return usable > 0 && failures == 0; }
};

// For a generic line l through 0, res_0(l* omega) = sum_i lambda_i mult(f_i):
// l* dlog f_i picks up mult(f_i) and the exact part stays exact. The residue
// of the restriction is computed directly from eta (independent of the
// decomposition), so this is a genuine cross-check of the lambdas.
inline LineCheckReport line_multiplicity_check(const MeroOneForm& w, const Decomposition& d,
                                               int trials, std::uint64_t seed)
{
    if (static_cast<int>(d.lambdas.size()) != w.divisor.count())
        throw std::invalid_argument("line_multiplicity_check: lambda/divisor arity mismatch");
    LineCheckReport report;
    for (int i = 0; i < w.divisor.count(); ++i)
        report.expected +=
            d.lambdas[i] * Rational(*w.divisor.component(i).f.order_of_vanishing());

    Rng rng(seed);
    for (int t = 0; t < trials; ++t) {
        LineSample sample;
        sample.line = rng.line(w.nvars());
        // a line is degenerate when some component's vanishing order jumps
        bool degenerate = false;
        Poly denom = Poly::constant(1, 1);
        for (int i = 0; i < w.divisor.count(); ++i) {
            Poly fr = substitute_linear(w.divisor.component(i).f, sample.line);
            if (fr.is_zero() ||
                *fr.order_of_vanishing() != *w.divisor.component(i).f.order_of_vanishing()) {
                degenerate = true;
                break;
            }
            denom = denom * fr.pow(w.divisor.component(i).multiplicity);
        }
        if (degenerate) {
            sample.degenerate = true;
            report.samples.push_back(std::move(sample));
            continue;
        }
        OneForm restricted = pullback_form(w.eta, sample.line);
        int m = *denom.order_of_vanishing();
        sample.residue = univariate_residue_at_origin(restricted.coeff(0), denom, m);
        sample.matches = sample.residue == report.expected;
        ++report.usable;
        if (!sample.matches)
            ++report.failures;
        report.samples.push_back(std::move(sample));
    }
    if (report.usable == 0)
        throw math_error("line_multiplicity_check: all sampled lines were degenerate");
    return report;
}

enum class SampleStatus { ok, degenerate_plane, solver_failed };

inline const char* to_string(SampleStatus s)
{
    switch (s) {
    case SampleStatus::ok: return "ok";
    case SampleStatus::degenerate_plane: return "degenerate_plane";
    case SampleStatus::solver_failed: return "solver_failed";
    }
    return "?";
}

struct ResidueSample {
    PlaneSpec plane;
    std::vector<Rational> lambdas; // present iff status == ok
    SampleStatus status = SampleStatus::ok;
};

struct PencilReport {
    std::vector<ResidueSample> samples;
    int usable = 0;
    bool constant = false;
    std::optional<std::pair<int, int>> violating_pair; // sample indices
};

// Lemme-5 check: restrict omega to `samples` random rational 2-planes
// through a fixed random axis line and verify that the residues are the
// same exact rationals on every usable plane. Degenerate planes (component
// collapsing, coprimality lost, solver trouble) are skipped and reported.
inline PencilReport pencil_constancy_check(const MeroOneForm& w, int samples,
                                           std::uint64_t seed, int order)
{
    if (w.nvars() < 3)
        throw std::invalid_argument("pencil_constancy_check needs at least three variables");
    Rng rng(seed);
    LinearMapSpec axis = rng.line(w.nvars());
    PencilReport report;
    for (int s = 0; s < samples; ++s) {
        ResidueSample sample;
        sample.plane = PlaneSpec{rng.plane_through(axis), "pencil sample " + std::to_string(s)};
        try {
            MeroOneForm restricted = restrict_to_plane(w, sample.plane);
            DecomposeResult r = decompose(restricted, order);
            if (!r.solved()) {
                sample.status = SampleStatus::solver_failed;
            } else {
                sample.status = SampleStatus::ok;
                sample.lambdas = r.decomposition->lambdas;
                ++report.usable;
            }
        } catch (const math_error&) {
            sample.status = SampleStatus::degenerate_plane;
        }
        report.samples.push_back(std::move(sample));
    }
    if (report.usable < 2)
        throw math_error("pencil_constancy_check: fewer than 2 usable samples");
    report.constant = true;
    int first_ok = -1;
    for (std::size_t i = 0; i < report.samples.size(); ++i) {
        if (report.samples[i].status != SampleStatus::ok)
            continue;
        if (first_ok < 0) {
            first_ok = static_cast<int>(i);
            continue;
        }
        if (report.samples[i].lambdas != report.samples[first_ok].lambdas) {
            report.constant = false;
            report.violating_pair = {first_ok, static_cast<int>(i)};
            break;
        }
    }
    return report;
}

} // namespace meroform
