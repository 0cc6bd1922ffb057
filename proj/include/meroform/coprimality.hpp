#pragma once

#include <cstdint>
#include <vector>

#include "errors.hpp"
#include "linear_map.hpp"
#include "poly.hpp"
#include "rng.hpp"
#include "univariate.hpp"

namespace meroform {

enum class Coprimality { coprime_probable, common_factor_detected };

namespace detail {

// Coefficients of p viewed as a polynomial in variable `var`, each a
// univariate polynomial in the other variable (p must be bivariate).
inline std::vector<uni::UniPoly> coefficients_in(const Poly& p, int var)
{
    int other = 1 - var;
    std::vector<uni::UniPoly> coeffs;
    for (const auto& [m, c] : p.terms()) {
        int e = m.exps[var];
        if (static_cast<int>(coeffs.size()) <= e)
            coeffs.resize(e + 1);
        auto& up = coeffs[e];
        int d = m.exps[other];
        if (static_cast<int>(up.size()) <= d)
            up.resize(d + 1, Rational(0));
        up[d] += c;
    }
    for (auto& up : coeffs)
        uni::normalize(up);
    return coeffs;
}

inline uni::UniPoly content_in_y(const std::vector<uni::UniPoly>& coeffs)
{
    uni::UniPoly g;
    for (const auto& c : coeffs)
        g = uni::gcd(g, c);
    return g;
}

inline uni::UniPoly evaluate_in_x(const std::vector<uni::UniPoly>& coeffs, const Rational& x0)
{
    uni::UniPoly r(coeffs.size(), Rational(0));
    for (std::size_t e = 0; e < coeffs.size(); ++e)
        r[e] = uni::eval(coeffs[e], x0);
    uni::normalize(r);
    return r;
}

// Decides exactly whether two bivariate polynomials share a nonconstant
// factor. The y-content (an x-only gcd) catches common factors free of y;
// common factors of positive y-degree are equivalent to the resultant in y
// of the primitive parts being identically zero, which is decided by
// sampling the resultant at more rational points than its x-degree bound.
inline bool bivariate_common_factor(const Poly& f, const Poly& g)
{
    if (f.nvars() != 2 || g.nvars() != 2)
        throw std::invalid_argument("bivariate_common_factor expects two variables");
    if (f.is_zero() || g.is_zero())
        return true;

    auto fc = coefficients_in(f, 1); // coefficients in y, entries in x
    auto gc = coefficients_in(g, 1);
    uni::UniPoly cont_f = content_in_y(fc);
    uni::UniPoly cont_g = content_in_y(gc);
    if (uni::degree(uni::gcd(cont_f, cont_g)) >= 1)
        return true;

    // primitive parts
    auto fp = fc;
    for (auto& c : fp)
        if (!uni::is_zero(c))
            c = uni::quotient_exact(c, cont_f);
    auto gp = gc;
    for (auto& c : gp)
        if (!uni::is_zero(c))
            c = uni::quotient_exact(c, cont_g);

    int dy_f = static_cast<int>(fp.size()) - 1;
    int dy_g = static_cast<int>(gp.size()) - 1;
    if (dy_f < 1 || dy_g < 1)
        return false; // a common factor would have to divide a y-free primitive part

    int dx_f = 0, dx_g = 0;
    for (const auto& c : fp)
        dx_f = std::max(dx_f, uni::degree(c));
    for (const auto& c : gp)
        dx_g = std::max(dx_g, uni::degree(c));
    // degree bound for Res_y(fp, gp) as a polynomial in x
    int bound = dy_f * dx_g + dy_g * dx_f;

    int usable = 0;
    for (std::int64_t k = 0; usable <= bound; ++k) {
        Rational x0(k);
        if (uni::eval(fp.back(), x0) == 0 || uni::eval(gp.back(), x0) == 0)
            continue; // leading coefficient drops: resultant sample unreliable
        uni::UniPoly fe = evaluate_in_x(fp, x0);
        uni::UniPoly ge = evaluate_in_x(gp, x0);
        if (uni::degree(uni::gcd(fe, ge)) < 1)
            return false; // resultant nonzero at a good sample: certainly coprime
        ++usable;
    }
    // more good samples than the resultant's degree, all vanishing
    return true;
}

} // namespace detail

// Validates the pairwise-coprimality precondition on pole components.
// Exact in two variables; in higher dimension restricts both germs to
// `trials` random rational 2-planes and reports a common factor only when
// every restriction shows one (one-sided: common_factor_detected is certain
// for polynomial inputs, coprime_probable can be wrong with negligible
// probability).
inline Coprimality coprimality_probe(const Poly& f, const Poly& g, int trials,
                                     std::uint64_t seed)
{
    if (f.nvars() != g.nvars())
        throw std::invalid_argument("coprimality_probe: variable-count mismatch");
    for (const Poly* p : {&f, &g}) {
        if (p->is_zero())
            throw math_error("coprimality_probe: zero input");
        if (p->constant_term() != 0)
            throw math_error("coprimality_probe: input does not vanish at the origin");
        if (p->is_constant())
            throw math_error("coprimality_probe: input is a unit");
    }
    int n = f.nvars();
    if (n == 1)
        return Coprimality::common_factor_detected; // both divisible by the variable
    if (n == 2) {
        return detail::bivariate_common_factor(f, g)
                   ? Coprimality::common_factor_detected
                   : Coprimality::coprime_probable;
    }
    Rng rng(seed);
    if (trials < 1)
        trials = 1;
    for (int t = 0; t < trials; ++t) {
        Poly fr(2), gr(2);
        // resample planes that kill either germ outright
        for (int attempt = 0;; ++attempt) {
            LinearMapSpec plane = rng.plane(n);
            fr = substitute_linear(f, plane);
            gr = substitute_linear(g, plane);
            if (!fr.is_zero() && !gr.is_zero())
                break;
            if (attempt > 64)
                throw math_error("coprimality_probe: could not find a non-degenerate plane");
        }
        if (!detail::bivariate_common_factor(fr, gr))
            return Coprimality::coprime_probable;
    }
    return Coprimality::common_factor_detected;
}

} // namespace meroform
