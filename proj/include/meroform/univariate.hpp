#pragma once

#include <stdexcept>
#include <vector>

#include "poly.hpp"
#include "rational.hpp"

namespace meroform {

// Dense univariate polynomials over Q, ascending degree, no trailing zeros.
// Internal support for the coprimality probe; not part of the public surface.
namespace uni {

using UniPoly = std::vector<Rational>;

inline void normalize(UniPoly& p)
{
    while (!p.empty() && p.back() == 0)
        p.pop_back();
}

inline int degree(const UniPoly& p) { return static_cast<int>(p.size()) - 1; }
inline bool is_zero(const UniPoly& p) { return p.empty(); }

inline UniPoly sub_scaled(const UniPoly& a, const UniPoly& b, const Rational& c, int shift)
{
    UniPoly r = a;
    if (r.size() < b.size() + shift)
        r.resize(b.size() + shift, Rational(0));
    for (std::size_t i = 0; i < b.size(); ++i)
        r[i + shift] -= c * b[i];
    normalize(r);
    return r;
}

inline UniPoly remainder(UniPoly a, const UniPoly& b)
{
    if (is_zero(b))
        throw std::invalid_argument("univariate remainder by zero");
    normalize(a);
    while (!is_zero(a) && degree(a) >= degree(b)) {
        Rational c = a.back() / b.back();
        a = sub_scaled(a, b, c, degree(a) - degree(b));
    }
    return a;
}

inline UniPoly monic(UniPoly p)
{
    normalize(p);
    if (is_zero(p))
        return p;
    Rational lead = p.back();
    for (auto& c : p)
        c /= lead;
    return p;
}

inline UniPoly gcd(UniPoly a, UniPoly b)
{
    normalize(a);
    normalize(b);
    while (!is_zero(b)) {
        UniPoly r = remainder(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return monic(std::move(a));
}

// Exact quotient; throws if the division is not exact.
inline UniPoly quotient_exact(UniPoly a, const UniPoly& b)
{
    if (is_zero(b))
        throw std::invalid_argument("univariate division by zero");
    normalize(a);
    UniPoly q(a.size(), Rational(0));
    while (!is_zero(a) && degree(a) >= degree(b)) {
        Rational c = a.back() / b.back();
        int shift = degree(a) - degree(b);
        q[shift] = c;
        a = sub_scaled(a, b, c, shift);
    }
    if (!is_zero(a))
        throw std::logic_error("univariate division not exact");
    normalize(q);
    return q;
}

inline Rational eval(const UniPoly& p, const Rational& x)
{
    Rational acc(0);
    for (auto it = p.rbegin(); it != p.rend(); ++it)
        acc = acc * x + *it;
    return acc;
}

// One-variable Poly -> dense coefficients in the given variable index.
inline UniPoly from_poly(const Poly& p, int var)
{
    UniPoly r;
    for (const auto& [m, c] : p.terms()) {
        for (int i = 0; i < m.nvars(); ++i)
            if (i != var && m.exps[i] != 0)
                throw std::invalid_argument("from_poly: polynomial is not univariate in the given variable");
        int e = m.exps[var];
        if (static_cast<int>(r.size()) <= e)
            r.resize(e + 1, Rational(0));
        r[e] += c;
    }
    normalize(r);
    return r;
}

} // namespace uni
} // namespace meroform
