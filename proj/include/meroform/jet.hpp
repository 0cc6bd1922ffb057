#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "poly.hpp"

namespace meroform {

// Truncated power series: a polynomial whose terms of total degree > order
// are unspecified and dropped. Operations on jets of different orders carry
// order = min of the inputs.
class Jet {
public:
    Jet(Poly p, int order) : poly_(p.truncated(order)), order_(order)
    {
        if (order < 0)
            throw std::invalid_argument("jet order must be >= 0");
    }

    static Jet zero(int nvars, int order) { return Jet(Poly::zero(nvars), order); }

    static Jet constant(int nvars, const Rational& c, int order)
    {
        return Jet(Poly::constant(nvars, c), order);
    }

    const Poly& poly() const { return poly_; }
    int order() const { return order_; }
    int nvars() const { return poly_.nvars(); }
    bool is_zero() const { return poly_.is_zero(); }

    Jet truncated(int new_order) const
    {
        return Jet(poly_, std::min(order_, new_order));
    }

    Jet operator+(const Jet& o) const
    {
        return Jet(poly_ + o.poly_, std::min(order_, o.order_));
    }

    Jet operator-(const Jet& o) const
    {
        return Jet(poly_ - o.poly_, std::min(order_, o.order_));
    }

    Jet operator-() const { return Jet(-poly_, order_); }

    Jet operator*(const Jet& o) const
    {
        int ord = std::min(order_, o.order_);
        // truncated schoolbook product
        Poly r(poly_.nvars());
        for (const auto& [m, c] : poly_.terms()) {
            if (m.degree() > ord)
                break;
            r += o.poly_.shifted_truncated(m, c, ord);
        }
        return Jet(r, ord);
    }

    Jet operator*(const Rational& c) const { return Jet(poly_ * c, order_); }

    Jet operator*(const Poly& p) const { return Jet(poly_ * p, order_); }

    bool operator==(const Jet& o) const { return order_ == o.order_ && poly_ == o.poly_; }
    bool operator!=(const Jet& o) const { return !(*this == o); }

    // Formal partial derivative; trustworthy one degree less than the input.
    Jet derivative(int var) const
    {
        return Jet(poly_.derivative(var), std::max(order_ - 1, 0));
    }

private:
    Poly poly_;
    int order_;
};

// Multiplicative inverse of a unit jet (nonzero constant term), to the same
// order: u = c(1 + w) with w in the maximal ideal, so u^-1 = c^-1 sum (-w)^k.
inline Jet jet_inverse_unit(const Jet& u)
{
    Rational c = u.poly().constant_term();
    if (c == 0)
        throw std::invalid_argument("jet_inverse_unit: zero constant term, not a unit");
    int n = u.nvars();
    int ord = u.order();
    Poly w = (u.poly() * (Rational(1) / c) - Poly::constant(n, 1)).truncated(ord);
    Jet acc = Jet::constant(n, 1, ord);
    Jet pw = Jet::constant(n, 1, ord);
    Jet minus_w(-w, ord);
    for (int k = 1; k <= ord; ++k) {
        pw = pw * minus_w;
        if (pw.is_zero())
            break;
        acc = acc + pw;
    }
    return acc * (Rational(1) / c);
}

// Substitutes jets (one per variable, all with zero constant term) into a
// polynomial, truncating at `order`. The workhorse behind conjugations.
inline Jet substitute_jets(const Poly& p, const std::vector<Jet>& images, int order)
{
    if (static_cast<int>(images.size()) != p.nvars())
        throw std::invalid_argument("substitute_jets: one image jet per variable required");
    for (const auto& j : images)
        if (j.poly().constant_term() != 0)
            throw std::invalid_argument("substitute_jets: images must vanish at the origin");
    int n = images.empty() ? 1 : images[0].nvars();
    // per-variable power cache; images vanish at 0 so x_i^e contributes
    // nothing once e > order
    std::vector<std::vector<Jet>> powers(p.nvars());
    auto power_of = [&](int var, int e) -> const Jet& {
        auto& cache = powers[var];
        if (cache.empty())
            cache.push_back(Jet::constant(n, 1, order));
        while (static_cast<int>(cache.size()) <= e)
            cache.push_back(cache.back() * images[var]);
        return cache[e];
    };
    Jet acc = Jet::zero(n, order);
    for (const auto& [m, c] : p.terms()) {
        if (m.degree() > order)
            break;
        Jet term = Jet::constant(n, c, order);
        for (int i = 0; i < p.nvars(); ++i)
            if (m.exps[i] > 0)
                term = term * power_of(i, m.exps[i]);
        acc = acc + term;
    }
    return acc;
}

inline Jet substitute_jets(const Jet& g, const std::vector<Jet>& images, int order)
{
    return substitute_jets(g.poly(), images, std::min(order, g.order()));
}

} // namespace meroform
