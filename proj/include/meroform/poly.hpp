#pragma once

#include <complex>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "monomial.hpp"
#include "rational.hpp"

namespace meroform {

// Sparse multivariate polynomial over Q. Terms are kept in a graded-lex
// ordered map with no stored zero coefficients; every exported operation
// returns a normalized value.
class Poly {
public:
    using TermMap = std::map<Monomial, Rational, GradedLexLess>;

    explicit Poly(int nvars) : nvars_(nvars)
    {
        if (nvars < 1)
            throw std::invalid_argument("Poly needs at least one variable");
    }

    static Poly zero(int nvars) { return Poly(nvars); }

    static Poly constant(int nvars, const Rational& c)
    {
        Poly p(nvars);
        if (c != 0)
            p.terms_.emplace(Monomial(nvars), c);
        return p;
    }

    static Poly variable(int nvars, int idx)
    {
        if (idx < 0 || idx >= nvars)
            throw std::invalid_argument("variable index out of range");
        Poly p(nvars);
        Monomial m(nvars);
        m.exps[idx] = 1;
        p.terms_.emplace(m, Rational(1));
        return p;
    }

    static Poly from_term(const Monomial& m, const Rational& c)
    {
        Poly p(m.nvars());
        if (c != 0)
            p.terms_.emplace(m, c);
        return p;
    }

    int nvars() const { return nvars_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }

    bool is_constant() const
    {
        return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_constant());
    }

    Rational constant_term() const
    {
        auto it = terms_.find(Monomial(nvars_));
        return it == terms_.end() ? Rational(0) : it->second;
    }

    Rational coeff(const Monomial& m) const
    {
        auto it = terms_.find(m);
        return it == terms_.end() ? Rational(0) : it->second;
    }

    // Accumulating insert; erases the entry when the sum cancels.
    void add_term(const Monomial& m, const Rational& c)
    {
        if (c == 0)
            return;
        if (m.nvars() != nvars_)
            throw std::invalid_argument("monomial variable-count mismatch");
        auto [it, inserted] = terms_.try_emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0)
                terms_.erase(it);
        }
    }

    // Total degree of the highest term; -1 for the zero polynomial.
    int total_degree() const
    {
        return terms_.empty() ? -1 : terms_.rbegin()->first.degree();
    }

    // Minimal total degree of a nonzero term; nullopt (infinite) for zero.
    std::optional<int> order_of_vanishing() const
    {
        if (terms_.empty())
            return std::nullopt;
        return terms_.begin()->first.degree();
    }

    // Greatest monomial in graded-lex; only valid on nonzero polynomials.
    const Monomial& leading_monomial() const
    {
        if (terms_.empty())
            throw std::logic_error("leading monomial of zero polynomial");
        return terms_.rbegin()->first;
    }

    Poly operator-() const
    {
        Poly r(nvars_);
        for (const auto& [m, c] : terms_)
            r.terms_.emplace(m, -c);
        return r;
    }

    Poly& operator+=(const Poly& o)
    {
        check_same_vars(o);
        for (const auto& [m, c] : o.terms_)
            add_term(m, c);
        return *this;
    }

    Poly& operator-=(const Poly& o)
    {
        check_same_vars(o);
        for (const auto& [m, c] : o.terms_)
            add_term(m, -c);
        return *this;
    }

    Poly operator+(const Poly& o) const
    {
        Poly r(*this);
        r += o;
        return r;
    }

    Poly operator-(const Poly& o) const
    {
        Poly r(*this);
        r -= o;
        return r;
    }

    Poly operator*(const Poly& o) const
    {
        check_same_vars(o);
        Poly r(nvars_);
        for (const auto& [ma, ca] : terms_)
            for (const auto& [mb, cb] : o.terms_)
                r.add_term(ma * mb, ca * cb);
        return r;
    }

    Poly operator*(const Rational& c) const
    {
        Poly r(nvars_);
        if (c == 0)
            return r;
        for (const auto& [m, cc] : terms_)
            r.terms_.emplace(m, cc * c);
        return r;
    }

    Poly pow(int e) const
    {
        if (e < 0)
            throw std::invalid_argument("negative polynomial power");
        Poly r = Poly::constant(nvars_, 1);
        for (int i = 0; i < e; ++i)
            r = r * (*this);
        return r;
    }

    bool operator==(const Poly& o) const { return nvars_ == o.nvars_ && terms_ == o.terms_; }
    bool operator!=(const Poly& o) const { return !(*this == o); }

    // Formal partial derivative with respect to variable var.
    Poly derivative(int var) const
    {
        if (var < 0 || var >= nvars_)
            throw std::invalid_argument("derivative index out of range");
        Poly r(nvars_);
        for (const auto& [m, c] : terms_) {
            if (m.exps[var] == 0)
                continue;
            Monomial d = m;
            d.exps[var] -= 1;
            r.terms_.emplace(d, c * m.exps[var]);
        }
        return r;
    }

    // Drops every term of total degree > order.
    Poly truncated(int order) const
    {
        Poly r(nvars_);
        for (const auto& [m, c] : terms_) {
            if (m.degree() > order)
                break; // graded order: everything after is higher degree
            r.terms_.emplace(m, c);
        }
        return r;
    }

    // Multiply by a single term, dropping products of degree > order.
    Poly shifted_truncated(const Monomial& shift, const Rational& c, int order) const
    {
        Poly r(nvars_);
        if (c == 0)
            return r;
        int room = order - shift.degree();
        for (const auto& [m, cc] : terms_) {
            if (m.degree() > room)
                break;
            r.terms_.emplace(m * shift, cc * c);
        }
        return r;
    }

    std::complex<double> evaluate(std::span<const std::complex<double>> point) const
    {
        if (static_cast<int>(point.size()) != nvars_)
            throw std::invalid_argument("evaluation point dimension mismatch");
        std::complex<double> acc{0.0, 0.0};
        for (const auto& [m, c] : terms_) {
            std::complex<double> t{numerator_of(c).convert_to<double>() /
                                   denominator_of(c).convert_to<double>()};
            for (int i = 0; i < nvars_; ++i)
                for (int e = 0; e < m.exps[i]; ++e)
                    t *= point[i];
            acc += t;
        }
        return acc;
    }

    // Exact evaluation with one variable substituted by a rational value;
    // result is a polynomial in the remaining variables (same indexing,
    // substituted slot forced to exponent 0).
    Poly substitute_value(int var, const Rational& value) const
    {
        if (var < 0 || var >= nvars_)
            throw std::invalid_argument("substitution index out of range");
        Poly r(nvars_);
        for (const auto& [m, c] : terms_) {
            Rational scaled = c;
            for (int e = 0; e < m.exps[var]; ++e)
                scaled *= value;
            Monomial mm = m;
            mm.exps[var] = 0;
            r.add_term(mm, scaled);
        }
        return r;
    }

    // Graded-lex rendering, leading term first: "2*x*y^2 - y^2".
    std::string to_string(const std::vector<std::string>& vars) const;

private:
    void check_same_vars(const Poly& o) const
    {
        if (nvars_ != o.nvars_)
            throw std::invalid_argument("polynomial variable-count mismatch");
    }

    int nvars_;
    TermMap terms_;
};

inline Poly operator*(const Rational& c, const Poly& p) { return p * c; }

inline std::string Poly::to_string(const std::vector<std::string>& vars) const
{
    if (static_cast<int>(vars.size()) != nvars_)
        throw std::invalid_argument("variable name list has wrong length");
    if (terms_.empty())
        return "0";
    std::string out;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [m, c] = *it;
        Rational a = c;
        if (out.empty()) {
            if (a < 0) {
                out += "-";
                a = -a;
            }
        } else {
            out += (a < 0) ? " - " : " + ";
            if (a < 0)
                a = -a;
        }
        std::string factors;
        for (int i = 0; i < nvars_; ++i) {
            if (m.exps[i] == 0)
                continue;
            if (!factors.empty())
                factors += "*";
            factors += vars[i];
            if (m.exps[i] > 1)
                factors += "^" + std::to_string(m.exps[i]);
        }
        if (factors.empty()) {
            out += meroform::to_string(a);
        } else if (a == 1) {
            out += factors;
        } else {
            out += meroform::to_string(a) + "*" + factors;
        }
    }
    return out;
}

} // namespace meroform
