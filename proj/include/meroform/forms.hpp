#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "jet.hpp"
#include "linear_map.hpp"
#include "poly.hpp"

namespace meroform {

// Degree up to which coefficients are trustworthy; nullopt means the data is
// exact polynomial. Every operation on jet-valued forms tracks this.
using Validity = std::optional<int>;

inline Validity validity_min(const Validity& a, const Validity& b)
{
    if (!a)
        return b;
    if (!b)
        return a;
    return std::min(*a, *b);
}

inline Validity validity_shift(const Validity& v, int delta)
{
    if (!v)
        return v;
    return std::max(*v + delta, 0);
}

inline Poly truncate_to(const Poly& p, const Validity& v)
{
    return v ? p.truncated(*v) : p;
}

// 1-form sum c_k dx_k with polynomial (or truncated) coefficients.
class OneForm {
public:
    explicit OneForm(int nvars, Validity validity = std::nullopt)
        : nvars_(nvars), coeffs_(nvars, Poly::zero(nvars)), validity_(validity)
    {
    }

    OneForm(std::vector<Poly> coeffs, Validity validity = std::nullopt)
        : nvars_(static_cast<int>(coeffs.size())), coeffs_(std::move(coeffs)),
          validity_(validity)
    {
        for (auto& c : coeffs_) {
            if (c.nvars() != nvars_)
                throw std::invalid_argument("OneForm coefficient dimension mismatch");
            c = truncate_to(c, validity_);
        }
    }

    int nvars() const { return nvars_; }
    Validity validity() const { return validity_; }
    const Poly& coeff(int k) const { return coeffs_.at(k); }
    const std::vector<Poly>& coeffs() const { return coeffs_; }

    void set_coeff(int k, Poly p)
    {
        if (p.nvars() != nvars_)
            throw std::invalid_argument("OneForm coefficient dimension mismatch");
        coeffs_.at(k) = truncate_to(p, validity_);
    }

    bool is_zero() const
    {
        for (const auto& c : coeffs_)
            if (!c.is_zero())
                return false;
        return true;
    }

    OneForm truncated(Validity v) const
    {
        Validity nv = validity_min(validity_, v);
        std::vector<Poly> cs;
        cs.reserve(coeffs_.size());
        for (const auto& c : coeffs_)
            cs.push_back(truncate_to(c, nv));
        return OneForm(std::move(cs), nv);
    }

    OneForm operator+(const OneForm& o) const
    {
        check(o);
        std::vector<Poly> cs;
        cs.reserve(coeffs_.size());
        for (int k = 0; k < nvars_; ++k)
            cs.push_back(coeffs_[k] + o.coeffs_[k]);
        return OneForm(std::move(cs), validity_min(validity_, o.validity_));
    }

    OneForm operator-(const OneForm& o) const
    {
        check(o);
        std::vector<Poly> cs;
        cs.reserve(coeffs_.size());
        for (int k = 0; k < nvars_; ++k)
            cs.push_back(coeffs_[k] - o.coeffs_[k]);
        return OneForm(std::move(cs), validity_min(validity_, o.validity_));
    }

    OneForm operator-() const
    {
        std::vector<Poly> cs;
        cs.reserve(coeffs_.size());
        for (const auto& c : coeffs_)
            cs.push_back(-c);
        return OneForm(std::move(cs), validity_);
    }

    OneForm operator*(const Rational& c) const
    {
        std::vector<Poly> cs;
        cs.reserve(coeffs_.size());
        for (const auto& cc : coeffs_)
            cs.push_back(cc * c);
        return OneForm(std::move(cs), validity_);
    }

    // Multiplication by a scalar function. Conservative validity: min of the
    // operands' validities (sharper bounds are computed at the call sites
    // that need them).
    OneForm scaled_by(const Poly& f, Validity f_validity = std::nullopt) const
    {
        Validity nv = validity_min(validity_, f_validity);
        std::vector<Poly> cs;
        cs.reserve(coeffs_.size());
        for (const auto& c : coeffs_)
            cs.push_back(truncate_to(c * f, nv));
        return OneForm(std::move(cs), nv);
    }

    bool operator==(const OneForm& o) const
    {
        return nvars_ == o.nvars_ && validity_ == o.validity_ && coeffs_ == o.coeffs_;
    }

private:
    void check(const OneForm& o) const
    {
        if (nvars_ != o.nvars_)
            throw std::invalid_argument("OneForm dimension mismatch");
    }

    int nvars_;
    std::vector<Poly> coeffs_;
    Validity validity_;
};

// 2-form with coefficients stored only for index pairs j < k.
class TwoForm {
public:
    using CoeffMap = std::map<std::pair<int, int>, Poly>;

    explicit TwoForm(int nvars, Validity validity = std::nullopt)
        : nvars_(nvars), validity_(validity)
    {
    }

    int nvars() const { return nvars_; }
    Validity validity() const { return validity_; }
    const CoeffMap& coeffs() const { return coeffs_; }

    Poly coeff(int j, int k) const
    {
        bool flip = j > k;
        if (flip)
            std::swap(j, k);
        auto it = coeffs_.find({j, k});
        if (it == coeffs_.end())
            return Poly::zero(nvars_);
        return flip ? -it->second : it->second;
    }

    // Accumulates c dx_j ^ dx_k, canonicalizing to j < k.
    void add(int j, int k, const Poly& p)
    {
        if (j == k || p.is_zero())
            return;
        Poly q = truncate_to(p, validity_);
        if (q.is_zero())
            return;
        if (j > k) {
            std::swap(j, k);
            q = -q;
        }
        auto [it, inserted] = coeffs_.try_emplace({j, k}, q);
        if (!inserted) {
            it->second += q;
            if (it->second.is_zero())
                coeffs_.erase(it);
        }
    }

    bool is_zero() const { return coeffs_.empty(); }

    TwoForm truncated(Validity v) const
    {
        TwoForm r(nvars_, validity_min(validity_, v));
        for (const auto& [jk, p] : coeffs_)
            r.add(jk.first, jk.second, p);
        return r;
    }

    TwoForm operator-(const TwoForm& o) const
    {
        TwoForm r(nvars_, validity_min(validity_, o.validity_));
        for (const auto& [jk, p] : coeffs_)
            r.add(jk.first, jk.second, p);
        for (const auto& [jk, p] : o.coeffs_)
            r.add(jk.first, jk.second, -p);
        return r;
    }

    bool operator==(const TwoForm& o) const
    {
        return nvars_ == o.nvars_ && validity_ == o.validity_ && coeffs_ == o.coeffs_;
    }

private:
    int nvars_;
    CoeffMap coeffs_;
    Validity validity_;
};

// d(sum c_k dx_k) = sum (d_j c_k - d_k c_j) dx_j ^ dx_k for j < k.
// Jet validity drops by one.
inline TwoForm exterior_derivative(const OneForm& w)
{
    TwoForm r(w.nvars(), validity_shift(w.validity(), -1));
    for (int j = 0; j < w.nvars(); ++j)
        for (int k = j + 1; k < w.nvars(); ++k)
            r.add(j, k, w.coeff(k).derivative(j) - w.coeff(j).derivative(k));
    return r;
}

inline TwoForm wedge(const OneForm& a, const OneForm& b)
{
    if (a.nvars() != b.nvars())
        throw std::invalid_argument("wedge dimension mismatch");
    TwoForm r(a.nvars(), validity_min(a.validity(), b.validity()));
    for (int j = 0; j < a.nvars(); ++j)
        for (int k = j + 1; k < a.nvars(); ++k)
            r.add(j, k, a.coeff(j) * b.coeff(k) - a.coeff(k) * b.coeff(j));
    return r;
}

// Gradient 1-form dh of a scalar function.
inline OneForm differential(const Poly& h)
{
    std::vector<Poly> cs;
    cs.reserve(h.nvars());
    for (int k = 0; k < h.nvars(); ++k)
        cs.push_back(h.derivative(k));
    return OneForm(std::move(cs));
}

inline OneForm differential(const Jet& h)
{
    std::vector<Poly> cs;
    cs.reserve(h.nvars());
    for (int k = 0; k < h.nvars(); ++k)
        cs.push_back(h.poly().derivative(k));
    return OneForm(std::move(cs), h.order() - 1 >= 0 ? Validity(h.order() - 1) : Validity(0));
}

// Pullback along a linear map: substitute in the coefficients and transform
// the basis covectors, dx_k = sum_j M[k][j] du_j.
inline OneForm pullback_form(const OneForm& w, const LinearMapSpec& map)
{
    if (w.nvars() != map.n_target)
        throw std::invalid_argument("pullback dimension mismatch");
    std::vector<Poly> cs(map.n_source, Poly::zero(map.n_source));
    for (int k = 0; k < map.n_target; ++k) {
        if (w.coeff(k).is_zero())
            continue;
        Poly sub = substitute_linear(w.coeff(k), map);
        for (int j = 0; j < map.n_source; ++j) {
            if (map.m[k][j] == 0)
                continue;
            cs[j] += sub * map.m[k][j];
        }
    }
    OneForm r(std::move(cs), w.validity());
    return r;
}

} // namespace meroform
