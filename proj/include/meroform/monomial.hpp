#pragma once

#include <numeric>
#include <stdexcept>
#include <vector>

namespace meroform {

// Exponent vector of a power product. Length always equals the ambient
// variable count of whatever polynomial it lives in.
struct Monomial {
    std::vector<int> exps;

    Monomial() = default;
    explicit Monomial(std::vector<int> e) : exps(std::move(e)) {}
    explicit Monomial(int nvars) : exps(nvars, 0) {}

    int nvars() const { return static_cast<int>(exps.size()); }

    int degree() const { return std::accumulate(exps.begin(), exps.end(), 0); }

    bool is_constant() const
    {
        for (int e : exps)
            if (e != 0)
                return false;
        return true;
    }

    Monomial operator*(const Monomial& o) const
    {
        if (exps.size() != o.exps.size())
            throw std::invalid_argument("monomial variable-count mismatch");
        Monomial r(*this);
        for (std::size_t i = 0; i < exps.size(); ++i)
            r.exps[i] += o.exps[i];
        return r;
    }

    bool operator==(const Monomial& o) const { return exps == o.exps; }
    bool operator!=(const Monomial& o) const { return exps != o.exps; }
};

// Graded-lexicographic order with x1 > x2 > ... (the canonical term order
// used everywhere: deterministic output, golden files, normalization).
// "Less" compares by total degree first, then lexicographically.
struct GradedLexLess {
    bool operator()(const Monomial& a, const Monomial& b) const
    {
        int da = a.degree(), db = b.degree();
        if (da != db)
            return da < db;
        for (std::size_t i = 0; i < a.exps.size(); ++i) {
            if (a.exps[i] != b.exps[i])
                return a.exps[i] < b.exps[i];
        }
        return false;
    }
};

inline bool graded_lex_less(const Monomial& a, const Monomial& b)
{
    return GradedLexLess{}(a, b);
}

} // namespace meroform
