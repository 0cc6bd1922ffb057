#pragma once

#include <stdexcept>
#include <vector>

#include "jet.hpp"
#include "poly.hpp"
#include "rational.hpp"

namespace meroform {

// Rational linear map between coordinate spaces, stored as an
// n_target x n_source matrix whose columns are the images of the source
// basis vectors. Used for restricting germs to lines and 2-planes.
struct LinearMapSpec {
    int n_target = 0;
    int n_source = 0;
    std::vector<std::vector<Rational>> m; // m[i][j]: row i, column j

    LinearMapSpec() = default;

    LinearMapSpec(int target, int source)
        : n_target(target), n_source(source),
          m(target, std::vector<Rational>(source, Rational(0)))
    {
        if (target < 1 || source < 1)
            throw std::invalid_argument("linear map needs positive dimensions");
    }

    static LinearMapSpec identity(int n)
    {
        LinearMapSpec s(n, n);
        for (int i = 0; i < n; ++i)
            s.m[i][i] = 1;
        return s;
    }

    // Column of the matrix, i.e. the image of source basis vector j.
    std::vector<Rational> column(int j) const
    {
        std::vector<Rational> c(n_target);
        for (int i = 0; i < n_target; ++i)
            c[i] = m[i][j];
        return c;
    }

    // Composite map "first other, then this": matrix product this * other.
    LinearMapSpec compose(const LinearMapSpec& other) const
    {
        if (n_source != other.n_target)
            throw std::invalid_argument("linear map composition dimension mismatch");
        LinearMapSpec r(n_target, other.n_source);
        for (int i = 0; i < n_target; ++i)
            for (int j = 0; j < other.n_source; ++j) {
                Rational acc(0);
                for (int k = 0; k < n_source; ++k)
                    acc += m[i][k] * other.m[k][j];
                r.m[i][j] = acc;
            }
        return r;
    }

    // Exact rank via Gaussian elimination; restriction maps need full
    // column rank.
    int rank() const
    {
        auto a = m;
        int r = 0;
        for (int col = 0; col < n_source && r < n_target; ++col) {
            int pivot = -1;
            for (int i = r; i < n_target; ++i)
                if (a[i][col] != 0) {
                    pivot = i;
                    break;
                }
            if (pivot < 0)
                continue;
            std::swap(a[r], a[pivot]);
            for (int i = r + 1; i < n_target; ++i) {
                if (a[i][col] == 0)
                    continue;
                Rational f = a[i][col] / a[r][col];
                for (int j = col; j < n_source; ++j)
                    a[i][j] -= f * a[r][j];
            }
            ++r;
        }
        return r;
    }

    bool columns_independent() const { return rank() == n_source; }
};

// Exact composition p(M u): substitutes the linear forms M u for the
// variables of p. Result lives in the source coordinates.
inline Poly substitute_linear(const Poly& p, const LinearMapSpec& map)
{
    if (p.nvars() != map.n_target)
        throw std::invalid_argument("substitute_linear: polynomial/map dimension mismatch");
    int ns = map.n_source;
    // linear form for each original variable
    std::vector<Poly> forms;
    forms.reserve(map.n_target);
    for (int i = 0; i < map.n_target; ++i) {
        Poly f(ns);
        for (int j = 0; j < ns; ++j)
            f.add_term([&] {
                Monomial mo(ns);
                mo.exps[j] = 1;
                return mo;
            }(), map.m[i][j]);
        forms.push_back(std::move(f));
    }
    std::vector<std::vector<Poly>> powers(map.n_target);
    auto power_of = [&](int var, int e) -> const Poly& {
        auto& cache = powers[var];
        if (cache.empty())
            cache.push_back(Poly::constant(ns, 1));
        while (static_cast<int>(cache.size()) <= e)
            cache.push_back(cache.back() * forms[var]);
        return cache[e];
    };
    Poly r(ns);
    for (const auto& [mo, c] : p.terms()) {
        Poly term = Poly::constant(ns, c);
        for (int i = 0; i < p.nvars(); ++i)
            if (mo.exps[i] > 0)
                term = term * power_of(i, mo.exps[i]);
        r += term;
    }
    return r;
}

// Jets keep their order: the map is linear with no constant part, so degree
// filtration is preserved.
inline Jet substitute_linear(const Jet& j, const LinearMapSpec& map)
{
    return Jet(substitute_linear(j.poly(), map), j.order());
}

} // namespace meroform
