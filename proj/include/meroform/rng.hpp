#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "linear_map.hpp"
#include "poly.hpp"
#include "rational.hpp"

namespace meroform {

// Deterministic source of random rational objects. Everything randomized in
// the library and the CLI goes through one of these, seeded explicitly, so
// runs are reproducible from --seed.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::int64_t uniform(std::int64_t lo, std::int64_t hi)
    {
        return std::uniform_int_distribution<std::int64_t>(lo, hi)(eng_);
    }

    Rational rational(std::int64_t num_bound, std::int64_t den_bound)
    {
        return Rational(Integer(uniform(-num_bound, num_bound)),
                        Integer(uniform(1, den_bound)));
    }

    Rational nonzero_rational(std::int64_t num_bound, std::int64_t den_bound)
    {
        for (;;) {
            Rational q = rational(num_bound, den_bound);
            if (q != 0)
                return q;
        }
    }

    Monomial monomial(int nvars, int max_degree)
    {
        Monomial m(nvars);
        int budget = static_cast<int>(uniform(0, max_degree));
        for (int i = 0; i < budget; ++i)
            m.exps[static_cast<int>(uniform(0, nvars - 1))] += 1;
        return m;
    }

    Poly poly(int nvars, int max_degree, int terms, std::int64_t coeff_bound = 9)
    {
        Poly p(nvars);
        for (int t = 0; t < terms; ++t)
            p.add_term(monomial(nvars, max_degree), rational(coeff_bound, 4));
        return p;
    }

    Poly nonzero_poly(int nvars, int max_degree, int terms, std::int64_t coeff_bound = 9)
    {
        for (;;) {
            Poly p = poly(nvars, max_degree, terms, coeff_bound);
            if (!p.is_zero())
                return p;
        }
    }

    // Random line through the origin with small integer direction.
    LinearMapSpec line(int nvars, std::int64_t entry_bound = 9)
    {
        for (;;) {
            LinearMapSpec s(nvars, 1);
            bool nonzero = false;
            for (int i = 0; i < nvars; ++i) {
                s.m[i][0] = Integer(uniform(-entry_bound, entry_bound));
                if (s.m[i][0] != 0)
                    nonzero = true;
            }
            if (nonzero)
                return s;
        }
    }

    // Random 2-plane through the origin (independent columns).
    LinearMapSpec plane(int nvars, std::int64_t entry_bound = 9)
    {
        for (;;) {
            LinearMapSpec s(nvars, 2);
            for (int i = 0; i < nvars; ++i) {
                s.m[i][0] = Integer(uniform(-entry_bound, entry_bound));
                s.m[i][1] = Integer(uniform(-entry_bound, entry_bound));
            }
            if (s.columns_independent())
                return s;
        }
    }

    // Random 2-plane containing the given axis line (first column = axis).
    LinearMapSpec plane_through(const LinearMapSpec& axis, std::int64_t entry_bound = 9)
    {
        int n = axis.n_target;
        for (;;) {
            LinearMapSpec s(n, 2);
            for (int i = 0; i < n; ++i) {
                s.m[i][0] = axis.m[i][0];
                s.m[i][1] = Integer(uniform(-entry_bound, entry_bound));
            }
            if (s.columns_independent())
                return s;
        }
    }

    std::mt19937_64& engine() { return eng_; }

private:
    std::mt19937_64 eng_;
};

} // namespace meroform
