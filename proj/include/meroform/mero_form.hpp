#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "coprimality.hpp"
#include "errors.hpp"
#include "forms.hpp"
#include "jet.hpp"
#include "poly.hpp"

namespace meroform {

// One pole component f with pole multiplicity m = n + 1 >= 1. The component
// is kept in the presentation the user supplied; nothing here factors.
struct DivisorComponent {
    Poly f;
    int multiplicity;

    int exact_part_power() const { return multiplicity - 1; } // the paper's n_i
};

// Formal product f_1^{m_1} ... f_p^{m_p} of pole components.
class PoleDivisor {
public:
    PoleDivisor() = default;

    explicit PoleDivisor(std::vector<DivisorComponent> comps) : comps_(std::move(comps)) {}

    const std::vector<DivisorComponent>& components() const { return comps_; }
    int count() const { return static_cast<int>(comps_.size()); }
    const DivisorComponent& component(int i) const { return comps_.at(i); }

    int nvars() const
    {
        if (comps_.empty())
            throw std::logic_error("empty pole divisor");
        return comps_[0].f.nvars();
    }

    // Component sanity plus the pairwise coprimality probe. The probe seed is
    // fixed so validation is deterministic.
    void validate(int probe_trials = 3, std::uint64_t probe_seed = 0x5eed) const
    {
        if (comps_.empty())
            throw math_error("pole divisor has no components");
        for (const auto& c : comps_) {
            if (c.multiplicity < 1)
                throw math_error("pole multiplicity must be >= 1");
            if (c.f.is_zero())
                throw math_error("pole component is the zero polynomial");
            if (c.f.constant_term() != 0)
                throw math_error("pole component does not vanish at the origin");
            if (c.f.nvars() != comps_[0].f.nvars())
                throw std::invalid_argument("pole components live in different variable counts");
        }
        for (std::size_t i = 0; i < comps_.size(); ++i)
            for (std::size_t j = i + 1; j < comps_.size(); ++j) {
                auto verdict = coprimality_probe(comps_[i].f, comps_[j].f, probe_trials,
                                                 probe_seed + i * 131 + j);
                if (verdict == Coprimality::common_factor_detected)
                    throw math_error("pole components " + std::to_string(i + 1) + " and " +
                                     std::to_string(j + 1) + " share a common factor");
            }
    }

    // F+ = prod f_i^{m_i}: the full pole denominator.
    Poly full_product() const
    {
        Poly r = Poly::constant(nvars(), 1);
        for (const auto& c : comps_)
            r = r * c.f.pow(c.multiplicity);
        return r;
    }

    // F = prod f_i^{m_i - 1}: denominator of the exact part.
    Poly reduced_product() const
    {
        Poly r = Poly::constant(nvars(), 1);
        for (const auto& c : comps_)
            r = r * c.f.pow(c.multiplicity - 1);
        return r;
    }

    // P = prod f_i.
    Poly radical_product() const
    {
        Poly r = Poly::constant(nvars(), 1);
        for (const auto& c : comps_)
            r = r * c.f;
        return r;
    }

    // dF+ assembled from the factored presentation:
    // sum_i m_i f_i^{m_i - 1} (prod_{j != i} f_j^{m_j}) df_i.
    OneForm full_product_differential() const
    {
        int n = nvars();
        OneForm r(n);
        for (std::size_t i = 0; i < comps_.size(); ++i) {
            Poly factor = Poly::constant(n, comps_[i].multiplicity) *
                          comps_[i].f.pow(comps_[i].multiplicity - 1);
            for (std::size_t j = 0; j < comps_.size(); ++j)
                if (j != i)
                    factor = factor * comps_[j].f.pow(comps_[j].multiplicity);
            r = r + differential(comps_[i].f).scaled_by(factor);
        }
        return r;
    }

    // A_i = f_i^{n_i} (prod_{j != i} f_j^{n_j + 1}) df_i: the residue term of
    // the cleared-denominator identity (F+ dlog f_i).
    OneForm residue_term(int i) const
    {
        Poly factor = comps_.at(i).f.pow(comps_[i].exact_part_power());
        for (int j = 0; j < count(); ++j)
            if (j != i)
                factor = factor * comps_[j].f.pow(comps_[j].multiplicity);
        return differential(comps_[i].f).scaled_by(factor);
    }

    // B = sum_i n_i (prod_{j != i} f_j) df_i = P dF / F.
    OneForm exact_part_correction() const
    {
        int n = nvars();
        OneForm r(n);
        for (int i = 0; i < count(); ++i) {
            int ni = comps_[i].exact_part_power();
            if (ni == 0)
                continue;
            Poly factor = Poly::constant(n, ni);
            for (int j = 0; j < count(); ++j)
                if (j != i)
                    factor = factor * comps_[j].f;
            r = r + differential(comps_[i].f).scaled_by(factor);
        }
        return r;
    }

private:
    std::vector<DivisorComponent> comps_;
};

// omega = eta / F+ with the divisor kept factored. eta need not be reduced
// against the divisor.
struct MeroOneForm {
    OneForm eta;
    PoleDivisor divisor;

    int nvars() const { return eta.nvars(); }

    static MeroOneForm dlog(const Poly& f)
    {
        return MeroOneForm{differential(f), PoleDivisor({{f, 1}})};
    }
};

struct ClosednessResult {
    bool closed;
    TwoForm witness;   // dF+ ^ eta - F+ deta; zero iff closed
    Validity checked_to;
};

// Closedness of omega = eta/F+ via the cleared-denominator identity:
// d(omega) = 0 iff F+ deta - dF+ ^ eta = 0. Exact for polynomial eta; for
// jet-valued eta the identity is checked up to the order it is trustworthy,
// which is reported back.
inline ClosednessResult closedness_check(const MeroOneForm& w)
{
    Poly fplus = w.divisor.full_product();
    OneForm dfplus = w.divisor.full_product_differential();
    Validity check_order = std::nullopt;
    if (w.eta.validity()) {
        int ord_fplus = fplus.order_of_vanishing().value_or(0);
        check_order = std::max(*w.eta.validity() - 1 + ord_fplus, 0);
    }
    TwoForm deta = exterior_derivative(w.eta);
    TwoForm wedged = wedge(dfplus, w.eta);
    TwoForm lhs(w.nvars(), check_order);
    for (const auto& [jk, p] : wedged.coeffs())
        lhs.add(jk.first, jk.second, p);
    for (const auto& [jk, p] : deta.coeffs())
        lhs.add(jk.first, jk.second, -(fplus * p));
    return ClosednessResult{lhs.is_zero(), lhs, check_order};
}

// Right-hand side of the decomposition, multiplied through by F+:
//   eta = sum_i lambda_i A_i + P dG - G B.
// Output is a MeroOneForm over the same divisor and always closed by
// construction.
inline MeroOneForm synthesize_form(const std::vector<Rational>& lambdas, const Poly& g,
                                   const PoleDivisor& divisor)
{
    if (static_cast<int>(lambdas.size()) != divisor.count())
        throw std::invalid_argument("synthesize_form: one lambda per divisor component required");
    int n = divisor.nvars();
    OneForm eta(n);
    for (int i = 0; i < divisor.count(); ++i) {
        if (lambdas[i] == 0)
            continue;
        eta = eta + divisor.residue_term(i) * lambdas[i];
    }
    if (!g.is_zero()) {
        eta = eta + differential(g).scaled_by(divisor.radical_product());
        OneForm b = divisor.exact_part_correction();
        eta = eta - b.scaled_by(g);
    }
    return MeroOneForm{eta, divisor};
}

inline MeroOneForm synthesize_form(const std::vector<Rational>& lambdas, const Jet& g,
                                   const PoleDivisor& divisor)
{
    MeroOneForm w = synthesize_form(lambdas, g.poly(), divisor);
    // trust order: P dG tail enters at order(G) + ord(P); G B at
    // order(G) + 1 + ord(B)
    int ord_p = divisor.radical_product().order_of_vanishing().value_or(0);
    OneForm b = divisor.exact_part_correction();
    int validity = g.order() + ord_p - 1;
    if (!b.is_zero()) {
        int ord_b = std::numeric_limits<int>::max();
        for (const auto& c : b.coeffs())
            if (!c.is_zero())
                ord_b = std::min(ord_b, *c.order_of_vanishing());
        validity = std::min(validity, g.order() + ord_b);
    }
    return MeroOneForm{w.eta.truncated(validity), w.divisor};
}

// Pullback of a meromorphic form: coefficients and divisor components are
// substituted, multiplicities kept. A component restricting to zero means
// the plane is inside a pole hypersurface.
inline MeroOneForm pullback_form(const MeroOneForm& w, const LinearMapSpec& map)
{
    std::vector<DivisorComponent> comps;
    comps.reserve(w.divisor.count());
    for (int i = 0; i < w.divisor.count(); ++i) {
        Poly fr = substitute_linear(w.divisor.component(i).f, map);
        if (fr.is_zero())
            throw math_error("pullback_form: divisor component " + std::to_string(i + 1) +
                             " vanishes identically on the image plane");
        comps.push_back({fr, w.divisor.component(i).multiplicity});
    }
    return MeroOneForm{pullback_form(w.eta, map), PoleDivisor(std::move(comps))};
}

} // namespace meroform
