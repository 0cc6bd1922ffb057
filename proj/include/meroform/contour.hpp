#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "errors.hpp"
#include "mero_form.hpp"

namespace meroform {

// The one corner of the library that runs in floating point: the analytic
// residue definition (1/2*pi*i) * contour integral of omega around a pole
// component, evaluated by the composite trapezoid rule on a small circle in
// a transversal complex line. Spectrally accurate for analytic integrands.
struct ContourSpec {
    int component = 0; // index into the divisor
    std::vector<std::complex<double>> point;
    std::vector<std::complex<double>> transversal;
    double radius = 0.05;
    int points = 512;
};

struct ContourEstimate {
    std::complex<double> value;
    double doubling_delta; // |estimate(2N) - estimate(N)|
    int points_used;
};

namespace detail {

inline std::complex<double> trapezoid_residue(const MeroOneForm& w, const ContourSpec& spec,
                                              int nodes)
{
    int n = w.nvars();
    std::complex<double> acc{0.0, 0.0};
    std::vector<std::complex<double>> z(n);
    for (int j = 0; j < nodes; ++j) {
        double theta = 2.0 * std::numbers::pi * j / nodes;
        std::complex<double> rot = std::polar(1.0, theta);
        for (int k = 0; k < n; ++k)
            z[k] = spec.point[k] + spec.radius * rot * spec.transversal[k];
        std::complex<double> denom{1.0, 0.0};
        for (int i = 0; i < w.divisor.count(); ++i) {
            std::complex<double> fi = w.divisor.component(i).f.evaluate(z);
            for (int e = 0; e < w.divisor.component(i).multiplicity; ++e)
                denom *= fi;
        }
        std::complex<double> numer{0.0, 0.0};
        for (int k = 0; k < n; ++k)
            numer += w.eta.coeff(k).evaluate(z) * spec.transversal[k];
        acc += rot * numer / denom;
    }
    // (1/2*pi*i) * sum integrand * dtheta collapses to (r/N) * sum e^{i theta} ...
    return acc * (spec.radius / nodes);
}

} // namespace detail

// Numeric estimate of lambda_component. The caller supplies a smooth point
// of {f_component = 0} and a transversal direction; the estimate must be
// stable under doubling the node count or the call fails.
inline ContourEstimate numeric_contour_residue(const MeroOneForm& w, const ContourSpec& spec)
{
    int n = w.nvars();
    if (spec.component < 0 || spec.component >= w.divisor.count())
        throw std::invalid_argument("numeric_contour_residue: component index out of range");
    if (static_cast<int>(spec.point.size()) != n ||
        static_cast<int>(spec.transversal.size()) != n)
        throw std::invalid_argument("numeric_contour_residue: point/transversal dimension mismatch");
    if (spec.radius <= 0 || spec.points < 8)
        throw std::invalid_argument("numeric_contour_residue: bad radius or node count");

    const Poly& f = w.divisor.component(spec.component).f;
    if (std::abs(f.evaluate(spec.point)) >= 1e-12)
        throw math_error("numeric_contour_residue: point is not on the pole component");
    double grad_norm = 0.0;
    for (int k = 0; k < n; ++k)
        grad_norm += std::abs(f.derivative(k).evaluate(spec.point));
    if (grad_norm < 1e-12)
        throw math_error("numeric_contour_residue: singular point of the component");
    for (int i = 0; i < w.divisor.count(); ++i) {
        if (i == spec.component)
            continue;
        if (std::abs(w.divisor.component(i).f.evaluate(spec.point)) < 1e-9)
            throw math_error("numeric_contour_residue: another pole component passes through the point");
    }

    std::complex<double> coarse = detail::trapezoid_residue(w, spec, spec.points);
    std::complex<double> fine = detail::trapezoid_residue(w, spec, 2 * spec.points);
    double delta = std::abs(fine - coarse);
    if (delta > 1e-6)
        throw math_error("numeric_contour_residue: quadrature did not converge (delta " +
                         std::to_string(delta) + " when doubling nodes)");
    return ContourEstimate{fine, delta, 2 * spec.points};
}

} // namespace meroform
