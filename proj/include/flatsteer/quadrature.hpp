#pragma once

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cstddef>
#include <functional>

#include "flatsteer/bigfloat.hpp"

namespace flatsteer {

// Adaptive Gauss-Kronrod on [a,b], absolute tolerance (smooth compactly
// supported integrands; 1e-12 default per the mass/step integrals).
inline double integrate_gk(const std::function<double(double)>& f, double a, double b,
                           double abs_tol = 1e-12) {
    if (!(b > a)) return 0.0;
    double error = 0.0;
    double q = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        f, a, b, 12, abs_tol, &error);
    return q;
}

// Fixed-order Gauss-Legendre on [a,b] over `panels` equal panels, any scalar.
template <typename Real, typename F>
Real integrate_gl_panels(F&& f, Real a, Real b, std::size_t panels) {
    using boost::math::quadrature::gauss;
    Real total = 0;
    Real h = (b - a) / Real(panels);
    for (std::size_t i = 0; i < panels; ++i) {
        Real lo = a + h * Real(i);
        Real hi = lo + h;
        total += gauss<Real, 24>::integrate(f, lo, hi);
    }
    return total;
}

// Panel-doubling Gauss-Legendre until successive values agree to rel_tol.
template <typename Real, typename F>
Real integrate_gl_doubling(F&& f, Real a, Real b, double rel_tol, std::size_t max_panels = 512) {
    Real prev = integrate_gl_panels<Real>(f, a, b, 2);
    for (std::size_t p = 4; p <= max_panels; p *= 2) {
        Real cur = integrate_gl_panels<Real>(f, a, b, p);
        Real scale = abs(cur) > Real(1e-300) ? abs(cur) : Real(1);
        if (abs(cur - prev) <= Real(rel_tol) * scale) return cur;
        prev = cur;
    }
    return prev;
}

}  // namespace flatsteer
