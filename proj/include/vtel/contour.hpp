#pragma once
#include "vtel/core.hpp"

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

namespace vtel {

using cplx = std::complex<double>;

struct ContourSpec {
    cplx center{0, 0};
    double radius = 1;
    int nodes = 64;
};

struct ContourResult {
    cplx value;
    int nodes = 0;
};

// (1/2πi)∮ f dz over the positively oriented circle, trapezoid rule with node
// doubling until successive values agree to rel_tol (relative to the larger of
// |I| and the integrand scale r·mean|f|).
template <class F>
ContourResult contour_integrate_n(F&& f, const ContourSpec& c, double rel_tol = 1e-12, int max_nodes = 1 << 20) {
    int n = std::max(16, c.nodes);
    // sum of f(z) (z - c) at the current nodes; (1/2πi)∮ f dz = mean of f(z)(z-c)
    auto term = [&](double th) {
        cplx w = std::polar(c.radius, th);
        return f(c.center + w) * w;
    };
    cplx sum = 0;
    double mag = 0;
    for (int k = 0; k < n; ++k) {
        cplx t = term(2 * M_PI * k / n);
        sum += t;
        mag += std::abs(t);
    }
    cplx prev = sum / double(n);
    while (n < max_nodes) {
        cplx add = 0;
        for (int k = 0; k < n; ++k) {
            cplx t = term(2 * M_PI * (k + 0.5) / n);
            add += t;
            mag += std::abs(t);
        }
        sum += add;
        n *= 2;
        cplx cur = sum / double(n);
        double scale = std::max(std::abs(cur), mag / n);
        if (!std::isfinite(std::abs(cur))) throw NumericalError("contour integrand not finite on the circle");
        if (std::abs(cur - prev) <= rel_tol * scale) return {cur, n};
        prev = cur;
    }
    throw NumericalError("contour quadrature did not converge within " + std::to_string(max_nodes) + " nodes");
}

template <class F>
cplx contour_integrate(F&& f, const ContourSpec& c, double rel_tol = 1e-12, int max_nodes = 1 << 20) {
    return contour_integrate_n(std::forward<F>(f), c, rel_tol, max_nodes).value;
}

// Pole audit: every listed pole must be at distance >= radius/4 from the circle
// and on the stated side.
void audit_contour(const ContourSpec& c, const std::vector<cplx>& inside, const std::vector<cplx>& outside);

// Circle through real points a < b.
inline ContourSpec circle_through(double a, double b, int nodes = 64) {
    return ContourSpec{cplx((a + b) / 2, 0), (b - a) / 2, nodes};
}

// Among circles through a ∈ [a_lo, a_hi], b ∈ [b_lo, b_hi] (real crossings),
// pick the one minimizing max log|f(z)|·r on a probe ring, among circles that
// pass audit_contour for the given poles. Used where the integrand has
// essential singularities and the naive circle would cancel catastrophically.
ContourSpec best_circle(const std::function<double(cplx)>& logabs, double a_lo, double a_hi, double b_lo,
                        double b_hi, const std::vector<cplx>& inside = {}, const std::vector<cplx>& outside = {},
                        int grid = 12);

bool contour_admissible(const ContourSpec& c, const std::vector<cplx>& inside, const std::vector<cplx>& outside);

}  // namespace vtel
