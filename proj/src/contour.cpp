#include "vtel/contour.hpp"

#include <limits>

namespace vtel {

bool contour_admissible(const ContourSpec& c, const std::vector<cplx>& inside, const std::vector<cplx>& outside) {
    for (cplx p : inside)
        if (std::abs(p - c.center) > 0.75 * c.radius) return false;
    for (cplx p : outside)
        if (std::abs(p - c.center) < 1.25 * c.radius) return false;
    return true;
}

void audit_contour(const ContourSpec& c, const std::vector<cplx>& inside, const std::vector<cplx>& outside) {
    for (cplx p : inside) {
        double d = std::abs(p - c.center);
        if (d > 0.75 * c.radius) throw NumericalError("contour too close to an enclosed pole");
    }
    for (cplx p : outside) {
        double d = std::abs(p - c.center);
        if (d < 1.25 * c.radius) throw NumericalError("contour too close to (or enclosing) an excluded pole");
    }
}

ContourSpec best_circle(const std::function<double(cplx)>& logabs, double a_lo, double a_hi, double b_lo,
                        double b_hi, const std::vector<cplx>& inside, const std::vector<cplx>& outside,
                        int grid) {
    const int probe = 96;
    double best = std::numeric_limits<double>::infinity();
    ContourSpec out;
    for (int i = 0; i < grid; ++i) {
        double a = a_lo + (a_hi - a_lo) * (i + 0.5) / grid;
        for (int j = 0; j < grid; ++j) {
            double b = b_lo + (b_hi - b_lo) * (j + 0.5) / grid;
            ContourSpec c = circle_through(a, b);
            if (!contour_admissible(c, inside, outside)) continue;
            double m = -std::numeric_limits<double>::infinity();
            for (int k = 0; k < probe; ++k) {
                cplx z = c.center + std::polar(c.radius, 2 * M_PI * (k + 0.25) / probe);
                double v = logabs(z);
                if (std::isnan(v)) v = std::numeric_limits<double>::infinity();
                m = std::max(m, v);
            }
            m += std::log(c.radius);
            if (m < best) {
                best = m;
                out = c;
            }
        }
    }
    if (!std::isfinite(best)) throw NumericalError("no admissible contour found");
    return out;
}

}  // namespace vtel
