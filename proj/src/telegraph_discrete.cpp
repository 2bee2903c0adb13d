#include "vtel/telegraph_discrete.hpp"
#include "vtel/contour.hpp"

#include <cmath>

namespace vtel {

void DiscreteProblem::validate() const {
    if (X < 0 || Y < 0) throw std::invalid_argument("negative extents");
    if (int(chi.size()) != X + 1 || int(psi.size()) != Y + 1)
        throw std::invalid_argument("boundary sequences must have lengths X+1 and Y+1");
    if (chi[0] != psi[0]) throw std::invalid_argument("corner mismatch: chi(0) != psi(0)");
    if (!u.v.empty() && (u.nx != X || u.ny != Y)) throw std::invalid_argument("u must be X×Y");
}

Field2D solve_recursive(const DiscreteProblem& p) {
    p.validate();
    Field2D f(p.X + 1, p.Y + 1);
    for (int x = 0; x <= p.X; ++x) f(x, 0) = p.chi[x];
    for (int y = 0; y <= p.Y; ++y) f(0, y) = p.psi[y];
    const double b1 = p.b1, b2 = p.b2, c = p.b1 + p.b2 - 1;
    for (int y = 0; y < p.Y; ++y)
        for (int x = 0; x < p.X; ++x)
            f(x + 1, y + 1) = b1 * f(x, y + 1) + b2 * f(x + 1, y) - c * f(x, y) + p.u_at(x + 1, y + 1);
    return f;
}

static void check_pair(double b1, double b2) {
    if (!(b1 > 0 && b1 < 1 && b2 > 0 && b2 < 1)) throw std::invalid_argument("weights must lie in (0,1)");
    if (b1 == b2) throw std::invalid_argument("Riemann function needs b1 != b2");
}

Field2D riemann_discrete_table(double b1, double b2, int maxX, int maxY) {
    check_pair(b1, b2);
    Field2D r(maxX + 1, maxY + 1);
    r(0, 0) = 1;
    for (int i = 1; i <= maxX; ++i) r(i, 0) = b1 * r(i - 1, 0);
    for (int j = 1; j <= maxY; ++j) r(0, j) = b2 * r(0, j - 1);
    const double c = b1 + b2 - 1;
    for (int j = 1; j <= maxY; ++j)
        for (int i = 1; i <= maxX; ++i) r(i, j) = b1 * r(i - 1, j) + b2 * r(i, j - 1) - c * r(i - 1, j - 1);
    return r;
}

double riemann_discrete(double b1, double b2, int dX, int dY) {
    if (dX < 0 || dY < 0) {
        check_pair(b1, b2);
        return 0.0;
    }
    return riemann_discrete_table(b1, b2, dX, dY)(dX, dY);
}

double riemann_discrete_quadrature(double b1, double b2, int dX, int dY) {
    check_pair(b1, b2);
    if (dX < 0 || dY < 0) return 0.0;
    const double a1 = b2 * (1 - b1), a2 = b1 * (1 - b2);
    const double e1 = b1 * (1 - b1), e2 = b2 * (1 - b2);
    const double c1 = -1 / a1, c2 = -1 / a2, d1 = -1 / e1, d2 = -1 / e2;
    // Apollonius circles |z−c1|/|z−c2| = k separate the two poles. With
    // w = (z−c1)/(z−c2) the integrand becomes
    //   K · P1(w)^ΔX · P2(w)^ΔY / w^{ΔX+1},  P_i linear,
    // a Laurent polynomial, so the trapezoid rule on |w| = k is exact once the
    // node count exceeds ΔX+ΔY+1; k is picked to keep the integrand small.
    const double c12 = c1 - c2;
    const double K = (b2 - b1) / (a1 * a2 * c12);
    const double s1 = e1 / (a1 * c12), s2 = e2 / (a2 * c12);
    auto P1 = [&](cplx w) { return s1 * ((c1 - d1) - (c2 - d1) * w); };
    auto P2 = [&](cplx w) { return s2 * ((c1 - d2) - (c2 - d2) * w); };
    auto logg = [&](double k) {
        double m = -INFINITY;
        for (int t = 0; t < 128; ++t) {
            cplx w = std::polar(k, 2 * M_PI * (t + 0.5) / 128);
            m = std::max(m, dX * std::log(std::abs(P1(w))) + dY * std::log(std::abs(P2(w))) - dX * std::log(k));
        }
        return m;
    };
    // golden-section on log k
    double lo = -12, hi = 12;
    const double g = (std::sqrt(5.0) - 1) / 2;
    double m1 = hi - g * (hi - lo), m2 = lo + g * (hi - lo);
    double f1 = logg(std::exp(m1)), f2 = logg(std::exp(m2));
    for (int it = 0; it < 60; ++it) {
        if (f1 < f2) {
            hi = m2, m2 = m1, f2 = f1, m1 = hi - g * (hi - lo), f1 = logg(std::exp(m1));
        } else {
            lo = m1, m1 = m2, f1 = f2, m2 = lo + g * (hi - lo), f2 = logg(std::exp(m2));
        }
    }
    const double k = std::exp((lo + hi) / 2);
    int n = 16;
    while (n < dX + dY + 2) n *= 2;
    cplx sum = 0;
    for (int t = 0; t < n; ++t) {
        cplx w = std::polar(k, 2 * M_PI * t / n);
        sum += std::pow(P1(w) / w, dX) * std::pow(P2(w), dY);
    }
    return (K * sum / double(n)).real();
}

static double solve_point(const DiscreteProblem& p, const Field2D& R, int X, int Y) {
    // offsets (X−x, Y−y) index R
    double v = p.chi[0] * R(X, Y);
    for (int y = 1; y <= Y; ++y) v += R(X, Y - y) * (p.psi[y] - p.b2 * p.psi[y - 1]);
    for (int x = 1; x <= X; ++x) v += R(X - x, Y) * (p.chi[x] - p.b1 * p.chi[x - 1]);
    if (!p.u.v.empty())
        for (int y = 1; y <= Y; ++y)
            for (int x = 1; x <= X; ++x) v += R(X - x, Y - y) * p.u(x - 1, y - 1);
    return v;
}

Field2D solve_riemann_serial(const DiscreteProblem& p) {
    p.validate();
    Field2D R = riemann_discrete_table(p.b1, p.b2, p.X, p.Y);
    Field2D f(p.X + 1, p.Y + 1);
    for (int Y = 0; Y <= p.Y; ++Y)
        for (int X = 0; X <= p.X; ++X) f(X, Y) = solve_point(p, R, X, Y);
    return f;
}

Field2D solve_riemann(const DiscreteProblem& p) {
    p.validate();
    Field2D R = riemann_discrete_table(p.b1, p.b2, p.X, p.Y);
    Field2D f(p.X + 1, p.Y + 1);
    const int n = (p.X + 1) * (p.Y + 1);
#pragma omp parallel for schedule(dynamic, 16)
    for (int k = 0; k < n; ++k) {
        int X = k % (p.X + 1), Y = k / (p.X + 1);
        f(X, Y) = solve_point(p, R, X, Y);
    }
    return f;
}

double riemann_discrete_fourpoint_residual(double b1, double b2, int X, int Y, int x_lo, int x_hi, int y_lo,
                                           int y_hi) {
    check_pair(b1, b2);
    int mx = std::max(0, X - x_lo + 1), my = std::max(0, Y - y_lo + 1);
    Field2D T = riemann_discrete_table(b1, b2, mx, my);
    auto R = [&](int x, int y) {
        int dx = X - x, dy = Y - y;
        return (dx < 0 || dy < 0) ? 0.0 : T(dx, dy);
    };
    double m = 0;
    for (int y = y_lo; y <= y_hi; ++y)
        for (int x = x_lo; x <= x_hi; ++x) {
            if (x == X + 1 && y == Y + 1) continue;
            double r = R(x - 1, y - 1) - b1 * R(x, y - 1) - b2 * R(x - 1, y) + (b1 + b2 - 1) * R(x, y);
            m = std::max(m, std::abs(r));
        }
    return m;
}

double riemann_discrete_summed_residual(double b1, double b2, int X, int Y, int x0, int y0) {
    check_pair(b1, b2);
    if (x0 > X || y0 > Y || x0 < 0 || y0 < 0) throw std::out_of_range("source outside [0,X]×[0,Y]");
    Field2D T = riemann_discrete_table(b1, b2, X - x0, Y - y0);
    double s = T(X - x0, Y - y0);
    for (int x = x0 + 1; x <= X; ++x) s += (1 - b1) * T(X - x, Y - y0);
    for (int y = y0 + 1; y <= Y; ++y) s += (1 - b2) * T(X - x0, Y - y);
    return s - 1;
}

}  // namespace vtel
