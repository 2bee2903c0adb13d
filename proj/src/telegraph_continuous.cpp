#include "vtel/telegraph_continuous.hpp"
#include "vtel/contour.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <limits>

namespace vtel {

void ContinuousProblem::validate() const {
    if (!(beta1 > 0 && beta2 > 0)) throw std::invalid_argument("beta1, beta2 must be positive");
    if (beta1 == beta2) throw std::invalid_argument("beta1 = beta2 is degenerate");
    if (!(a > 0 && b > 0)) throw std::invalid_argument("domain sides must be positive");
    if (!chi || !psi) throw std::invalid_argument("boundary functions missing");
    if (std::abs(chi(0) - psi(0)) > 1e-12) throw std::invalid_argument("corner mismatch: chi(0) != psi(0)");
}

namespace {

// Contour value for any real offsets (the integral is entire in ΔX, ΔY).
// With w = (z+β1)/(z+β2) the circles |w| = k are the Apollonius circles around
// −β1 that exclude −β2, and the integrand becomes
//   e^{−β1ΔX−β2ΔY} · exp(β2ΔX·w + β1ΔY/w) dw/w,
// free of cancellation when k sits at the saddle √(β1ΔY/(β2ΔX)).
double riemann_any(double beta1, double beta2, double dX, double dY) {
    // on the axes the integral collapses to a single exponential
    if (dY == 0) return std::exp(-beta1 * dX);
    if (dX == 0) return std::exp(-beta2 * dY);
    double A = beta2 * dX, B = beta1 * dY;
    double k = (A != 0 && B != 0) ? std::sqrt(std::abs(B / A)) : 1.0;
    auto f = [&](cplx w) { return std::exp(A * w + B / w) / w; };
    cplx v = contour_integrate(f, ContourSpec{cplx(0, 0), k, 32}, 1e-14);
    return std::exp(-beta1 * dX - beta2 * dY) * v.real();
}

}  // namespace

double riemann(double beta1, double beta2, double dX, double dY) {
    if (!(beta1 > 0 && beta2 > 0)) throw std::invalid_argument("beta1, beta2 must be positive");
    if (beta1 == beta2) throw std::invalid_argument("beta1 = beta2 is degenerate");
    if (dX < 0 || dY < 0) return 0.0;
    return riemann_any(beta1, beta2, dX, dY);
}

CumulativeWeights::CumulativeWeights(int n, double h) : n_(n), w_(size_t(n + 1) * (n + 1), 0.0) {
    auto W = [&](int m, int k) -> double& { return w_[size_t(m) * (n_ + 1) + k]; };
    for (int m = 1; m <= n; ++m) {
        if (m == 1) {
            if (n >= 3) {
                // cubic through nodes 0..3, integrated over the first panel
                W(1, 0) = 9 * h / 24;
                W(1, 1) = 19 * h / 24;
                W(1, 2) = -5 * h / 24;
                W(1, 3) = h / 24;
            } else {
                W(1, 0) = W(1, 1) = h / 2;
            }
            continue;
        }
        int simpson_end = (m % 2 == 0) ? m : m - 3;
        for (int k = 0; k + 2 <= simpson_end; k += 2) {
            W(m, k) += h / 3;
            W(m, k + 1) += 4 * h / 3;
            W(m, k + 2) += h / 3;
        }
        if (m % 2 == 1) {
            int s = m - 3;
            W(m, s) += 3 * h / 8;
            W(m, s + 1) += 9 * h / 8;
            W(m, s + 2) += 9 * h / 8;
            W(m, s + 3) += 3 * h / 8;
        }
    }
}

namespace {

double derivative(const Fn1& f, const Fn1& df, double x) {
    if (df) return df(x);
    const double h = 1e-5;
    if (x - h < 0) return (-3 * f(x) + 4 * f(x + h) - f(x + 2 * h)) / (2 * h);
    return (f(x + h) - f(x - h)) / (2 * h);
}

struct QuadratureSetup {
    int nx, ny;
    double hx, hy;
    Field2D R;                 // R at grid offsets −2..n (shifted by 2)
    std::vector<double> gx;    // χ' + β1χ at x nodes
    std::vector<double> gy;    // ψ' + β2ψ at y nodes
    std::vector<double> cx, cy;  // boundary data itself
    Field2D u;                 // u at nodes (empty if none)
    CumulativeWeights wx, wy;
    double corner;

    QuadratureSetup(const ContinuousProblem& p, int nx_, int ny_)
        : nx(nx_), ny(ny_), hx(p.a / nx_), hy(p.b / ny_), R(nx_ + 3, ny_ + 3), gx(nx_ + 1), gy(ny_ + 1),
          wx(nx_, p.a / nx_), wy(ny_, p.b / ny_), corner(p.psi(0)) {
        const int n = (nx + 3) * (ny + 3);
#pragma omp parallel for schedule(dynamic, 8)
        for (int k = 0; k < n; ++k) {
            int i = k % (nx + 3) - 2, j = k / (nx + 3) - 2;
            R(i + 2, j + 2) = riemann_any(p.beta1, p.beta2, i * hx, j * hy);
        }
        for (int i = 0; i <= nx; ++i) cx.push_back(p.chi(i * hx));
        for (int j = 0; j <= ny; ++j) cy.push_back(p.psi(j * hy));
        for (int i = 0; i <= nx; ++i) gx[i] = derivative(p.chi, p.dchi, i * hx) + p.beta1 * p.chi(i * hx);
        for (int j = 0; j <= ny; ++j) gy[j] = derivative(p.psi, p.dpsi, j * hy) + p.beta2 * p.psi(j * hy);
        if (p.u) {
            u = Field2D(nx + 1, ny + 1);
            for (int j = 0; j <= ny; ++j)
                for (int i = 0; i <= nx; ++i) u(i, j) = p.u(i * hx, j * hy);
        }
    }

    double Rof(int i, int j) const { return R(i + 2, j + 2); }

    double point(int I, int J) const {
        if (J == 0) return cx[I];
        if (I == 0) return cy[J];
        double v = corner * Rof(I, J);
        for (int l = 0; l <= wy.kmax(J); ++l) v += wy(J, l) * Rof(I, J - l) * gy[l];
        for (int k = 0; k <= wx.kmax(I); ++k) v += wx(I, k) * Rof(I - k, J) * gx[k];
        if (!u.v.empty() && I > 0 && J > 0)
            for (int l = 0; l <= wy.kmax(J); ++l) {
                double row = 0;
                for (int k = 0; k <= wx.kmax(I); ++k) row += wx(I, k) * Rof(I - k, J - l) * u(k, l);
                v += wy(J, l) * row;
            }
        return v;
    }
};

}  // namespace

Field2D solve_quadrature(const ContinuousProblem& p, int nx, int ny) {
    p.validate();
    QuadratureSetup s(p, nx, ny);
    Field2D f(nx + 1, ny + 1, p.a / nx, p.b / ny);
    const int n = (nx + 1) * (ny + 1);
#pragma omp parallel for schedule(dynamic, 8)
    for (int k = 0; k < n; ++k) f(k % (nx + 1), k / (nx + 1)) = s.point(k % (nx + 1), k / (nx + 1));
    return f;
}

Field2D solve_quadrature_serial(const ContinuousProblem& p, int nx, int ny) {
    p.validate();
    QuadratureSetup s(p, nx, ny);
    Field2D f(nx + 1, ny + 1, p.a / nx, p.b / ny);
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i <= nx; ++i) f(i, j) = s.point(i, j);
    return f;
}

Field2D picard_solve(const IntegratedProblem& p, int nx, int ny, double tol, int max_iter) {
    if (!p.g) throw std::invalid_argument("picard_solve: g missing");
    if (!(tol > 0)) throw std::invalid_argument("picard_solve: tol must be positive");
    const double hx = p.a / nx, hy = p.b / ny;
    CumulativeWeights wx(nx, hx), wy(ny, hy);
    Field2D g(nx + 1, ny + 1, hx, hy), phi(nx + 1, ny + 1, hx, hy);
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i <= nx; ++i) g(i, j) = p.g(i * hx, j * hy);

    const double L = std::abs(p.lambda), M = std::abs(p.mu), N = std::abs(p.nu);
    // Cell size: largest block (in nodes) on which the restricted operator has
    // sup-norm ≤ 1/2; cumulative weights are at most 4h/3 per node.
    auto norm_bound = [&](int c) {
        double sx = 4.0 / 3.0 * hx * c, sy = 4.0 / 3.0 * hy * c;
        return L * sx + M * sy + N * sx * sy;
    };
    int cell = std::max(nx, ny) + 1;
    while (cell > 4 && norm_bound(cell) > 0.5) cell = std::max(4, (cell + 1) / 2);
    if (norm_bound(cell) > 0.9) throw NumericalError("picard_solve: grid too coarse for the coefficients");

    auto apply = [&](int i, int j) {
        double v = g(i, j);
        if (L != 0) {
            double s = 0;
            for (int k = 0; k <= wx.kmax(i); ++k) s += wx(i, k) * phi(k, j);
            v -= p.lambda * s;
        }
        if (M != 0) {
            double s = 0;
            for (int l = 0; l <= wy.kmax(j); ++l) s += wy(j, l) * phi(i, l);
            v -= p.mu * s;
        }
        if (N != 0) {
            double s = 0;
            for (int l = 0; l <= wy.kmax(j); ++l) {
                double r = 0;
                for (int k = 0; k <= wx.kmax(i); ++k) r += wx(i, k) * phi(k, l);
                s += wy(j, l) * r;
            }
            v -= p.nu * s;
        }
        return v;
    };

    double last = 0;
    for (int J0 = 0; J0 <= ny; J0 += cell)
        for (int I0 = 0; I0 <= nx; I0 += cell) {
            int I1 = std::min(nx, I0 + cell - 1), J1 = std::min(ny, J0 + cell - 1);
            int it = 0;
            for (;; ++it) {
                if (it >= max_iter)
                    throw NumericalError("picard_solve: no convergence, last sup change " + std::to_string(last));
                double change = 0;
                // Jacobi sweep inside the cell
                std::vector<double> next(size_t(I1 - I0 + 1) * (J1 - J0 + 1));
                for (int j = J0; j <= J1; ++j)
                    for (int i = I0; i <= I1; ++i) next[size_t(j - J0) * (I1 - I0 + 1) + (i - I0)] = apply(i, j);
                for (int j = J0; j <= J1; ++j)
                    for (int i = I0; i <= I1; ++i) {
                        double nv = next[size_t(j - J0) * (I1 - I0 + 1) + (i - I0)];
                        change = std::max(change, std::abs(nv - phi(i, j)));
                        phi(i, j) = nv;
                    }
                last = change;
                if (!std::isfinite(change)) throw NumericalError("picard_solve: iteration diverged");
                if (change < tol) break;
            }
        }
    return phi;
}

IntegratedProblem integrated_form(const ContinuousProblem& p) {
    p.validate();
    using boost::math::quadrature::gauss_kronrod;
    IntegratedProblem ip;
    ip.lambda = p.beta1;
    ip.mu = p.beta2;
    ip.nu = 0;
    ip.a = p.a;
    ip.b = p.b;
    ContinuousProblem c = p;
    ip.g = [c](double X, double Y) {
        double v = c.chi(X) + c.psi(Y) - c.chi(0);
        if (X > 0) v += c.beta1 * gauss_kronrod<double, 31>::integrate(c.chi, 0.0, X, 10, 1e-14);
        if (Y > 0) v += c.beta2 * gauss_kronrod<double, 31>::integrate(c.psi, 0.0, Y, 10, 1e-14);
        if (c.u && X > 0 && Y > 0) {
            auto inner = [&](double x) {
                return boost::math::quadrature::gauss<double, 30>::integrate([&](double y) { return c.u(x, y); }, 0.0, Y);
            };
            v += boost::math::quadrature::gauss<double, 30>::integrate(inner, 0.0, X);
        }
        return v;
    };
    return ip;
}

double homogeneous_bernoulli_shape(double x, double y, double p_bottom, double p_left, double beta1, double beta2) {
    if (!(beta1 > 0 && beta2 > 0)) throw std::invalid_argument("beta1, beta2 must be positive");
    if (beta1 == beta2) throw std::invalid_argument("beta1 = beta2 is degenerate");
    if (!(p_bottom >= 0 && p_bottom <= 1 && p_left >= 0 && p_left <= 1))
        throw std::invalid_argument("densities must lie in [0,1]");
    const double lnQ = beta1 - beta2;
    const double inf = std::numeric_limits<double>::infinity();
    const double r1 = p_bottom < 1 ? p_bottom / (1 - p_bottom) : inf;
    const double r2 = p_left < 1 ? p_left / (1 - p_left) : inf;
    auto E = [&](cplx z) { return std::exp(lnQ * (-x * z / (z + beta2) + y * z / (z + beta1))); };
    // kernel (β2ρ1 − β1ρ2)/((z−β1ρ2)(z−β2ρ1)), with infinite ρ reduced
    std::function<cplx(cplx)> kernel;
    std::vector<cplx> excluded{cplx(-beta2, 0)};
    double residue = 0;
    if (std::isinf(r1) && std::isinf(r2)) {
        kernel = [](cplx) { return cplx(0); };
        residue = std::exp(lnQ * (y - x));
    } else if (std::isinf(r1)) {
        kernel = [&](cplx z) { return -1.0 / (z - beta1 * r2); };
        excluded.push_back(beta1 * r2);
        residue = std::exp(lnQ * (y - x));
    } else if (std::isinf(r2)) {
        kernel = [&](cplx z) { return 1.0 / (z - beta2 * r1); };
        residue = std::exp(lnQ * (-x * p_bottom + y * r1 * beta2 / (r1 * beta2 + beta1)));
        excluded.push_back(beta2 * r1);
    } else {
        kernel = [&](cplx z) { return (beta2 * r1 - beta1 * r2) / ((z - beta1 * r2) * (z - beta2 * r1)); };
        residue = std::exp(lnQ * (-x * p_bottom + y * r1 * beta2 / (r1 * beta2 + beta1)));
        excluded.push_back(beta1 * r2);
        excluded.push_back(beta2 * r1);
    }
    if (x == 0 && y == 0) return 1.0;
    double r = INFINITY;
    for (cplx e : excluded) r = std::min(r, std::abs(e + beta1));
    ContourSpec c{cplx(-beta1, 0), r / 2, 64};
    audit_contour(c, {cplx(-beta1, 0)}, excluded);
    double I = contour_integrate([&](cplx z) { return E(z) * kernel(z); }, c, 1e-13).real();
    return I + residue;
}

RiemannResiduals riemann_property_residuals(double beta1, double beta2, double max_offset, int points, double h) {
    if (!(h > 0)) throw std::invalid_argument("finite-difference step must be positive");
    RiemannResiduals r;
    auto R = [&](double X, double Y) { return riemann(beta1, beta2, X, Y); };
    r.corner = std::abs(R(0, 0) - 1);
    for (int a = 1; a <= points; ++a)
        for (int b = 1; b <= points; ++b) {
            double X = max_offset * a / points, Y = max_offset * b / points;
            if (X - h < 0 || Y - h < 0) continue;
            double rxy = (R(X + h, Y + h) - R(X + h, Y - h) - R(X - h, Y + h) + R(X - h, Y - h)) / (4 * h * h);
            double rx = (R(X + h, Y) - R(X - h, Y)) / (2 * h);
            double ry = (R(X, Y + h) - R(X, Y - h)) / (2 * h);
            r.pde = std::max(r.pde, std::abs(rxy + beta1 * ry + beta2 * rx));
        }
    for (int a = 1; a <= points; ++a) {
        double t = max_offset * a / points;
        if (t - h < 0) continue;
        double rx = (R(t + h, 0) - R(t - h, 0)) / (2 * h);
        r.edge_x = std::max(r.edge_x, std::abs(rx + beta1 * R(t, 0)));
        double ry = (R(0, t + h) - R(0, t - h)) / (2 * h);
        r.edge_y = std::max(r.edge_y, std::abs(ry + beta2 * R(0, t)));
    }
    return r;
}

}  // namespace vtel
