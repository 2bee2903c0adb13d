#include "vtel/observables.hpp"

#include "vtel/telegraph_continuous.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace vtel {

namespace {

void check_betas(const ModelParams& p) {
    if (!(p.beta1 > 0 && p.beta2 > 0)) throw std::invalid_argument("beta1, beta2 must be positive");
    if (p.beta1 == p.beta2) throw std::invalid_argument("beta1 = beta2: q = 1 is degenerate for the contour formulas");
}

// exp(ln𝔮(−x𝔰z/(1+𝔰z) + y z/(1+z)))
cplx dw_exp(double x, double y, const ModelParams& p, cplx z) {
    return std::exp(p.lnQ * (-x * p.s * z / (1.0 + p.s * z) + y * z / (1.0 + z)));
}

double dw_logabs(double x, double y, const ModelParams& p, cplx z) {
    return (p.lnQ * (-x * p.s * z / (1.0 + p.s * z) + y * z / (1.0 + z))).real() - std::log(std::abs(z));
}

// Circle around −1 avoiding 0 and −1/𝔰 at distance ≥ d.
double dw_gap(const ModelParams& p) { return std::min(1.0, std::abs(1.0 / p.s - 1.0)); }

struct Nodes {
    std::vector<cplx> z, w;  // w = (z − center)/N, so Σ f(z)w ≈ (1/2πi)∮ f dz
};

Nodes circle_nodes(const ContourSpec& c, int N) {
    Nodes n;
    n.z.resize(N);
    n.w.resize(N);
    for (int k = 0; k < N; ++k) {
        cplx e = std::polar(c.radius, 2 * M_PI * (k + 0.25) / N);
        n.z[k] = c.center + e;
        n.w[k] = e / double(N);
    }
    return n;
}

// (1/2πi)²∬ f1(z1) f2(z2) k(z1,z2) dz1 dz2 over a product of circles
template <class F1, class F2, class K>
cplx double_contour(F1&& f1, const ContourSpec& c1, F2&& f2, const ContourSpec& c2, K&& k, double tol = 1e-12) {
    cplx prev = 0;
    for (int N = 32; N <= 4096; N *= 2) {
        Nodes a = circle_nodes(c1, N), b = circle_nodes(c2, N);
        std::vector<cplx> fa(N), fb(N);
        for (int i = 0; i < N; ++i) {
            fa[i] = f1(a.z[i]) * a.w[i];
            fb[i] = f2(b.z[i]) * b.w[i];
        }
        cplx sum = 0;
        double mag = 0;
        for (int i = 0; i < N; ++i) {
            cplx row = 0;
            double rmag = 0;
            for (int j = 0; j < N; ++j) {
                cplx t = fb[j] * k(a.z[i], b.z[j]);
                row += t;
                rmag += std::abs(t);
            }
            sum += fa[i] * row;
            mag += std::abs(fa[i]) * rmag;
        }
        if (!std::isfinite(std::abs(sum))) throw NumericalError("double contour integrand not finite");
        if (N > 32 && std::abs(sum - prev) <= tol * std::max(std::abs(sum), mag)) return sum;
        prev = sum;
    }
    throw NumericalError("double contour quadrature did not converge");
}

}  // namespace

// ---------------------------------------------------------------- LLN

ShapeSample qh_dw(double x, double y, const ModelParams& p) {
    check_betas(p);
    if (x < 0 || y < 0) throw std::invalid_argument("limit shape needs x, y >= 0");
    const double is = 1.0 / p.s;
    auto la = [&](cplx z) { return dw_logabs(x, y, p, z); };
    ContourSpec c;
    double add = 0;
    if (p.s < 1) {
        // enclose −1 and 0 (residue 1 at 0), exclude −1/𝔰
        c = best_circle(la, -is, -1.0, 0.0, 3.0, {cplx(-1, 0), cplx(0, 0)}, {cplx(-is, 0)});
        audit_contour(c, {cplx(-1, 0), cplx(0, 0)}, {cplx(-is, 0)});
    } else {
        c = best_circle(la, -4.0, -1.0, -1.0, -is, {cplx(-1, 0)}, {cplx(0, 0), cplx(-is, 0)});
        audit_contour(c, {cplx(-1, 0)}, {cplx(0, 0), cplx(-is, 0)});
        add = 1;
    }
    auto f = [&](cplx z) { return dw_exp(x, y, p, z) / z; };
    ShapeSample s;
    s.v = contour_integrate(f, c, 1e-13).real() + add;
    s.vx = contour_integrate([&](cplx z) { return f(z) * p.lnQ * (-p.s * z / (1.0 + p.s * z)); }, c, 1e-13).real();
    s.vy = contour_integrate([&](cplx z) { return f(z) * p.lnQ * z / (1.0 + z); }, c, 1e-13).real();
    return s;
}

double limit_shape_dw(double x, double y, double alpha, const ModelParams& p) {
    if (alpha < 0) throw std::invalid_argument("alpha must be >= 0");
    double v = qh_dw(x, y, p).v;
    if (alpha == 0) {
        if (!(v > 0)) throw NumericalError("contour value for q^h is not positive");
        return std::log(v) / p.lnQ;
    }
    // (𝔮^{−h}𝔮^{y−x} + α^{−1})(𝔮^h − 1)/(1 + α^{−1}) = v − 1, monotone in h
    const double ai = 1.0 / alpha, rhs = v - 1;
    auto F = [&](double h) {
        return (std::exp(p.lnQ * (y - x - h)) + ai) * (std::exp(p.lnQ * h) - 1) / (1 + ai) - rhs;
    };
    double m = std::max(x, y);
    double lo = -m, hi = m + 1;
    double flo = F(lo), fhi = F(hi);
    if (flo * fhi > 0) throw NumericalError("limit shape root not bracketed");
    for (int it = 0; it < 80; ++it) {
        double mid = 0.5 * (lo + hi);
        double fm = F(mid);
        if ((fm < 0) == (flo < 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double limit_shape_q0(double x, double y, double s) {
    if (!(s > 0 && s < 1)) throw std::invalid_argument("limit_shape_q0 needs 0 < s < 1");
    if (x < 0 || y < 0) throw std::invalid_argument("x, y must be >= 0");
    if (x == 0) return y;
    if (x * s > y) return 0;
    if (x < s * y) return y - x;
    double d = std::sqrt(s * x) - std::sqrt(y);
    return d * d / (1 - s);
}

// ---------------------------------------------------------------- moments

namespace {

std::vector<double> nested_radii(int n, double q, double rmax) {
    // |1−q| + r_i/q ≤ 0.75 r_{i+1}, built from the outside in
    std::vector<double> r(n);
    r[n - 1] = rmax;
    for (int i = n - 2; i >= 0; --i) {
        r[i] = 0.9 * q * (0.75 * r[i + 1] - std::abs(1 - q));
        if (!(r[i] > 0)) return {};
    }
    return r;
}

}  // namespace

double moments_EN(const std::vector<int>& xs, int y, const ModelParams& p, NestLayout layout) {
    const int n = int(xs.size());
    if (n < 1 || n > 4) throw std::invalid_argument("moments_EN supports 1 <= n <= 4");
    for (int i = 0; i < n; ++i) {
        if (xs[i] < 1) throw std::invalid_argument("formula abscissas must be >= 1");
        if (i > 0 && xs[i] > xs[i - 1]) throw std::invalid_argument("abscissas must be nonincreasing");
    }
    if (y < 1) throw std::invalid_argument("y must be >= 1");
    const double q = p.q;
    if (!(q > 0) || q == 1) throw std::invalid_argument("moments_EN needs q > 0, q != 1");
    const double sf = (1 - p.b1) / (1 - p.b2);
    const double rmax = 0.75 * std::min(q, std::abs(1 / sf - q));

    std::vector<double> r;
    if (layout != NestLayout::Tiny && n > 1) r = nested_radii(n, q, rmax);
    if (n == 1) r = {rmax};
    if (r.empty()) {
        if (layout == NestLayout::Nested)
            throw NumericalError("nested contours infeasible for this q; use smaller radii (Tiny layout)");
        double t = 0.6 * std::min({q * std::abs(1 - q) / (1 + q), q, std::abs(1 / sf - q)});
        r.assign(n, t);
    }
    for (int i = 0; i < n; ++i) audit_contour(ContourSpec{cplx(-q, 0), r[i], 16}, {cplx(-q, 0)}, {0.0, -1 / sf});

    auto single = [&](int i, cplx z) {
        cplx a = std::pow((1.0 + sf * z / q) / (1.0 + sf * z), xs[i] - 1);
        cplx b = std::pow((1.0 + z) / (1.0 + z / q), y);
        return a * b / z;
    };

    cplx prev = 0;
    const int maxN = n == 1 ? (1 << 16) : n == 2 ? 2048 : n == 3 ? 256 : 128;
    for (int N = 32; N <= maxN; N *= 2) {
        std::vector<Nodes> nd(n);
        std::vector<std::vector<cplx>> f(n);
        for (int i = 0; i < n; ++i) {
            nd[i] = circle_nodes(ContourSpec{cplx(-q, 0), r[i], N}, N);
            f[i].resize(N);
            for (int k = 0; k < N; ++k) f[i][k] = single(i, nd[i].z[k]) * nd[i].w[k];
        }
        // cross[i][j][ki*N+kj] for i < j
        std::vector<std::vector<std::vector<cplx>>> cross(n, std::vector<std::vector<cplx>>(n));
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                auto& c = cross[i][j];
                c.resize(size_t(N) * N);
                for (int a = 0; a < N; ++a)
                    for (int b = 0; b < N; ++b) {
                        cplx zi = nd[i].z[a], zj = nd[j].z[b];
                        c[size_t(a) * N + b] = (zi - zj) / (zi - q * zj);
                    }
            }
        cplx sum = 0;
        double mag = 0;
        std::vector<int> idx(n, 0);
        // iterate over the n-fold product
        std::vector<cplx> partial(n + 1);
        std::function<void(int, cplx)> rec = [&](int level, cplx acc) {
            if (level == n) {
                sum += acc;
                mag += std::abs(acc);
                return;
            }
            for (int k = 0; k < N; ++k) {
                idx[level] = k;
                cplx t = acc * f[level][k];
                for (int i = 0; i < level; ++i) t *= cross[i][level][size_t(idx[i]) * N + k];
                rec(level + 1, t);
            }
        };
        rec(0, cplx(1, 0));
        if (!std::isfinite(std::abs(sum))) throw NumericalError("moments_EN integrand not finite");
        if (N > 32 && std::abs(sum - prev) <= 1e-13 * std::max(std::abs(sum), mag)) {
            return std::pow(q, n * (n - 1) / 2.0) * sum.real();
        }
        prev = sum;
    }
    throw NumericalError("moments_EN quadrature did not converge");
}

double observable_O(int H, int x, int y, double alpha, double q) {
    if (!(alpha > 0)) throw std::invalid_argument("observable_O needs alpha > 0; at alpha = 0 use q^H directly");
    return -std::pow(q, H) / alpha + std::pow(q, y - x + 1 - H);
}

// ---------------------------------------------------------------- covariances

double covariance_dw(double x1, double x2, double y, double alpha, const ModelParams& p) {
    check_betas(p);
    if (!(x1 >= x2 && x2 > 0 && y > 0)) throw std::invalid_argument("covariance_dw needs x1 >= x2 > 0, y > 0");
    if (alpha < 0) throw std::invalid_argument("alpha must be >= 0");
    const double d = dw_gap(p);
    ContourSpec outer{cplx(-1, 0), 0.6 * d, 64}, inner{cplx(-1, 0), 0.4 * d, 64};
    const std::vector<cplx> excl{0.0, -1 / p.s};
    audit_contour(outer, {cplx(-1, 0)}, excl);
    audit_contour(inner, {cplx(-1, 0)}, excl);
    if (!(outer.radius - inner.radius >= 0.25 * outer.radius)) throw NumericalError("nesting infeasible");

    auto e1 = [&](cplx z) { return dw_exp(x1, y, p, z) / z; };
    auto e2 = [&](cplx z) { return dw_exp(x2, y, p, z) / z; };
    cplx D = double_contour(e1, inner, e2, outer, [](cplx z1, cplx z2) { return z1 / (z1 - z2); });
    double I1 = contour_integrate(e1, outer, 1e-13).real();
    double bracket = 1;
    if (alpha > 0) {
        double ai = 1 / alpha;
        double I2 = contour_integrate(e2, outer, 1e-13).real();
        bracket = (std::exp(p.lnQ * (y - x2)) + ai + I2) / (1 + ai);
    }
    return p.lnQ * D.real() + p.lnQ * I1 * bracket;
}

namespace {

struct BernoulliSetup {
    double rho1, c;
    ContourSpec a_in, a_out, b_in, b_out;
};

BernoulliSetup bernoulli_setup(double p_left, double p_bottom, const ModelParams& p, bool need_b) {
    check_betas(p);
    if (!(p_left >= 0 && p_left < 1 && p_bottom >= 0 && p_bottom < 1))
        throw std::invalid_argument("Bernoulli densities must lie in [0,1)");
    BernoulliSetup s;
    s.rho1 = p_left / (1 - p_left);
    s.c = p_bottom / (1 - p_bottom) / p.s;
    const double is = 1 / p.s;
    double dA = std::min({std::abs(is - 1), 1 + s.rho1, 1 + s.c});
    s.a_out = {cplx(-1, 0), 0.4 * dA, 64};
    s.a_in = {cplx(-1, 0), 0.25 * dA, 64};
    audit_contour(s.a_out, {cplx(-1, 0)}, {-is, s.rho1, s.c});
    if (need_b) {
        double gap = std::abs(s.c - s.rho1);
        if (gap < 1e-9 * std::max(1.0, s.c))
            throw std::invalid_argument("rho1 = rho2/s: translation-invariant line, formula degenerate");
        double dB = std::min({gap, s.c + is, 1 + s.c});
        s.b_out = {cplx(s.c, 0), 0.4 * dB, 64};
        s.b_in = {cplx(s.c, 0), 0.25 * dB, 64};
        audit_contour(s.b_out, {cplx(s.c, 0)}, {-is, s.rho1, cplx(-1, 0)});
    }
    return s;
}

}  // namespace

double limit_shape_bernoulli_qh(double x, double y, double p_left, double p_bottom, const ModelParams& p) {
    if (x < 0 || y < 0) throw std::invalid_argument("x, y must be >= 0");
    BernoulliSetup s = bernoulli_setup(p_left, p_bottom, p, false);
    auto f = [&](cplx z) { return dw_exp(x, y, p, z) * (1.0 / (s.rho1 - z) + 1.0 / (z - s.c)); };
    double I = contour_integrate(f, s.a_out, 1e-13).real();
    double rho2 = p_bottom / (1 - p_bottom);
    return I + std::exp(p.lnQ * (-x * rho2 / (1 + rho2) + y * s.c / (1 + s.c)));
}

double covariance_bernoulli(double x1, double y1, double x2, double y2, double p_left, double p_bottom,
                            const ModelParams& p) {
    if (!(x1 >= x2 && y1 <= y2)) throw std::invalid_argument("points must form a monotone section: x1 >= x2, y1 <= y2");
    if (x2 < 0 || y1 < 0) throw std::invalid_argument("coordinates must be >= 0");
    BernoulliSetup s = bernoulli_setup(p_left, p_bottom, p, true);
    auto F = [&](double x, double y) {
        return [&p, &s, x, y](cplx z) { return dw_exp(x, y, p, z) * (1.0 / (s.rho1 - z) + 1.0 / (z - s.c)); };
    };
    auto f1 = F(x1, y1);
    auto f2 = F(x2, y2);
    auto K = [&](cplx z1, cplx z2) { return (z1 * s.rho1 - z2 * s.c) / ((z1 - z2) * (s.rho1 - s.c)); };
    cplx tot = 0;
    for (const ContourSpec* c1 : {&s.a_in, &s.b_in})
        for (const ContourSpec* c2 : {&s.a_out, &s.b_out}) tot += double_contour(f1, *c1, f2, *c2, K);
    return p.lnQ * tot.real();
}

// ---------------------------------------------------------------- general boundary

double variance_density(const ShapeSample& s, double beta1, double beta2) {
    return (beta1 + beta2) * s.vx * s.vy + (beta2 - beta1) * beta2 * s.v * s.vx - (beta2 - beta1) * beta1 * s.v * s.vy;
}

double variance_density_h(double h, double hx, double hy, double beta1, double beta2) {
    const double lq = beta1 - beta2;
    const double Qh = std::exp(lq * h);
    const double Qx = lq * Qh * hx, Qy = lq * Qh * hy;
    return -beta2 * lq * Qh * Qx + beta1 * lq * Qh * Qy + (beta1 + beta2) * lq * lq * Qh * Qh * hx * hy;
}

namespace {

// ∬ over [0,X]×[0,Y] by panel-wise tensor Gauss–Legendre
template <class F>
double gauss2d(F&& f, double X, double Y, int panels) {
    using G = boost::math::quadrature::gauss<double, 20>;
    if (X <= 0 || Y <= 0) return 0;
    double hx = X / panels, hy = Y / panels, tot = 0;
    for (int i = 0; i < panels; ++i)
        for (int j = 0; j < panels; ++j) {
            double ax = i * hx, ay = j * hy;
            tot += G::integrate(
                [&](double x) { return G::integrate([&](double y) { return f(x, y); }, ay, ay + hy); }, ax,
                ax + hx);
        }
    return tot;
}

}  // namespace

double covariance_general(double X1, double Y1, double X2, double Y2, const ShapeFn& shape, double beta1,
                          double beta2, int panels) {
    if (!shape) throw std::invalid_argument("shape data missing");
    if (!(beta1 > 0 && beta2 > 0)) throw std::invalid_argument("beta1, beta2 must be positive");
    double X = std::min(X1, X2), Y = std::min(Y1, Y2);
    return gauss2d(
        [&](double x, double y) {
            ShapeSample s = shape(x, y);
            return riemann(beta1, beta2, X1 - x, Y1 - y) * riemann(beta1, beta2, X2 - x, Y2 - y) *
                   variance_density(s, beta1, beta2);
        },
        X, Y, panels);
}

double variance_low_density(double X, double Y, const ShapeFn& h, double beta1, double beta2, int panels) {
    if (!h) throw std::invalid_argument("shape data missing");
    if (!(beta1 > 0 && beta2 > 0)) throw std::invalid_argument("beta1, beta2 must be positive");
    double worst = 0, scale = 0;
    double v = gauss2d(
        [&](double x, double y) {
            ShapeSample s = h(x, y);
            double nv = beta1 * s.vy - beta2 * s.vx;
            worst = std::min(worst, nv);
            scale = std::max(scale, std::abs(beta1 * s.vy) + std::abs(beta2 * s.vx));
            double R = riemann(beta1, beta2, X - x, Y - y);
            return R * R * nv;
        },
        X, Y, panels);
    if (worst < -1e-8 * std::max(1.0, scale)) throw std::invalid_argument("negative noise variance: invalid shape");
    return v;
}

// ---------------------------------------------------------------- grid shape

namespace {

// 4th-order first derivative along i (dir 0) or j (dir 1)
Field2D derivative(const Field2D& f, int dir) {
    Field2D d = f;
    const int n = dir == 0 ? f.nx : f.ny;
    const double h = dir == 0 ? f.dx : f.dy;
    if (n < 5) throw std::invalid_argument("grid shape needs at least 5 nodes per axis");
    auto at = [&](int i, int j, int k) { return dir == 0 ? f(k, j) : f(i, k); };
    for (int j = 0; j < f.ny; ++j)
        for (int i = 0; i < f.nx; ++i) {
            int k = dir == 0 ? i : j;
            double v;
            if (k >= 2 && k <= n - 3)
                v = (at(i, j, k - 2) - 8 * at(i, j, k - 1) + 8 * at(i, j, k + 1) - at(i, j, k + 2)) / (12 * h);
            else if (k < 2) {
                // one-sided five-point stencils
                if (k == 0)
                    v = (-25 * at(i, j, 0) + 48 * at(i, j, 1) - 36 * at(i, j, 2) + 16 * at(i, j, 3) - 3 * at(i, j, 4)) /
                        (12 * h);
                else
                    v = (-3 * at(i, j, 0) - 10 * at(i, j, 1) + 18 * at(i, j, 2) - 6 * at(i, j, 3) + at(i, j, 4)) /
                        (12 * h);
            } else {
                int m = n - 1;
                if (k == m)
                    v = (25 * at(i, j, m) - 48 * at(i, j, m - 1) + 36 * at(i, j, m - 2) - 16 * at(i, j, m - 3) +
                         3 * at(i, j, m - 4)) /
                        (12 * h);
                else
                    v = (3 * at(i, j, m) + 10 * at(i, j, m - 1) - 18 * at(i, j, m - 2) + 6 * at(i, j, m - 3) -
                         at(i, j, m - 4)) /
                        (12 * h);
            }
            d(i, j) = v;
        }
    return d;
}

// Lagrange weights for 4 nodes at offsets 0..3, evaluated at t
void lagrange4(double t, double w[4]) {
    w[0] = -(t - 1) * (t - 2) * (t - 3) / 6;
    w[1] = t * (t - 2) * (t - 3) / 2;
    w[2] = -t * (t - 1) * (t - 3) / 2;
    w[3] = t * (t - 1) * (t - 2) / 6;
}

}  // namespace

GridShape::GridShape(Field2D values) : f_(std::move(values)) {
    fx_ = derivative(f_, 0);
    fy_ = derivative(f_, 1);
}

double GridShape::interp(const Field2D& g, double x, double y) const {
    double tx = (x - g.x0) / g.dx, ty = (y - g.y0) / g.dy;
    if (tx < -1e-9 || ty < -1e-9 || tx > g.nx - 1 + 1e-9 || ty > g.ny - 1 + 1e-9)
        throw std::invalid_argument("grid shape queried outside its grid");
    int i0 = std::clamp(int(std::floor(tx)) - 1, 0, g.nx - 4);
    int j0 = std::clamp(int(std::floor(ty)) - 1, 0, g.ny - 4);
    double wx[4], wy[4];
    lagrange4(tx - i0, wx);
    lagrange4(ty - j0, wy);
    double v = 0;
    for (int b = 0; b < 4; ++b)
        for (int a = 0; a < 4; ++a) v += wx[a] * wy[b] * g(i0 + a, j0 + b);
    return v;
}

ShapeSample GridShape::operator()(double x, double y) const {
    return {interp(f_, x, y), interp(fx_, x, y), interp(fy_, x, y)};
}

}  // namespace vtel
