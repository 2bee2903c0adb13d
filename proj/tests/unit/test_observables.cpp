#include "vtel/observables.hpp"
#include "vtel/stats.hpp"
#include "vtel/telegraph_continuous.hpp"

#include <doctest.h>

#include <random>

using namespace vtel;

TEST_CASE("q -> 0 limit shape branches") {
    CHECK(limit_shape_q0(1, 1, 0.25) == doctest::Approx(1.0 / 3));
    CHECK(limit_shape_q0(2, 0.3, 0.25) == 0);
    CHECK(limit_shape_q0(0.1, 1, 0.25) == doctest::Approx(0.9));
    CHECK(limit_shape_q0(0, 0.7, 0.5) == doctest::Approx(0.7));
    // continuous across the branch lines
    CHECK(limit_shape_q0(4 - 1e-9, 1, 0.25) == doctest::Approx(0).epsilon(1e-6));
    CHECK(limit_shape_q0(0.25 + 1e-9, 1, 0.25) == doctest::Approx(0.75).epsilon(1e-6));
    CHECK_THROWS(limit_shape_q0(1, 1, 1.5));
}

TEST_CASE("domain-wall limit shape") {
    ModelParams p = params_from_betas(1, 2, 1);
    // boundary values: h(0,y) = y, h(x,0) = 0
    CHECK(limit_shape_dw(1e-9, 0.6, 0, p) == doctest::Approx(0.6).epsilon(1e-6));
    // monotone: nondecreasing in y, nonincreasing in x
    for (double x = 0.1; x <= 1.0; x += 0.15)
        for (double y = 0.1; y <= 1.0; y += 0.15) {
            double h = limit_shape_dw(x, y, 0, p);
            CHECK(limit_shape_dw(x, y + 0.05, 0, p) >= h - 1e-12);
            CHECK(limit_shape_dw(x + 0.05, y, 0, p) <= h + 1e-12);
            CHECK(h >= -1e-12);
            CHECK(h <= y + 1e-12);
        }
    // 𝔮^𝐡 solves φ_xy + β1φ_y + β2φ_x = 0; derivatives agree with differences
    const double e = 1e-4;
    double worst = 0, dworst = 0;
    for (double x : {0.2, 0.5, 0.9})
        for (double y : {0.3, 0.6, 1.0}) {
            ShapeSample s = qh_dw(x, y, p);
            double vxy = (qh_dw(x, y + e, p).vx - qh_dw(x, y - e, p).vx) / (2 * e);
            worst = std::max(worst, std::abs(vxy + p.beta1 * s.vy + p.beta2 * s.vx));
            dworst = std::max(dworst, std::abs((qh_dw(x + e, y, p).v - qh_dw(x - e, y, p).v) / (2 * e) - s.vx));
            CHECK(s.v == doctest::Approx(std::exp(p.lnQ * limit_shape_dw(x, y, 0, p))));
        }
    CHECK(worst < 1e-4);
    CHECK(dworst < 1e-6);
}

TEST_CASE("domain-wall shape at alpha > 0") {
    ModelParams p = params_from_betas(1, 2, 1);
    double h0 = limit_shape_dw(0.5, 0.8, 0, p);
    double hs = limit_shape_dw(0.5, 0.8, 1e-8, p);
    CHECK(std::isfinite(limit_shape_dw(0.5, 0.8, 2.0, p)));
    CHECK(hs == doctest::Approx(h0).epsilon(1e-4));
}

TEST_CASE("observable O") {
    const double q = 0.6;
    CHECK(observable_O(0, 3, 5, 1.0, q) == doctest::Approx(-1 + std::pow(q, 3)));
    CHECK(observable_O(2, 3, 5, 1e12, q) == doctest::Approx(std::pow(q, 5 - 3 + 1 - 2)));
    CHECK_THROWS(observable_O(0, 1, 1, 0, q));
}

TEST_CASE("moments from the contour formula") {
    ModelParams p = derive_params(0.65, 0.4, 1);
    // nested and tiny layouts agree where nesting is possible (q near 1)
    ModelParams pn = derive_params(0.95, 0.949, 1);
    for (std::vector<int> xs : {std::vector<int>{3}, {4, 2}, {5, 3, 2}, {4, 4, 3, 1}}) {
        double a = moments_EN(xs, 3, pn, NestLayout::Nested), b = moments_EN(xs, 3, pn, NestLayout::Tiny);
        CHECK(a == doctest::Approx(b).epsilon(1e-9));
    }
    CHECK_THROWS_AS(moments_EN({4, 2}, 3, p, NestLayout::Nested), NumericalError);
    // three points against enumeration (sampler column = formula abscissa − 1)
    auto ed = enumerate_exact(p, BoundaryData::domain_wall(3, 3), 3, 3);
    double e = ed.expect([&](const HeightField& H) {
        return (std::pow(p.q, H(3, 2)) - 1) * (std::pow(p.q, H(2, 2)) - p.q) * (std::pow(p.q, H(0, 2)) - p.q * p.q);
    });
    CHECK(moments_EN({4, 3, 1}, 2, p) == doctest::Approx(e).epsilon(1e-9));
    CHECK_THROWS(moments_EN({2, 3}, 2, p));
}

TEST_CASE("variance density forms agree") {
    std::mt19937_64 g(1);
    std::uniform_real_distribution<double> u(-1, 1);
    const double b1 = 1.3, b2 = 0.4, lq = b1 - b2;
    for (int k = 0; k < 20; ++k) {
        double h = u(g), hx = u(g), hy = u(g);
        double v = std::exp(lq * h);
        ShapeSample s{v, lq * v * hx, lq * v * hy};
        CHECK(variance_density(s, b1, b2) == doctest::Approx(variance_density_h(h, hx, hy, b1, b2)));
    }
    ShapeFn flat = [](double, double) { return ShapeSample{0.7, 0, 0}; };
    CHECK(covariance_general(0.8, 0.9, 0.5, 0.9, flat, 1, 2) == 0);
}

TEST_CASE("domain-wall covariance: contour form against the general quadrature") {
    ModelParams p = params_from_betas(1, 2, 1);
    double c = covariance_dw(0.75, 0.5, 1, 0, p);
    CHECK(c > 0);
    CHECK(covariance_dw(0.6, 0.6, 0.8, 0, p) > 0);
    ShapeFn sh = [&](double x, double y) { return qh_dw(x, y, p); };
    CHECK(covariance_general(0.75, 1, 0.5, 1, sh, 1, 2, 2) == doctest::Approx(c).epsilon(1e-3));
    CHECK_THROWS(covariance_dw(0.5, 0.75, 1, 0, p));
    CHECK(std::isfinite(covariance_dw(0.75, 0.5, 1, 0.5, p)));
}

TEST_CASE("Bernoulli limit shape and covariance") {
    ModelParams p = params_from_betas(1, 2, 1);
    const double pl = 0.6, pb = 0.3, lq = p.lnQ;
    CHECK(limit_shape_bernoulli_qh(0, 0.8, pl, pb, p) == doctest::Approx(std::exp(lq * pl * 0.8)));
    CHECK(limit_shape_bernoulli_qh(0.8, 0, pl, pb, p) == doctest::Approx(std::exp(-lq * pb * 0.8)));
    CHECK(limit_shape_bernoulli_qh(0.7, 0.4, pl, pb, p) ==
          doctest::Approx(homogeneous_bernoulli_shape(0.7, 0.4, pb, pl, 1, 2)).epsilon(1e-10));
    // translation invariant densities
    double rb = pb / (1 - pb), rl = rb / p.s, pl2 = rl / (1 + rl);
    CHECK(limit_shape_bernoulli_qh(0.7, 0.4, pl2, pb, p) ==
          doctest::Approx(std::exp(lq * (-0.7 * pb + 0.4 * pl2))).epsilon(1e-10));
    // boundary variances are those of independent coins
    CHECK(covariance_bernoulli(0.6, 0, 0.6, 0, pl, pb, p) ==
          doctest::Approx(lq * lq * std::exp(-2 * lq * pb * 0.6) * 0.6 * pb * (1 - pb)).epsilon(1e-8));
    CHECK(covariance_bernoulli(0, 0.6, 0, 0.6, pl, pb, p) ==
          doctest::Approx(lq * lq * std::exp(2 * lq * pl * 0.6) * 0.6 * pl * (1 - pl)).epsilon(1e-8));
    CHECK(covariance_bernoulli(0.5, 0.5, 0.5, 0.5, pl, pb, p) > 0);
    CHECK_THROWS(covariance_bernoulli(0.3, 0.5, 0.5, 0.5, pl, pb, p));
    CHECK_THROWS(covariance_bernoulli(0.5, 0.6, 0.5, 0.5, pl, pb, p));
}

TEST_CASE("low-density variance") {
    const double b1 = 1, b2 = 2;
    // 𝐡_y = β2/β1·𝐡_x: no noise
    ShapeFn silent = [](double x, double y) { return ShapeSample{-x + 2 * y, -0.5, -1}; };
    CHECK(variance_low_density(1, 1, silent, b1, b2) == doctest::Approx(0).epsilon(1e-14));
    ShapeFn h = [](double x, double y) { return ShapeSample{y - x * x, -2 * x, 1}; };
    ShapeFn h2 = [](double x, double y) { return ShapeSample{2 * (y - x * x), -4 * x, 2}; };
    double v = variance_low_density(0.9, 0.8, h, b1, b2);
    CHECK(v > 0);
    CHECK(variance_low_density(0.9, 0.8, h2, b1, b2) == doctest::Approx(2 * v).epsilon(1e-12));
    ShapeFn bad = [](double, double) { return ShapeSample{0, 1, 0}; };
    CHECK_THROWS(variance_low_density(1, 1, bad, b1, b2));
}

TEST_CASE("grid shape derivatives and interpolation") {
    Field2D f(41, 31, 0.05, 0.05);
    auto g = [](double x, double y) { return x * x * y - 2 * y * y + x * y * y * y; };
    for (int j = 0; j < 31; ++j)
        for (int i = 0; i < 41; ++i) f(i, j) = g(f.xc(i), f.yc(j));
    GridShape s(f);
    for (double x : {0.0, 0.33, 1.0, 1.77, 2.0})
        for (double y : {0.0, 0.21, 0.9, 1.5}) {
            ShapeSample v = s(x, y);
            CHECK(v.v == doctest::Approx(g(x, y)).epsilon(1e-10));
            CHECK(v.vx == doctest::Approx(2 * x * y + y * y * y).epsilon(1e-8));
            CHECK(v.vy == doctest::Approx(x * x - 4 * y + 3 * x * y * y).epsilon(1e-8));
        }
}
