#include "vtel/walks.hpp"

#include <doctest.h>

using namespace vtel;

namespace {

WalkPath path(Orientation o, std::vector<double> xs, std::vector<double> ys) {
    WalkPath w;
    w.start_orientation = o;
    w.xs = std::move(xs);
    w.ys = std::move(ys);
    w.exit_left = w.xs.back() == 0;
    return w;
}

}  // namespace

TEST_CASE("reversed walks without turning mass") {
    // b1 = 1: never turns while moving left
    WalkPath w = reversed_walk(1.0, 0.5, 6, 3, Orientation::Horizontal, 1);
    CHECK(w.exit_left);
    CHECK(w.ys.back() == 3);
    CHECK(w.xs.size() == 2);
    WalkPath v = reversed_walk(0.5, 1.0, 4, 5, Orientation::Vertical, 1);
    CHECK_FALSE(v.exit_left);
    CHECK(v.xs.back() == 4);
}

TEST_CASE("walk paths are monotone staircases") {
    for (uint64_t s = 0; s < 50; ++s) {
        WalkPath w = reversed_walk(0.6, 0.4, 12, 9, s % 2 ? Orientation::Vertical : Orientation::Horizontal, 3, s);
        for (size_t k = 0; k + 1 < w.xs.size(); ++k) {
            CHECK(w.xs[k + 1] <= w.xs[k]);
            CHECK(w.ys[k + 1] <= w.ys[k]);
            CHECK(((w.xs[k + 1] == w.xs[k]) != (w.ys[k + 1] == w.ys[k])));
        }
        CHECK((w.xs.back() == 0 || w.ys.back() == 0));
        WalkPath p = persistent_walk(1, 2, 1.5, 1.2, Orientation::Horizontal, 4, s);
        CHECK((p.xs.back() == 0 || p.ys.back() == 0));
        CHECK(p.exit_left == (p.xs.back() == 0));
    }
}

TEST_CASE("reversed-walk exit law") {
    const double b1 = 0.65, b2 = 0.5;
    const int X = 3, Y = 3;
    const long n = 60000;
    auto Rd = [&](int x, int y) { return (x > X || y > Y) ? 0.0 : riemann_discrete(b1, b2, X - x, Y - y); };
    std::vector<long> cnt(Y + 1);
    for (long i = 0; i < n; ++i) {
        WalkPath w = reversed_walk(b1, b2, X + 1, Y, Orientation::Horizontal, 21, uint64_t(i));
        if (w.exit_left) ++cnt[int(w.ys.back())];
    }
    for (int y0 = 1; y0 <= Y; ++y0) {
        double p = Rd(0, y0) - b2 * Rd(0, y0 + 1);
        CHECK(std::abs(cnt[y0] / double(n) - p) < 4 * std::sqrt(p * (1 - p) / n));
    }
}

TEST_CASE("persistent walk turns at exponential times") {
    const double beta1 = 2.5;
    double s = 0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        WalkPath w = persistent_walk(beta1, 1.0, 50, 50, Orientation::Horizontal, 9, uint64_t(i));
        s += w.xs[0] - w.xs[1];
    }
    // mean 1/β1, sd 1/β1
    CHECK(std::abs(s / n - 1 / beta1) < 4 / beta1 / std::sqrt(double(n)));
}

TEST_CASE("signed indicator on a hand-made pair") {
    // 𝒯_− from (5,3): left to x=2, down to y=1, left to the axis
    WalkPath tm = path(Orientation::Horizontal, {5, 2, 2, 0}, {3, 3, 1, 1});
    // 𝒯_| from (4,4): down to y=2, left to x=1, down to the axis
    WalkPath tb = path(Orientation::Vertical, {4, 4, 1, 1}, {4, 2, 2, 0});
    auto top = walk_top(tm, 4);
    CHECK(top == std::vector<int>{1, 1, 3, 3, 3});
    auto right = walk_right(tb, 3);
    CHECK(right == std::vector<int>{1, 1, 4, 4});
    CHECK(i_between(tm, tb, 1, 1) == 1);   // below 𝒯_−, left of 𝒯_|
    CHECK(i_between(tm, tb, 3, 2) == 1);
    CHECK(i_between(tm, tb, 1, 2) == 0);   // above 𝒯_−, left of 𝒯_|
    CHECK(i_between(tm, tb, 4, 3) == 1);
    CHECK(i_between(tm, tb, 2, 0) == 0);   // below 𝒯_−, right of 𝒯_|
    CHECK(i_between(tm, tb, 4, 4) == -1);  // above 𝒯_− and right of 𝒯_|
}

TEST_CASE("Feynman-Kac estimators") {
    DiscreteProblem d;
    d.b1 = 0.7;
    d.b2 = 0.45;
    d.X = 5;
    d.Y = 4;
    d.chi.assign(6, 0);
    d.psi.assign(5, 0);
    Estimate z = fk_discrete(d, 5, 4, 100, 1);
    CHECK(z.estimate == 0);
    CHECK(z.std_error == 0);
    for (int x = 1; x <= 5; ++x) d.chi[x] = 0.2 * x - 0.1 * x * x;
    for (int y = 1; y <= 4; ++y) d.psi[y] = std::sin(y);
    d.u = Field2D(5, 4);
    for (size_t k = 0; k < d.u.v.size(); ++k) d.u.v[k] = 0.1 * double(k % 4) - 0.1;
    double ref = solve_recursive(d)(5, 4);
    Estimate e = fk_discrete(d, 5, 4, 60000, 2);
    CHECK(std::abs(e.estimate - ref) < 4 * e.std_error);
    Estimate s = fk_discrete_serial(d, 5, 4, 2000, 2), p = fk_discrete(d, 5, 4, 2000, 2);
    CHECK(s.estimate == doctest::Approx(p.estimate).epsilon(1e-13));
    CHECK_THROWS(fk_discrete(d, 5, 4, 1, 2));

    ContinuousProblem c;
    c.beta1 = 1;
    c.beta2 = 2;
    c.chi = [](double) { return 0.0; };
    c.psi = [](double) { return 0.0; };
    c.u = [](double, double) { return 1.0; };
    Field2D q = solve_quadrature(c, 64, 64);
    Estimate ec = fk_continuous(c, 1, 1, 60000, 3);
    CHECK(std::abs(ec.estimate - q(64, 64)) < 4 * ec.std_error);
    c.u = nullptr;
    c.chi = [](double x) { return x; };
    q = solve_quadrature(c, 64, 64);
    ec = fk_continuous(c, 1, 1, 60000, 4);
    CHECK(std::abs(ec.estimate - q(64, 64)) < 4 * ec.std_error);
}
