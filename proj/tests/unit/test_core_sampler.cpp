#include "vtel/accumulate.hpp"
#include "vtel/core.hpp"
#include "vtel/rng.hpp"
#include "vtel/sampler.hpp"
#include "vtel/stats.hpp"

#include <doctest.h>

using namespace vtel;

TEST_CASE("derived parameters") {
    ModelParams p = derive_params(0.8, 0.4, 10);
    CHECK(p.q == doctest::Approx(0.5));
    CHECK(p.beta1 == doctest::Approx(-10 * std::log(0.8)));
    CHECK(p.lnQ == doctest::Approx(p.beta1 - p.beta2));
    CHECK(p.s == doctest::Approx(p.beta1 / p.beta2));
    ModelParams r = params_from_betas(p.beta1, p.beta2, 10);
    CHECK(r.b1 == doctest::Approx(0.8));
    CHECK(r.b2 == doctest::Approx(0.4));
    CHECK_THROWS_AS(derive_params(0.5, 0.5, 1), std::invalid_argument);
    CHECK_THROWS_AS(derive_params(1.0, 0.5, 1), std::invalid_argument);
    CHECK_THROWS_AS(params_from_betas(1, 1, 1), std::invalid_argument);
}

TEST_CASE("boundary constructors") {
    BoundaryData dw = BoundaryData::domain_wall(3, 4);
    CHECK(dw.left_heights() == std::vector<int>{0, 1, 2, 3, 4});
    CHECK(dw.bottom_heights() == std::vector<int>{0, 0, 0, 0});
    BoundaryData e = BoundaryData::empty(2, 2);
    CHECK(e.left_heights() == std::vector<int>{0, 0, 0});
    BoundaryData f = BoundaryData::from_heights({0, -1, -1, -2}, {0, 1, 1});
    CHECK(f.bottom == std::vector<uint8_t>{1, 0, 1});
    CHECK(f.left == std::vector<uint8_t>{1, 0});
    CHECK_THROWS(BoundaryData::from_heights({0, 1}, {0, 1}));
    // same seed, same coins
    CHECK(BoundaryData::bernoulli(20, 20, 0.3, 0.6, 5).left == BoundaryData::bernoulli(20, 20, 0.3, 0.6, 5).left);
    CHECK_THROWS(BoundaryData::low_density(10, 10, 1.5, [](double) { return 0.0; }, [](double t) { return t; }, 10));
}

TEST_CASE("counter rng is order independent and roughly uniform") {
    uint64_t k = stream_key(42, 3);
    CHECK(uniform_at(k, 5, 7) == uniform_at(k, 5, 7));
    CHECK(uniform_at(k, 5, 7) != uniform_at(k, 7, 5));
    CHECK(stream_key(42, 3) != stream_key(42, 4));
    Accumulator a;
    for (uint32_t x = 0; x < 200; ++x)
        for (uint32_t y = 0; y < 200; ++y) a.add(uniform_at(k, x, y));
    CHECK(std::abs(a.mean - 0.5) < 4 * std::sqrt(1.0 / 12 / a.n));
    CHECK(std::abs(a.variance() - 1.0 / 12) < 1e-3);
}

TEST_CASE("accumulator merge matches a single pass") {
    Accumulator all, a, b;
    for (int i = 0; i < 100; ++i) {
        double v = std::sin(i) * i;
        all.add(v);
        (i < 37 ? a : b).add(v);
    }
    a.merge(b);
    CHECK(a.n == all.n);
    CHECK(a.mean == doctest::Approx(all.mean).epsilon(1e-14));
    CHECK(a.variance() == doctest::Approx(all.variance()).epsilon(1e-12));
    auto f = [](long i) { return double(i % 7) - 3.0 * (i % 3); };
    Accumulator par = parallel_replicas(5000, f), ser = serial_replicas(5000, f);
    CHECK(par.mean == doctest::Approx(ser.mean).epsilon(1e-13));
}

TEST_CASE("1x1 lattice by hand") {
    ModelParams p = derive_params(0.6, 0.3, 1);
    BoundaryData dw = BoundaryData::domain_wall(1, 1);
    // left input only: H(1,1) = 1 when the path goes straight (prob b1)
    auto ed = enumerate_exact(p, dw, 1, 1);
    CHECK(ed.weight.size() == 2);
    CHECK(ed.total() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(ed.expect([](const HeightField& H) { return double(H(1, 1)); }) == doctest::Approx(0.6));
    double eq = ed.expect([&](const HeightField& H) { return std::pow(p.q, H(1, 1)); });
    CHECK(eq == doctest::Approx(1 - p.b1 + p.b1 * p.q).epsilon(1e-15));
}

TEST_CASE("vertex rule") {
    // empty, crossing
    CHECK(vertex_update(3, 3, 3, 0.1, 0.5, 0.5) == 3);
    CHECK(vertex_update(3, 2, 4, 0.9, 0.5, 0.5) == 3);
    // left input: straight right (h+1) w.p. b1
    CHECK(vertex_update(0, 0, 1, 0.49, 0.5, 0.2) == 1);
    CHECK(vertex_update(0, 0, 1, 0.51, 0.5, 0.2) == 0);
    // bottom input: straight up (h−1) w.p. b2
    CHECK(vertex_update(0, -1, 0, 0.19, 0.5, 0.2) == -1);
    CHECK(vertex_update(0, -1, 0, 0.21, 0.5, 0.2) == 0);
}

TEST_CASE("sampled configurations are valid and deterministic") {
    ModelParams p = derive_params(0.7, 0.4, 1);
    for (auto bd : {BoundaryData::domain_wall(30, 20), BoundaryData::bernoulli(30, 20, 0.4, 0.7, 3),
                    BoundaryData::empty(30, 20)}) {
        Configuration a = sample(p, bd, 30, 20, 11, 2), b = sample(p, bd, 30, 20, 11, 2);
        CHECK(a.H.raw() == b.H.raw());
        CHECK(check_configuration(a, bd) == "");
        CHECK(std::abs(integrated_identity_residual(a, p, 30, 20)) < 1e-12);
        CHECK(std::abs(integrated_identity_residual(a, p, 7, 13)) < 1e-12);
        CHECK(case_table_mismatch(a, p) < 1e-13);
    }
    Configuration e = sample(p, BoundaryData::empty(5, 5), 5, 5, 1);
    for (int v : e.H.raw()) CHECK(v == 0);
    CHECK(std::abs(integrated_identity_residual(e, p, 5, 5)) < 1e-13);
}

TEST_CASE("noise case table") {
    ModelParams p = derive_params(0.7, 0.4, 1);
    const double b = p.b1, qb = p.b2, q = p.q;
    for (int h : {-2, 0, 3}) {
        double q2h = std::pow(q, 2 * h);
        CHECK(conditional_noise_variance(h, h, h, p) == 0);
        // bottom-in only
        CHECK(conditional_noise_variance(h, h - 1, h, p) ==
              doctest::Approx(b * (1 - qb) * (1 - q) * (1 / q - 1) * q2h));
        // left-in only
        CHECK(conditional_noise_variance(h, h, h + 1, p) == doctest::Approx(b * (1 - b) * (1 - q) * (1 - q) * q2h));
    }
}

TEST_CASE("noise is conditionally centred with the stated variance") {
    // one vertex with left input only, repeated over replicas
    ModelParams p = derive_params(0.65, 0.3, 1);
    BoundaryData bd = BoundaryData::domain_wall(1, 1);
    Accumulator m, v;
    for (uint64_t r = 0; r < 40000; ++r) {
        Configuration c = sample(p, bd, 1, 1, 77, r);
        double xi = extract_noise(c, p)(0, 0);
        m.add(xi);
        v.add(xi * xi);
    }
    double var = conditional_noise_variance(0, 0, 1, p);
    CHECK(std::abs(m.mean) < 4 * std::sqrt(var / m.n));
    CHECK(std::abs(v.mean - var) < 4 * v.std_error());
}
