#include "vtel/cli.hpp"
#include "vtel/expr.hpp"
#include "vtel/io.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace vtel;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run cli(std::vector<std::string> args) {
    std::ostringstream o, e;
    int c = run_cli(args, o, e);
    return {c, o.str(), e.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

fs::path scratch_dir(const std::string& name) {
    fs::path d = fs::temp_directory_path() / ("vtele_test_" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

}  // namespace

TEST_CASE("expressions") {
    CHECK(Expr("1 + 2*3")(0) == 7);
    CHECK(Expr("2^3^2")(0) == 512);
    CHECK(Expr("-x^2")(3) == -9);
    CHECK(Expr("t - t^2/4")(2) == doctest::Approx(1));
    CHECK(Expr("exp(-x) * sin(pi*y)")(1, 0.5) == doctest::Approx(std::exp(-1.0)));
    CHECK(Expr("min(x, y) + max(1, 2) + abs(-3)")(0.5, 4) == doctest::Approx(5.5));
    CHECK(Expr("1e-3*x")(2) == doctest::Approx(2e-3));
    CHECK_THROWS_AS(Expr("1 +"), std::invalid_argument);
    CHECK_THROWS_AS(Expr("foo(x)"), std::invalid_argument);
    CHECK_THROWS_AS(Expr("(x"), std::invalid_argument);
}

TEST_CASE("csv and json round trips") {
    Field2D f(3, 2, 0.5, 0.25, 1.0, 2.0);
    for (size_t k = 0; k < f.v.size(); ++k) f.v[k] = 0.1 * double(k) - 0.3;
    std::stringstream s;
    write_csv(s, f);
    Field2D g = read_field_csv(s);
    CHECK(g.nx == 3);
    CHECK(g.ny == 2);
    CHECK(g.dx == doctest::Approx(0.5));
    CHECK(g.y0 == doctest::Approx(2.0));
    CHECK(g.max_abs_diff(f) == 0);
    Field2D h = field_from_json(to_json(f));
    CHECK(h.max_abs_diff(f) == 0);
    BoundaryData bd = BoundaryData::bernoulli(7, 5, 0.4, 0.6, 3);
    BoundaryData bb = boundary_from_json(boundary_to_json(bd));
    CHECK(bb.left == bd.left);
    CHECK(bb.bottom == bd.bottom);
    CHECK_THROWS(boundary_from_json(ojson{{"left", {0, 2}}, {"bottom", ojson::array()}}));
}

TEST_CASE("config hash and provenance") {
    ojson a{{"b", 1}, {"a", 2}}, b{{"b", 1}, {"a", 2}}, c{{"a", 2}, {"b", 1}};
    CHECK(config_hash(a) == config_hash(b));
    CHECK(config_hash(a) != config_hash(c));
    CHECK(config_hash(a).size() == 16);
    ojson p = provenance("formula", a);
    CHECK(p["source"] == "formula");
    CHECK(p["config_hash"] == config_hash(a));
    CHECK(fmt_double(0.1) == "0.1");
}

TEST_CASE("cli shape prints one third") {
    Run r = cli({"shape", "--kind", "dw-q0", "--s", "0.25", "--x", "1", "--y", "1"});
    REQUIRE(r.code == kOk);
    ojson j = ojson::parse(r.out);
    CHECK(j["h"].get<double>() == doctest::Approx(1.0 / 3).epsilon(1e-15));
    CHECK(j["provenance"]["source"] == "formula");
}

TEST_CASE("cli sample is byte deterministic") {
    fs::path d = scratch_dir("sample");
    std::vector<std::string> args{"sample", "--b1", "0.99", "--b2", "0.98", "--X", "64", "--Y", "64",
                                  "--boundary", "domain-wall", "--seed", "7", "--out"};
    auto a = args, b = args;
    a.push_back((d / "a.csv").string());
    b.push_back((d / "b.csv").string());
    a.insert(a.begin(), {"--threads", "1"});
    REQUIRE(cli(a).code == kOk);
    REQUIRE(cli(b).code == kOk);
    CHECK(slurp(d / "a.csv") == slurp(d / "b.csv"));
    CHECK(slurp(d / "a.csv.meta.json") == slurp(d / "b.csv.meta.json"));
    CHECK(slurp(d / "a.csv").rfind("x,y,value\n", 0) == 0);
    ojson meta = ojson::parse(slurp(d / "a.csv.meta.json"));
    CHECK(meta["source"] == "monte-carlo");
}

TEST_CASE("cli validation and exit codes") {
    CHECK(cli({"shape", "--bogus"}).code == kInvalid);
    CHECK(cli({}).code == kInvalid);
    CHECK(cli({"sample", "--b1", "0.5", "--b2", "0.4", "--beta1", "1", "--beta2", "2", "--X", "3", "--Y", "3"}).code ==
          kInvalid);
    CHECK(cli({"sample", "--b1", "0.5", "--b2", "0.4", "--X", "3", "--Y", "3", "--boundary", "zigzag"}).code ==
          kInvalid);
    CHECK(cli({"solve-telegraph", "--beta1", "1", "--beta2", "2", "--chi", "1", "--psi", "0"}).code == kInvalid);
    CHECK(cli({"--help"}).code == kOk);
}

TEST_CASE("cli solvers and formulas") {
    Run r = cli({"solve-discrete", "--b1", "0.7", "--b2", "0.4", "--X", "4", "--Y", "3", "--chi", "-t/2", "--psi",
                 "t", "--method", "riemann"});
    REQUIRE(r.code == kOk);
    Run s = cli({"solve-discrete", "--b1", "0.7", "--b2", "0.4", "--X", "4", "--Y", "3", "--chi", "-t/2", "--psi",
                 "t", "--method", "recursive"});
    std::istringstream a(r.out), b(s.out);
    CHECK(read_field_csv(a).max_abs_diff(read_field_csv(b)) < 1e-12);

    r = cli({"solve-telegraph", "--beta1", "1", "--beta2", "2", "--grid", "8,8", "--chi", "1", "--psi", "1"});
    REQUIRE(r.code == kOk);
    std::istringstream c(r.out);
    for (double v : read_field_csv(c).v) CHECK(std::abs(v - 1.0) < 1e-4);

    r = cli({"covariance", "--kind", "bernoulli", "--beta1", "1", "--beta2", "2", "--x1", "0.6", "--y1", "0",
             "--x2", "0.6", "--y2", "0", "--p1", "0.6", "--p2", "0.3"});
    REQUIRE(r.code == kOk);
    double lq = -1;
    CHECK(ojson::parse(r.out)["value"].get<double>() ==
          doctest::Approx(lq * lq * std::exp(-2 * lq * 0.3 * 0.6) * 0.6 * 0.3 * 0.7).epsilon(1e-8));

    r = cli({"fk", "--mode", "discrete", "--b1", "0.7", "--b2", "0.4", "--X", "3", "--Y", "3", "--chi", "0",
             "--psi", "t", "--samples", "20000", "--seed", "3"});
    REQUIRE(r.code == kOk);
    ojson j = ojson::parse(r.out);
    CHECK(std::abs(j["estimate"].get<double>() - j["solver"].get<double>()) < 4 * j["std_error"].get<double>());
    CHECK(j["provenance"]["source"] == "monte-carlo");

    r = cli({"shape", "--kind", "dw", "--beta1", "1", "--beta2", "2", "--domain", "1,1", "--grid", "4,4"});
    REQUIRE(r.code == kOk);
    CHECK(r.out.rfind("x,y,value\n", 0) == 0);
}

TEST_CASE("cli verify suites") {
    fs::path d = scratch_dir("verify");
    {
        std::ofstream c(d / "c.json");
        c << R"({"params": {"b1": 0.7, "b2": 0.4, "L": 1}, "boundary": "bernoulli:0.3,0.6",
                 "lattice": {"X": 24, "Y": 16}, "seed": 5, "samples": 10})";
    }
    Run r = cli({"verify", "--suite", "fourpoint", "--config", (d / "c.json").string(), "--out", (d / "out").string()});
    CHECK(r.code == kOk);
    ojson rep = ojson::parse(slurp(d / "out" / "fourpoint.json"));
    CHECK(rep["max_identity_residual"].get<double>() < 1e-10);
    CHECK(rep["pass"] == true);
    CHECK(fs::exists(d / "out" / "fourpoint.csv"));

    Run e = cli({"verify", "--suite", "exact", "--out", (d / "out2").string()});
    CHECK(e.code == kOk);

    // an impossible tolerance fails the suite
    {
        std::ofstream c(d / "strict.json");
        c << R"({"params": {"beta1": 1, "beta2": 2, "L": 1}, "Ls": [8, 16], "samples": 20,
                 "grid": [[0.5, 0.5]], "tolerance": 1e-12})";
    }
    Run f = cli({"verify", "--suite", "lln", "--config", (d / "strict.json").string(), "--out", (d / "out3").string()});
    CHECK(f.code == kStatFail);

    {
        std::ofstream c(d / "bad.json");
        c << R"({"params": {"b1": 0.7, "beta2": 2}})";
    }
    CHECK(cli({"verify", "--suite", "fourpoint", "--config", (d / "bad.json").string(), "--out", (d / "o4").string()})
              .code == kInvalid);
}
