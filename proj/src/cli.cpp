#include "vtel/cli.hpp"

#include "vtel/cumulants.hpp"
#include "vtel/expr.hpp"
#include "vtel/io.hpp"
#include "vtel/observables.hpp"
#include "vtel/sampler.hpp"
#include "vtel/stats.hpp"
#include "vtel/telegraph_continuous.hpp"
#include "vtel/telegraph_discrete.hpp"
#include "vtel/walks.hpp"

#include <CLI11.hpp>
#include <omp.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace vtel {

namespace {

namespace fs = std::filesystem;

struct StatFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParamOpts {
    std::optional<double> b1, b2, beta1, beta2;
    double L = 1;

    void add(CLI::App* app) {
        app->add_option("--b1", b1, "horizontal persistence weight");
        app->add_option("--b2", b2, "vertical persistence weight");
        app->add_option("--beta1", beta1);
        app->add_option("--beta2", beta2);
        app->add_option("--L", L, "scale parameter")->capture_default_str();
    }
    ModelParams get(double alpha = 0) const {
        bool bs = b1 || b2, betas = beta1 || beta2;
        if (bs == betas) throw std::invalid_argument("give exactly one of {--b1,--b2} or {--beta1,--beta2}");
        if (bs) {
            if (!(b1 && b2)) throw std::invalid_argument("--b1 and --b2 go together");
            return derive_params(*b1, *b2, L, alpha);
        }
        if (!(beta1 && beta2)) throw std::invalid_argument("--beta1 and --beta2 go together");
        return params_from_betas(*beta1, *beta2, L, alpha);
    }
    ojson json() const {
        ojson j;
        if (b1) j["b1"] = *b1;
        if (b2) j["b2"] = *b2;
        if (beta1) j["beta1"] = *beta1;
        if (beta2) j["beta2"] = *beta2;
        j["L"] = L;
        return j;
    }
};

ModelParams params_from_config(const ojson& j) {
    double L = j.value("L", 1.0);
    bool bs = j.contains("b1") || j.contains("b2"), betas = j.contains("beta1") || j.contains("beta2");
    if (bs == betas) throw std::invalid_argument("config params: give exactly one of {b1,b2} or {beta1,beta2}");
    if (bs) return derive_params(j.at("b1").get<double>(), j.at("b2").get<double>(), L);
    return params_from_betas(j.at("beta1").get<double>(), j.at("beta2").get<double>(), L);
}

std::pair<double, double> parse_pair(const std::string& s, const char* what) {
    auto c = s.find(',');
    if (c == std::string::npos) throw std::invalid_argument(std::string(what) + " must be 'a,b'");
    return {std::stod(s.substr(0, c)), std::stod(s.substr(c + 1))};
}

BoundaryData make_boundary(const std::string& spec, int X, int Y, uint64_t seed) {
    if (spec == "domain-wall") return BoundaryData::domain_wall(X, Y);
    if (spec == "empty") return BoundaryData::empty(X, Y);
    if (spec.rfind("bernoulli:", 0) == 0) {
        auto [p1, p2] = parse_pair(spec.substr(10), "bernoulli densities");
        return BoundaryData::bernoulli(X, Y, p1, p2, seed);
    }
    if (spec.rfind("file:", 0) == 0) {
        std::ifstream f(spec.substr(5));
        if (!f) throw std::invalid_argument("cannot open boundary file " + spec.substr(5));
        BoundaryData bd = boundary_from_json(ojson::parse(f));
        if (bd.X() < X || bd.Y() < Y) throw std::invalid_argument("boundary file shorter than the lattice");
        return bd;
    }
    throw std::invalid_argument("unknown boundary '" + spec + "' (domain-wall | empty | bernoulli:p1,p2 | file:<path>)");
}

bool is_csv(const std::string& s) { return s.size() > 4 && s.substr(s.size() - 4) == ".csv"; }

// x,value rows
std::vector<std::pair<double, double>> read_profile_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("cannot open " + path);
    std::string line;
    std::vector<std::pair<double, double>> out;
    bool first = true;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        auto c = line.find(',');
        if (first && (c == std::string::npos || !(std::isdigit(static_cast<unsigned char>(line[0])) || line[0] == '-'))) {
            first = false;
            continue;
        }
        first = false;
        if (c == std::string::npos) throw std::invalid_argument("profile CSV rows must be x,value");
        out.push_back({std::stod(line.substr(0, c)), std::stod(line.substr(c + 1))});
    }
    if (out.empty()) throw std::invalid_argument("empty profile " + path);
    return out;
}

// expression in t, or a CSV profile (linear interpolation)
Fn1 profile(const std::string& spec) {
    if (is_csv(spec)) {
        auto pts = read_profile_csv(spec);
        return [pts](double x) {
            if (x <= pts.front().first) return pts.front().second;
            if (x >= pts.back().first) return pts.back().second;
            auto it = std::upper_bound(pts.begin(), pts.end(), x,
                                       [](double v, const std::pair<double, double>& p) { return v < p.first; });
            auto a = *(it - 1), b = *it;
            return a.second + (b.second - a.second) * (x - a.first) / (b.first - a.first);
        };
    }
    Expr e(spec);
    return [e](double x) { return e(x); };
}

Fn2 field_fn(const std::string& spec) {
    if (is_csv(spec)) {
        std::ifstream f(spec);
        if (!f) throw std::invalid_argument("cannot open " + spec);
        Field2D g = read_field_csv(f);
        return [g](double x, double y) {
            double tx = std::clamp((x - g.x0) / g.dx, 0.0, double(g.nx - 1));
            double ty = std::clamp((y - g.y0) / g.dy, 0.0, double(g.ny - 1));
            int i = std::min(int(tx), g.nx - 2), j = std::min(int(ty), g.ny - 2);
            if (g.nx == 1) i = 0;
            if (g.ny == 1) j = 0;
            double fx = g.nx > 1 ? tx - i : 0, fy = g.ny > 1 ? ty - j : 0;
            auto at = [&](int a, int b) { return g(std::min(a, g.nx - 1), std::min(b, g.ny - 1)); };
            return (1 - fx) * (1 - fy) * at(i, j) + fx * (1 - fy) * at(i + 1, j) + (1 - fx) * fy * at(i, j + 1) +
                   fx * fy * at(i + 1, j + 1);
        };
    }
    Expr e(spec);
    return [e](double x, double y) { return e(x, y); };
}

// Write CSV to --out (plus a provenance sidecar) or to the stream.
template <class T>
void emit_csv(const T& field, const std::string& out_path, const ojson& meta, std::ostream& out) {
    if (out_path.empty()) {
        write_csv(out, field);
        return;
    }
    std::ofstream f(out_path);
    if (!f) throw std::invalid_argument("cannot write " + out_path);
    write_csv(f, field);
    std::ofstream m(out_path + ".meta.json");
    m << meta.dump(2) << '\n';
}

void emit_json(const ojson& j, const std::string& out_path, std::ostream& out) {
    if (out_path.empty()) {
        out << j.dump(2) << '\n';
        return;
    }
    std::ofstream f(out_path);
    if (!f) throw std::invalid_argument("cannot write " + out_path);
    f << j.dump(2) << '\n';
}

DiscreteProblem discrete_problem(const ModelParams& p, int X, int Y, const std::string& chi, const std::string& psi,
                                 const std::string& u) {
    DiscreteProblem d;
    d.b1 = p.b1;
    d.b2 = p.b2;
    d.X = X;
    d.Y = Y;
    Fn1 c = profile(chi), s = profile(psi);
    for (int x = 0; x <= X; ++x) d.chi.push_back(c(x));
    for (int y = 0; y <= Y; ++y) d.psi.push_back(s(y));
    if (!u.empty()) {
        Fn2 uf = field_fn(u);
        d.u = Field2D(X, Y);
        for (int y = 1; y <= Y; ++y)
            for (int x = 1; x <= X; ++x) d.u(x - 1, y - 1) = uf(x, y);
    }
    d.validate();
    return d;
}

ContinuousProblem continuous_problem(double beta1, double beta2, double a, double b, const std::string& chi,
                                     const std::string& psi, const std::string& u) {
    ContinuousProblem cp;
    cp.beta1 = beta1;
    cp.beta2 = beta2;
    cp.a = a;
    cp.b = b;
    cp.chi = profile(chi);
    cp.psi = profile(psi);
    if (!u.empty()) cp.u = field_fn(u);
    cp.validate();
    return cp;
}

ojson estimate_json(const Estimate& e) {
    return {{"estimate", e.estimate}, {"std_error", e.std_error}, {"n", e.n}, {"seed", e.seed}};
}

// --------------------------------------------------------------- verify suites

struct SuiteResult {
    ojson report;
    bool pass = true;
};

std::vector<MacroPoint> read_points(const ojson& j, const char* key, std::vector<MacroPoint> dflt) {
    if (!j.contains(key)) return dflt;
    std::vector<MacroPoint> v;
    for (auto& p : j.at(key)) v.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    return v;
}

SuiteResult suite_exact(const ojson& cfg) {
    ModelParams p = cfg.contains("params") ? params_from_config(cfg["params"]) : derive_params(0.6, 0.35, 1);
    int X = cfg.value("lattice", ojson::object()).value("X", 3), Y = cfg.value("lattice", ojson::object()).value("Y", 3);
    std::string b = cfg.value("boundary", "domain-wall");
    if (b != "domain-wall") throw std::invalid_argument("exact suite compares against the domain-wall moment formula");
    auto ed = enumerate_exact(p, BoundaryData::domain_wall(X, Y), X, Y);
    double worst = 0;
    for (int y = 1; y <= Y; ++y)
        for (int x1 = 0; x1 <= X; ++x1) {
            double e = ed.expect([&](const HeightField& H) { return std::pow(p.q, H(x1, y)) - 1; });
            worst = std::max(worst, std::abs(e - moments_EN({x1 + 1}, y, p)));
            for (int x2 = 0; x2 <= x1; ++x2) {
                double e2 = ed.expect([&](const HeightField& H) {
                    return (std::pow(p.q, H(x1, y)) - 1) * (std::pow(p.q, H(x2, y)) - p.q);
                });
                worst = std::max(worst, std::abs(e2 - moments_EN({x1 + 1, x2 + 1}, y, p)));
            }
        }
    SuiteResult r;
    r.report = {{"configurations", ed.weight.size()}, {"total_probability", ed.total()}, {"max_moment_error", worst}};
    r.pass = worst < 1e-9 && std::abs(ed.total() - 1) < 1e-12;
    return r;
}

SuiteResult suite_fourpoint(const ojson& cfg) {
    ModelParams p = cfg.contains("params") ? params_from_config(cfg["params"]) : derive_params(0.7, 0.4, 1);
    int X = cfg.value("lattice", ojson::object()).value("X", 32), Y = cfg.value("lattice", ojson::object()).value("Y", 32);
    uint64_t seed = cfg.value("seed", uint64_t(1));
    long n = cfg.value("samples", 20L);
    BoundaryData bd = make_boundary(cfg.value("boundary", "domain-wall"), X, Y, seed);
    double res = 0, mism = 0;
    std::string bad;
    for (long i = 0; i < n; ++i) {
        Configuration c = sample(p, bd, X, Y, seed, uint64_t(i));
        res = std::max(res, std::abs(integrated_identity_residual(c, p, X, Y)));
        mism = std::max(mism, case_table_mismatch(c, p));
        if (bad.empty()) bad = check_configuration(c, bd);
    }
    SuiteResult r;
    r.report = {{"samples", n}, {"max_identity_residual", res}, {"max_case_table_mismatch", mism},
                {"configuration_check", bad.empty() ? "ok" : bad}};
    r.pass = res < 1e-10 && mism < 1e-12 && bad.empty();
    return r;
}

SuiteResult suite_lln(const ojson& cfg) {
    ModelParams p0 = cfg.contains("params") ? params_from_config(cfg["params"]) : params_from_betas(1, 2, 1);
    std::vector<double> Ls = cfg.value("Ls", std::vector<double>{32, 64, 128});
    long n = cfg.value("samples", 200L);
    uint64_t seed = cfg.value("seed", uint64_t(1));
    double tol = cfg.value("tolerance", 0.05);
    std::vector<MacroPoint> grid;
    for (int i = 1; i <= 8; ++i)
        for (int j = 1; j <= 8; ++j) grid.push_back({i / 8.0, j / 8.0});
    grid = read_points(cfg, "grid", grid);
    auto h = [&](double x, double y) { return limit_shape_dw(x, y, 0, p0); };
    auto rep = lln_experiment(p0.beta1, p0.beta2, [](int X, int Y, double) { return BoundaryData::domain_wall(X, Y); },
                              h, grid, Ls, n, seed);
    SuiteResult r;
    ojson rows = ojson::array();
    for (auto& row : rep.rows)
        rows.push_back({{"L", row.L}, {"n", row.n}, {"sup_mean_err", row.sup_mean_err},
                        {"mean_sample_err", row.mean_sample_err}, {"mc_se", row.mc_se}});
    r.report = {{"rows", rows}, {"decreasing", rep.decreasing}, {"tolerance", tol}};
    r.pass = rep.decreasing && rep.rows.back().sup_mean_err < tol;
    return r;
}

SuiteResult suite_clt(const ojson& cfg) {
    ModelParams p = cfg.contains("params") ? params_from_config(cfg["params"]) : params_from_betas(1, 2, 64);
    long n = cfg.value("samples", 20000L);
    uint64_t seed = cfg.value("seed", uint64_t(1));
    auto pts = read_points(cfg, "points", {{0.75, 1.0}, {0.5, 1.0}});
    double y = pts[0].second;
    for (auto& q : pts)
        if (q.second != y) throw std::invalid_argument("clt suite points must share one y");
    std::vector<LatticePoint> lp;
    int X = 1, Y = int(std::lround(p.L * y));
    for (auto& q : pts) {
        // formula abscissa x ↔ sampler column x − 1
        int lx = std::max(0, int(std::lround(p.L * q.first)) - 1);
        lp.push_back({lx, Y});
        X = std::max(X, lx);
    }
    auto rep = clt_experiment(p, BoundaryData::domain_wall(X, Y), X, Y, lp, n, seed);
    const size_t k = pts.size();
    std::vector<double> expected(k * k);
    for (size_t a = 0; a < k; ++a)
        for (size_t b = 0; b < k; ++b)
            expected[a * k + b] =
                covariance_dw(std::max(pts[a].first, pts[b].first), std::min(pts[a].first, pts[b].first), y, 0, p);
    double z = max_z(rep, expected);
    SuiteResult r;
    r.report = {{"L", p.L},           {"n", n},           {"cov", rep.cov},           {"cov_se", rep.cov_se},
                {"formula", expected}, {"max_z", z},       {"skew", rep.skew},         {"exkurt", rep.exkurt},
                {"skew_band", rep.skew_band}, {"kurt_band", rep.kurt_band}, {"normality_ok", rep.normality_ok}};
    r.pass = z < 4 && rep.normality_ok;
    return r;
}

SuiteResult suite_lowdensity(const ojson& cfg) {
    ModelParams p = cfg.contains("params") ? params_from_config(cfg["params"]) : params_from_betas(1, 2, 200);
    double delta = cfg.value("delta", 0.4);
    long n = cfg.value("samples", 4000L);
    uint64_t seed = cfg.value("seed", uint64_t(1));
    Fn1 chi = profile(cfg.value("chi", "0")), psi = profile(cfg.value("psi", "t"));
    std::vector<MacroPoint> grid;
    for (int i = 1; i <= 4; ++i)
        for (int j = 1; j <= 4; ++j) grid.push_back({i / 4.0, j / 4.0});
    grid = read_points(cfg, "grid", grid);
    auto vp = read_points(cfg, "var_point", {{1.0, 1.0}})[0];
    auto rows = low_density_experiment(p.beta1, p.beta2, delta, chi, psi, {p.L}, grid, vp, n, seed);
    const auto& row = rows[0];
    SuiteResult r;
    double z = std::abs(row.var_emp - row.var_formula) / row.var_se;
    r.report = {{"L", row.L},           {"delta", delta},          {"n", n},
                {"sup_mean_err", row.sup_mean_err}, {"var_emp", row.var_emp}, {"var_se", row.var_se},
                {"var_formula", row.var_formula},   {"z", z}};
    r.pass = row.sup_mean_err < cfg.value("tolerance", 0.05) && z < 4;
    return r;
}

void write_report(const fs::path& dir, const std::string& name, const ojson& rep) {
    fs::create_directories(dir);
    std::ofstream(dir / (name + ".json")) << rep.dump(2) << '\n';
    std::ofstream csv(dir / (name + ".csv"));
    csv << "metric,value\n";
    for (auto& [k, v] : rep.items())
        if (v.is_primitive()) csv << k << ',' << v.dump() << '\n';
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"vertex-telegraph: stochastic six-vertex sampler, telegraph solvers and contour formulas", "vtele"};
    app.require_subcommand(1);
    int threads = 0;
    app.add_option("--threads", threads, "cap on OpenMP threads (default: VERTEX_TELEGRAPH_THREADS or all cores)");

    // sample
    auto* s_sample = app.add_subcommand("sample", "sample one configuration; CSV heights");
    ParamOpts sp;
    sp.add(s_sample);
    int sX = 0, sY = 0;
    std::string sboundary = "domain-wall", sout, sedges;
    uint64_t sseed = 0, sreplica = 0;
    s_sample->add_option("--X", sX)->required();
    s_sample->add_option("--Y", sY)->required();
    s_sample->add_option("--boundary", sboundary, "domain-wall | empty | bernoulli:p1,p2 | file:<json>");
    s_sample->add_option("--seed", sseed);
    s_sample->add_option("--replica", sreplica);
    s_sample->add_option("--out", sout);
    s_sample->add_option("--edges", sedges, "also write the edge list as JSON");

    // solve-discrete
    auto* s_disc = app.add_subcommand("solve-discrete", "discrete telegraph equation");
    ParamOpts dp;
    dp.add(s_disc);
    int dX = 0, dY = 0;
    std::string dchi, dpsi, du, dmethod = "recursive", dout;
    s_disc->add_option("--X", dX)->required();
    s_disc->add_option("--Y", dY)->required();
    s_disc->add_option("--chi", dchi, "expression in t or x,value CSV")->required();
    s_disc->add_option("--psi", dpsi)->required();
    s_disc->add_option("--u", du);
    s_disc->add_option("--method", dmethod)->check(CLI::IsMember({"recursive", "riemann"}));
    s_disc->add_option("--out", dout);

    // solve-telegraph
    auto* s_tel = app.add_subcommand("solve-telegraph", "continuous telegraph equation");
    double tb1 = 0, tb2 = 0;
    std::string tdomain = "1,1", tgrid = "64,64", tchi, tpsi, tu, tmethod = "quadrature", tout;
    s_tel->add_option("--beta1", tb1)->required();
    s_tel->add_option("--beta2", tb2)->required();
    s_tel->add_option("--domain", tdomain);
    s_tel->add_option("--grid", tgrid);
    s_tel->add_option("--chi", tchi)->required();
    s_tel->add_option("--psi", tpsi)->required();
    s_tel->add_option("--u", tu);
    s_tel->add_option("--method", tmethod)->check(CLI::IsMember({"quadrature", "picard"}));
    s_tel->add_option("--out", tout);

    // fk
    auto* s_fk = app.add_subcommand("fk", "Feynman–Kac walk estimate of a telegraph solution at one point");
    ParamOpts fp;
    fp.add(s_fk);
    std::string fmode = "discrete", fchi = "0", fpsi = "0", fu, fout;
    double fX = 1, fY = 1;
    long fsamples = 10000;
    uint64_t fseed = 0;
    s_fk->add_option("--mode", fmode)->check(CLI::IsMember({"discrete", "continuous"}));
    s_fk->add_option("--X", fX)->required();
    s_fk->add_option("--Y", fY)->required();
    s_fk->add_option("--chi", fchi);
    s_fk->add_option("--psi", fpsi);
    s_fk->add_option("--u", fu);
    s_fk->add_option("--samples", fsamples);
    s_fk->add_option("--seed", fseed);
    s_fk->add_option("--out", fout);

    // shape
    auto* s_shape = app.add_subcommand("shape", "limit shapes");
    ParamOpts hp;
    hp.add(s_shape);
    std::string hkind = "dw", hdomain, hgrid, hchi, hpsi, hout;
    std::optional<double> hx, hy;
    double hs = 0.5, halpha = 0, hp1 = 0.5, hp2 = 0.5;
    s_shape->add_option("--kind", hkind)->check(CLI::IsMember({"dw", "dw-q0", "bernoulli", "general"}));
    s_shape->add_option("--x", hx);
    s_shape->add_option("--y", hy);
    s_shape->add_option("--s", hs, "𝔰 for dw-q0");
    s_shape->add_option("--alpha", halpha);
    s_shape->add_option("--p1", hp1, "left density");
    s_shape->add_option("--p2", hp2, "bottom density");
    s_shape->add_option("--chi", hchi);
    s_shape->add_option("--psi", hpsi);
    s_shape->add_option("--domain", hdomain);
    s_shape->add_option("--grid", hgrid);
    s_shape->add_option("--out", hout);

    // covariance
    auto* s_cov = app.add_subcommand("covariance", "asymptotic covariances");
    ParamOpts cp;
    cp.add(s_cov);
    std::string ckind = "dw", cchi, cpsi, cout_;
    double cx1 = 1, cx2 = 1, cy = 1, cy1 = 1, cy2 = 1, calpha = 0, cp1 = 0.5, cp2 = 0.5;
    int cgrid = 128;
    s_cov->add_option("--kind", ckind)->check(CLI::IsMember({"dw", "bernoulli", "general", "low-density"}));
    s_cov->add_option("--x1", cx1);
    s_cov->add_option("--x2", cx2);
    s_cov->add_option("--y", cy);
    s_cov->add_option("--y1", cy1);
    s_cov->add_option("--y2", cy2);
    s_cov->add_option("--alpha", calpha);
    s_cov->add_option("--p1", cp1, "left density");
    s_cov->add_option("--p2", cp2, "bottom density");
    s_cov->add_option("--chi", cchi);
    s_cov->add_option("--psi", cpsi);
    s_cov->add_option("--grid", cgrid);
    s_cov->add_option("--out", cout_);

    // verify
    auto* s_ver = app.add_subcommand("verify", "verification suites; exit 3 if a suite fails");
    std::string vsuite = "all", vconfig, vout = "verify-out";
    s_ver->add_option("--suite", vsuite)->check(CLI::IsMember({"exact", "fourpoint", "lln", "clt", "lowdensity", "all"}));
    s_ver->add_option("--config", vconfig);
    s_ver->add_option("--out", vout);

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n" << app.help();
        return kInvalid;
    }

    if (threads <= 0)
        if (const char* env = std::getenv("VERTEX_TELEGRAPH_THREADS")) threads = std::atoi(env);
    if (threads > 0) omp_set_num_threads(threads);

    try {
        if (*s_sample) {
            ModelParams p = sp.get();
            BoundaryData bd = make_boundary(sboundary, sX, sY, sseed);
            Configuration c = sample(p, bd, sX, sY, sseed, sreplica);
            ojson cfg = {{"cmd", "sample"}, {"params", sp.json()}, {"X", sX}, {"Y", sY},
                         {"boundary", sboundary}, {"seed", sseed}, {"replica", sreplica}};
            emit_csv(c.H, sout, provenance("monte-carlo", cfg), out);
            if (!sedges.empty()) std::ofstream(sedges) << edges_json(c).dump() << '\n';
        } else if (*s_disc) {
            ModelParams p = dp.get();
            DiscreteProblem d = discrete_problem(p, dX, dY, dchi, dpsi, du);
            Field2D f = dmethod == "recursive" ? solve_recursive(d) : solve_riemann(d);
            ojson cfg = {{"cmd", "solve-discrete"}, {"params", dp.json()}, {"X", dX}, {"Y", dY}, {"chi", dchi},
                         {"psi", dpsi}, {"u", du}, {"method", dmethod}};
            emit_csv(f, dout, provenance("solver", cfg), out);
        } else if (*s_tel) {
            auto [a, b] = parse_pair(tdomain, "--domain");
            auto [gx, gy] = parse_pair(tgrid, "--grid");
            ContinuousProblem c = continuous_problem(tb1, tb2, a, b, tchi, tpsi, tu);
            Field2D f = tmethod == "quadrature" ? solve_quadrature(c, int(gx), int(gy))
                                                : picard_solve(integrated_form(c), int(gx), int(gy));
            ojson cfg = {{"cmd", "solve-telegraph"}, {"beta1", tb1}, {"beta2", tb2}, {"domain", tdomain},
                         {"grid", tgrid}, {"chi", tchi}, {"psi", tpsi}, {"u", tu}, {"method", tmethod}};
            emit_csv(f, tout, provenance("solver", cfg), out);
        } else if (*s_fk) {
            ModelParams p = fp.get();
            ojson cfg = {{"cmd", "fk"}, {"mode", fmode}, {"params", fp.json()}, {"X", fX}, {"Y", fY}, {"chi", fchi},
                         {"psi", fpsi}, {"u", fu}, {"samples", fsamples}, {"seed", fseed}};
            ojson j;
            if (fmode == "discrete") {
                int X = int(fX), Y = int(fY);
                if (X != fX || Y != fY) throw std::invalid_argument("discrete fk needs integer --X, --Y");
                DiscreteProblem d = discrete_problem(p, X, Y, fchi, fpsi, fu);
                j = estimate_json(fk_discrete(d, X, Y, fsamples, fseed));
                j["solver"] = solve_recursive(d)(X, Y);
            } else {
                ContinuousProblem c = continuous_problem(p.beta1, p.beta2, fX, fY, fchi, fpsi, fu);
                j = estimate_json(fk_continuous(c, fX, fY, fsamples, fseed));
                Field2D g = solve_quadrature(c, 64, 64);
                j["solver"] = g(64, 64);
            }
            j["provenance"] = provenance("monte-carlo", cfg);
            emit_json(j, fout, out);
        } else if (*s_shape) {
            ojson cfg = {{"cmd", "shape"}, {"kind", hkind}, {"params", hp.json()}, {"s", hs}, {"alpha", halpha},
                         {"p1", hp1}, {"p2", hp2}, {"chi", hchi}, {"psi", hpsi}, {"domain", hdomain}, {"grid", hgrid}};
            if (hx) cfg["x"] = *hx;
            if (hy) cfg["y"] = *hy;
            std::function<double(double, double)> h;
            std::optional<GridShape> gs;
            if (hkind == "dw-q0") {
                h = [&](double x, double y) { return limit_shape_q0(x, y, hs); };
            } else if (hkind == "dw") {
                ModelParams p = hp.get(halpha);
                h = [p, halpha](double x, double y) { return limit_shape_dw(x, y, halpha, p); };
            } else if (hkind == "bernoulli") {
                ModelParams p = hp.get();
                h = [p, hp1, hp2](double x, double y) {
                    return std::log(limit_shape_bernoulli_qh(x, y, hp1, hp2, p)) / p.lnQ;
                };
            } else {
                ModelParams p = hp.get();
                if (hchi.empty() || hpsi.empty()) throw std::invalid_argument("general shape needs --chi and --psi");
                auto [a, b] = parse_pair(hdomain.empty() ? "1,1" : hdomain, "--domain");
                auto [gx, gy] = parse_pair(hgrid.empty() ? "64,64" : hgrid, "--grid");
                Fn1 c = profile(hchi), s = profile(hpsi);
                ContinuousProblem pr;
                pr.beta1 = p.beta1;
                pr.beta2 = p.beta2;
                pr.a = a;
                pr.b = b;
                const double lq = p.lnQ;
                pr.chi = [c, lq](double x) { return std::exp(lq * c(x)); };
                pr.psi = [s, lq](double y) { return std::exp(lq * s(y)); };
                gs.emplace(solve_quadrature(pr, int(gx), int(gy)));
                h = [&gs, lq](double x, double y) { return std::log((*gs)(x, y).v) / lq; };
            }
            const std::string src = hkind == "general" ? "solver" : "formula";
            if (hx && hy) {
                ojson j = {{"kind", hkind}, {"x", *hx}, {"y", *hy}, {"h", h(*hx, *hy)}};
                j["provenance"] = provenance(src, cfg);
                emit_json(j, hout, out);
            } else {
                if (hdomain.empty() || hgrid.empty()) throw std::invalid_argument("give --x/--y or --domain/--grid");
                auto [a, b] = parse_pair(hdomain, "--domain");
                auto [gx, gy] = parse_pair(hgrid, "--grid");
                int nx = int(gx), ny = int(gy);
                if (nx < 1 || ny < 1) throw std::invalid_argument("grid must be positive");
                Field2D f(nx + 1, ny + 1, a / nx, b / ny);
                for (int j = 0; j <= ny; ++j)
                    for (int i = 0; i <= nx; ++i) f(i, j) = h(f.xc(i), f.yc(j));
                emit_csv(f, hout, provenance(src, cfg), out);
            }
        } else if (*s_cov) {
            ojson cfg = {{"cmd", "covariance"}, {"kind", ckind}, {"params", cp.json()}, {"x1", cx1}, {"x2", cx2},
                         {"y", cy}, {"y1", cy1}, {"y2", cy2}, {"alpha", calpha}, {"p1", cp1}, {"p2", cp2},
                         {"chi", cchi}, {"psi", cpsi}, {"grid", cgrid}};
            double v = 0;
            if (ckind == "dw") {
                ModelParams p = cp.get(calpha);
                v = covariance_dw(cx1, cx2, cy, calpha, p);
            } else if (ckind == "bernoulli") {
                v = covariance_bernoulli(cx1, cy1, cx2, cy2, cp1, cp2, cp.get());
            } else {
                ModelParams p = cp.get();
                if (cchi.empty() || cpsi.empty()) throw std::invalid_argument("--chi and --psi are required");
                Fn1 c = profile(cchi), s = profile(cpsi);
                double a = std::max(cx1, cx2), b = std::max(cy1, cy2);
                if (ckind == "general") {
                    ContinuousProblem pr;
                    pr.beta1 = p.beta1;
                    pr.beta2 = p.beta2;
                    pr.a = a;
                    pr.b = b;
                    const double lq = p.lnQ;
                    pr.chi = [c, lq](double x) { return std::exp(lq * c(x)); };
                    pr.psi = [s, lq](double y) { return std::exp(lq * s(y)); };
                    GridShape g(solve_quadrature(pr, cgrid, cgrid));
                    v = covariance_general(cx1, cy1, cx2, cy2, g, p.beta1, p.beta2);
                } else {
                    if (cx1 != cx2 || cy1 != cy2) throw std::invalid_argument("low-density variance is one-point");
                    GridShape g = telegraph_shape(p.beta1, p.beta2, a, b, c, s, cgrid, cgrid);
                    v = variance_low_density(cx1, cy1, g, p.beta1, p.beta2);
                }
            }
            ojson j = {{"kind", ckind}, {"value", v}};
            j["provenance"] = provenance("formula", cfg);
            emit_json(j, cout_, out);
        } else if (*s_ver) {
            ojson cfg = ojson::object();
            if (!vconfig.empty()) {
                std::ifstream f(vconfig);
                if (!f) throw std::invalid_argument("cannot open config " + vconfig);
                cfg = ojson::parse(f);
            }
            std::vector<std::string> suites =
                vsuite == "all" ? std::vector<std::string>{"exact", "fourpoint", "lln", "clt", "lowdensity"}
                                : std::vector<std::string>{vsuite};
            bool all_ok = true;
            ojson summary = ojson::object();
            for (auto& name : suites) {
                SuiteResult r = name == "exact"       ? suite_exact(cfg)
                                : name == "fourpoint" ? suite_fourpoint(cfg)
                                : name == "lln"       ? suite_lln(cfg)
                                : name == "clt"       ? suite_clt(cfg)
                                                      : suite_lowdensity(cfg);
                r.report["pass"] = r.pass;
                r.report["provenance"] = provenance(name == "exact" || name == "fourpoint" ? "solver" : "monte-carlo", cfg);
                write_report(vout, name, r.report);
                summary[name] = r.pass;
                out << name << ": " << (r.pass ? "PASS" : "FAIL") << '\n';
                all_ok = all_ok && r.pass;
            }
            write_report(vout, "summary", summary);
            if (!all_ok) throw StatFailure("verification suite failed");
        }
    } catch (const StatFailure& e) {
        err << e.what() << '\n';
        return kStatFail;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kNumerical;
    } catch (const nlohmann::json::exception& e) {
        err << "config error: " << e.what() << '\n';
        return kInvalid;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kInvalid;
    }
    return kOk;
}

int run_cli(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run_cli(args, std::cout, std::cerr);
}

}  // namespace vtel
