#include "vtel/stats.hpp"

#include "vtel/accumulate.hpp"
#include "vtel/telegraph_continuous.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace vtel {

double ExactDistribution::total() const { return std::accumulate(weight.begin(), weight.end(), 0.0); }

double ExactDistribution::expect(const std::function<double(const HeightField&)>& f) const {
    double s = 0;
    for (size_t i = 0; i < weight.size(); ++i) s += weight[i] * f(H[i]);
    return s;
}

ExactDistribution enumerate_exact(const ModelParams& p, const BoundaryData& bd, int X, int Y, int max_choices) {
    if (X < 1 || Y < 1) throw std::invalid_argument("extents must be >= 1");
    if (bd.X() < X || bd.Y() < Y) throw std::invalid_argument("boundary data shorter than the lattice");
    ExactDistribution out;
    HeightField H(X, Y);
    auto hb = bd.bottom_heights();
    auto hl = bd.left_heights();
    for (int x = 0; x <= X; ++x) H(x, 0) = hb[x];
    for (int y = 0; y <= Y; ++y) H(0, y) = hl[y];
    const int total = X * Y;
    // vertex k fills H(x+1, y+1) with x = k % X, y = k / X
    std::function<void(int, double, int)> dfs = [&](int k, double w, int used) {
        if (k == total) {
            out.weight.push_back(w);
            out.H.push_back(H);
            return;
        }
        int x = k % X, y = k / X;
        int h = H(x, y), hr = H(x + 1, y), hu = H(x, y + 1);
        bool lin = hu - h == 1, bin = h - hr == 1;
        if (lin == bin) {
            H(x + 1, y + 1) = h;
            dfs(k + 1, w, used);
            return;
        }
        if (used + 1 > max_choices) throw std::invalid_argument("enumerate_exact: branch bound exceeded");
        double pr = lin ? p.b1 : p.b2;
        int moved = lin ? h + 1 : h - 1;
        if (pr > 0) {
            H(x + 1, y + 1) = moved;
            dfs(k + 1, w * pr, used + 1);
        }
        if (pr < 1) {
            H(x + 1, y + 1) = h;
            dfs(k + 1, w * (1 - pr), used + 1);
        }
    };
    dfs(0, 1.0, 0);
    return out;
}

EstimatorResult mc_functional(const ModelParams& p, const BoundaryData& bd, int X, int Y,
                              const std::function<double(const HeightField&)>& f, long n, uint64_t seed) {
    if (n < 2) throw std::invalid_argument("need n >= 2");
    Accumulator a = parallel_replicas(n, [&](long i) { return f(sample(p, bd, X, Y, seed, uint64_t(i)).H); });
    return {a.mean, a.std_error(), n, seed};
}

EstimatorResult mc_functional_serial(const ModelParams& p, const BoundaryData& bd, int X, int Y,
                                     const std::function<double(const HeightField&)>& f, long n, uint64_t seed) {
    if (n < 2) throw std::invalid_argument("need n >= 2");
    Accumulator a = serial_replicas(n, [&](long i) { return f(sample(p, bd, X, Y, seed, uint64_t(i)).H); });
    return {a.mean, a.std_error(), n, seed};
}

std::vector<int> sample_points(const ModelParams& p, const BoundaryData& bd, int X, int Y, uint64_t key,
                               const std::vector<LatticePoint>& pts) {
    std::vector<int> out(pts.size());
    int ymax = 0;
    for (auto& [x, y] : pts) {
        if (x < 0 || x > X || y < 0 || y > Y) throw std::invalid_argument("point outside the lattice");
        ymax = std::max(ymax, y);
    }
    sample_rows(p, bd, X, std::max(ymax, 1), key, [&](int y, const int* row) {
        for (size_t k = 0; k < pts.size(); ++k)
            if (pts[k].second == y) out[k] = row[pts[k].first];
    });
    return out;
}

std::vector<int> sample_heights(const ModelParams& p, const BoundaryData& bd, int X, int Y,
                                const std::vector<LatticePoint>& pts, long n, uint64_t seed) {
    const size_t k = pts.size();
    std::vector<int> out(size_t(n) * k);
#pragma omp parallel for schedule(dynamic, 16)
    for (long i = 0; i < n; ++i) {
        auto h = sample_points(p, bd, X, Y, stream_key(seed, uint64_t(i)), pts);
        std::copy(h.begin(), h.end(), out.begin() + size_t(i) * k);
    }
    return out;
}

std::vector<int> sample_heights_serial(const ModelParams& p, const BoundaryData& bd, int X, int Y,
                                       const std::vector<LatticePoint>& pts, long n, uint64_t seed) {
    const size_t k = pts.size();
    std::vector<int> out(size_t(n) * k);
    for (long i = 0; i < n; ++i) {
        auto h = sample_points(p, bd, X, Y, stream_key(seed, uint64_t(i)), pts);
        std::copy(h.begin(), h.end(), out.begin() + size_t(i) * k);
    }
    return out;
}

// ------------------------------------------------------------ LLN

LlnReport lln_experiment(double beta1, double beta2, const BoundaryBuilder& boundary,
                         const std::function<double(double, double)>& h, const std::vector<MacroPoint>& grid,
                         const std::vector<double>& Ls, long n, uint64_t seed) {
    if (grid.empty() || Ls.empty() || n < 2) throw std::invalid_argument("lln_experiment: empty grid, L-list or n < 2");
    LlnReport rep;
    double xm = 0, ym = 0;
    for (auto& [x, y] : grid) {
        xm = std::max(xm, x);
        ym = std::max(ym, y);
    }
    std::vector<double> ref(grid.size());
    for (size_t k = 0; k < grid.size(); ++k) ref[k] = h(grid[k].first, grid[k].second);
    for (double L : Ls) {
        ModelParams p = params_from_betas(beta1, beta2, L);
        int X = std::max(1, int(std::ceil(L * xm))), Y = std::max(1, int(std::ceil(L * ym)));
        std::vector<LatticePoint> pts;
        for (auto& [x, y] : grid) pts.push_back({int(std::lround(L * x)), int(std::lround(L * y))});
        BoundaryData bd = boundary(X, Y, L);
        auto H = sample_heights(p, bd, X, Y, pts, n, seed);
        LlnRow row;
        row.L = L;
        row.n = n;
        const size_t k = pts.size();
        std::vector<Accumulator> acc(k);
        double per = 0;
        for (long i = 0; i < n; ++i) {
            double s = 0;
            for (size_t j = 0; j < k; ++j) {
                double v = H[size_t(i) * k + j] / L;
                acc[j].add(v);
                s = std::max(s, std::abs(v - ref[j]));
            }
            per += s;
        }
        row.mean_sample_err = per / n;
        for (size_t j = 0; j < k; ++j) {
            row.sup_mean_err = std::max(row.sup_mean_err, std::abs(acc[j].mean - ref[j]));
            row.mc_se = std::max(row.mc_se, acc[j].std_error());
        }
        rep.rows.push_back(row);
    }
    rep.decreasing = true;
    for (size_t i = 1; i < rep.rows.size(); ++i)
        if (!(rep.rows[i].sup_mean_err < rep.rows[i - 1].sup_mean_err)) rep.decreasing = false;
    return rep;
}

// ------------------------------------------------------------ CLT

Moments4 sample_moments(const std::vector<double>& v) {
    Moments4 m;
    const double n = double(v.size());
    if (v.size() < 4) throw std::invalid_argument("need at least 4 samples");
    for (double x : v) m.mean += x;
    m.mean /= n;
    double m2 = 0, m3 = 0, m4 = 0;
    for (double x : v) {
        double d = x - m.mean, d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    m.var = m2 * n / (n - 1);
    if (m2 > 0) {
        m.skew = m3 / std::pow(m2, 1.5);
        m.exkurt = m4 / (m2 * m2) - 3;
    }
    return m;
}

CltReport clt_experiment(const ModelParams& p, const BoundaryData& bd, int X, int Y,
                         const std::vector<LatticePoint>& pts, long n, uint64_t seed) {
    if (pts.empty() || n < 4) throw std::invalid_argument("clt_experiment: need points and n >= 4");
    const size_t k = pts.size();
    auto H = sample_heights(p, bd, X, Y, pts, n, seed);
    CltReport r;
    r.k = int(k);
    r.n = n;
    std::vector<std::vector<double>> v(k, std::vector<double>(n));
    for (long i = 0; i < n; ++i)
        for (size_t j = 0; j < k; ++j) v[j][i] = std::pow(p.q, H[size_t(i) * k + j]);
    r.mean.resize(k);
    for (size_t j = 0; j < k; ++j) r.mean[j] = std::accumulate(v[j].begin(), v[j].end(), 0.0) / n;
    r.cov.assign(k * k, 0);
    r.cov_se.assign(k * k, 0);
    for (size_t a = 0; a < k; ++a)
        for (size_t b = a; b < k; ++b) {
            Accumulator acc;
            for (long i = 0; i < n; ++i) acc.add((v[a][i] - r.mean[a]) * (v[b][i] - r.mean[b]));
            double c = acc.mean * n / (n - 1) * p.L, se = acc.std_error() * p.L;
            r.cov[a * k + b] = r.cov[b * k + a] = c;
            r.cov_se[a * k + b] = r.cov_se[b * k + a] = se;
        }
    r.skew_band = 4 * std::sqrt(6.0 / n);
    r.kurt_band = 4 * std::sqrt(24.0 / n);
    r.skew.resize(k);
    r.exkurt.resize(k);
    r.degenerate.resize(k);
    for (size_t j = 0; j < k; ++j) {
        Moments4 m = sample_moments(v[j]);
        r.degenerate[j] = !(m.var > 0);
        r.skew[j] = m.skew;
        r.exkurt[j] = m.exkurt;
        if (!r.degenerate[j] && (std::abs(m.skew) > r.skew_band || std::abs(m.exkurt) > r.kurt_band))
            r.normality_ok = false;
    }
    return r;
}

double max_z(const CltReport& r, const std::vector<double>& expected) {
    if (expected.size() != r.cov.size()) throw std::invalid_argument("expected matrix has the wrong size");
    double z = 0;
    for (size_t i = 0; i < expected.size(); ++i)
        if (r.cov_se[i] > 0) z = std::max(z, std::abs(r.cov[i] - expected[i]) / r.cov_se[i]);
    return z;
}

// ------------------------------------------------------------ low density

GridShape telegraph_shape(double beta1, double beta2, double a, double b, const Fn1& chi, const Fn1& psi, int nx,
                          int ny) {
    ContinuousProblem cp;
    cp.beta1 = beta1;
    cp.beta2 = beta2;
    cp.a = a;
    cp.b = b;
    cp.chi = chi;
    cp.psi = psi;
    return GridShape(solve_quadrature(cp, nx, ny));
}

std::vector<LowDensityRow> low_density_experiment(double beta1, double beta2, double delta, const Fn1& chi,
                                                  const Fn1& psi, const std::vector<double>& Ls,
                                                  const std::vector<MacroPoint>& grid, MacroPoint var_point,
                                                  long n, uint64_t seed, int solver_n) {
    if (!(delta > 0 && delta < 1)) throw std::invalid_argument("need 0 < delta < 1");
    if (n < 4) throw std::invalid_argument("need n >= 4");
    double xm = var_point.first, ym = var_point.second;
    for (auto& [x, y] : grid) {
        xm = std::max(xm, x);
        ym = std::max(ym, y);
    }
    GridShape shape = telegraph_shape(beta1, beta2, xm, ym, chi, psi, solver_n, solver_n);
    double vform = variance_low_density(var_point.first, var_point.second, shape, beta1, beta2);
    std::vector<LowDensityRow> rows;
    for (double L : Ls) {
        ModelParams p = params_from_betas(beta1, beta2, L);
        int X = std::max(1, int(std::ceil(L * xm))), Y = std::max(1, int(std::ceil(L * ym)));
        BoundaryData bd = BoundaryData::low_density(X, Y, delta, chi, psi, L);
        const double scale = std::pow(L, 1 - delta);
        std::vector<LatticePoint> pts;
        for (auto& [x, y] : grid) pts.push_back({int(std::lround(L * x)), int(std::lround(L * y))});
        pts.push_back({int(std::lround(L * var_point.first)), int(std::lround(L * var_point.second))});
        const size_t k = pts.size();
        auto H = sample_heights(p, bd, X, Y, pts, n, seed);
        LowDensityRow row;
        row.L = L;
        row.n = n;
        for (size_t j = 0; j + 1 < k; ++j) {
            double m = 0;
            for (long i = 0; i < n; ++i) m += H[size_t(i) * k + j];
            m /= n * scale;
            row.sup_mean_err = std::max(row.sup_mean_err, std::abs(m - shape(grid[j].first, grid[j].second).v));
        }
        std::vector<double> v(n);
        for (long i = 0; i < n; ++i) v[i] = H[size_t(i) * k + k - 1] / std::sqrt(scale);
        Moments4 m = sample_moments(v);
        row.var_emp = m.var;
        // se of the sample variance from the fourth moment
        row.var_se = m.var * std::sqrt(2.0 / (n - 1.0) + m.exkurt / n);
        row.var_formula = vform;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace vtel
