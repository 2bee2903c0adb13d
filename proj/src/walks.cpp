#include "vtel/walks.hpp"
#include "vtel/accumulate.hpp"
#include "vtel/rng.hpp"

#include <cmath>

namespace vtel {

namespace {
constexpr long kMaxSteps = 10'000'000;
}

WalkPath reversed_walk(double b1, double b2, int x0, int y0, Orientation o, uint64_t seed, uint64_t stream) {
    if (x0 < 0 || y0 < 0 || (x0 == 0 && y0 == 0)) throw std::invalid_argument("walk must start in the quadrant");
    CounterStream rng(stream_key(seed, stream));
    WalkPath w;
    w.start_orientation = o;
    int x = x0, y = y0;
    bool left = o == Orientation::Horizontal;
    w.xs.push_back(x);
    w.ys.push_back(y);
    for (long step = 0;; ++step) {
        if (step > kMaxSteps) throw NumericalError("reversed walk exceeded the step cap");
        if (left) --x;
        else --y;
        if (x == 0 || y == 0) break;
        bool keep = rng.uniform() < (left ? b1 : b2);
        if (!keep) {
            w.xs.push_back(x);
            w.ys.push_back(y);
            left = !left;
        }
    }
    w.xs.push_back(x);
    w.ys.push_back(y);
    w.exit_left = x == 0;
    return w;
}

WalkPath persistent_walk(double beta1, double beta2, double x0, double y0, Orientation o, uint64_t seed,
                         uint64_t stream) {
    if (!(beta1 > 0 && beta2 > 0)) throw std::invalid_argument("rates must be positive");
    if (!(x0 > 0 && y0 > 0)) throw std::invalid_argument("walk must start inside the quadrant");
    CounterStream rng(stream_key(seed, stream));
    WalkPath w;
    w.start_orientation = o;
    double x = x0, y = y0;
    bool left = o == Orientation::Horizontal;
    w.xs.push_back(x);
    w.ys.push_back(y);
    for (long step = 0;; ++step) {
        if (step > kMaxSteps) throw NumericalError("persistent walk exceeded the step cap");
        double d = -std::log1p(-rng.uniform()) / (left ? beta1 : beta2);
        if (left) {
            if (x - d <= 0) {
                x = 0;
                break;
            }
            x -= d;
        } else {
            if (y - d <= 0) {
                y = 0;
                break;
            }
            y -= d;
        }
        w.xs.push_back(x);
        w.ys.push_back(y);
        left = !left;
    }
    w.xs.push_back(x);
    w.ys.push_back(y);
    w.exit_left = x == 0;
    return w;
}

std::vector<int> walk_top(const WalkPath& w, int X) {
    std::vector<int> top(X + 1, -1);
    for (size_t k = 0; k + 1 < w.xs.size(); ++k) {
        int xa = int(w.xs[k]), xb = int(w.xs[k + 1]), y = int(w.ys[k]);
        if (w.ys[k] != w.ys[k + 1]) continue;  // vertical segment
        for (int x = std::min(xa - 1, X); x >= xb; --x) top[x] = y;
    }
    return top;
}

std::vector<int> walk_right(const WalkPath& w, int Y) {
    std::vector<int> right(Y + 1, -1);
    for (size_t k = 0; k + 1 < w.xs.size(); ++k) {
        int ya = int(w.ys[k]), yb = int(w.ys[k + 1]), x = int(w.xs[k]);
        if (w.xs[k] != w.xs[k + 1]) continue;
        for (int y = std::min(ya - 1, Y); y >= yb; --y) right[y] = x;
    }
    return right;
}

int i_between(const WalkPath& tm, const WalkPath& tb, int x, int y) {
    if (x < 0 || y < 0) throw std::out_of_range("i_between: negative coordinates");
    auto top = walk_top(tm, x);
    auto right = walk_right(tb, y);
    return int(top[x] >= y) + int(right[y] >= x) - 1;
}

namespace {

struct DiscreteFk {
    const DiscreteProblem& p;
    int X, Y;
    uint64_t seed;
    double c;
    std::vector<double> colsum, rowsum;  // colsum[x*(Y+1)+t] = Σ_{y≤t} u(x,y)
    double total = 0;

    DiscreteFk(const DiscreteProblem& p_, int X_, int Y_, uint64_t s) : p(p_), X(X_), Y(Y_), seed(s), c(p_.chi[0]) {
        if (!p.u.v.empty()) {
            colsum.assign(size_t(X + 1) * (Y + 1), 0);
            rowsum.assign(size_t(Y + 1) * (X + 1), 0);
            for (int x = 1; x <= X; ++x)
                for (int y = 1; y <= Y; ++y) colsum[x * (Y + 1) + y] = colsum[x * (Y + 1) + y - 1] + p.u_at(x, y);
            for (int y = 1; y <= Y; ++y)
                for (int x = 1; x <= X; ++x) rowsum[y * (X + 1) + x] = rowsum[y * (X + 1) + x - 1] + p.u_at(x, y);
            for (int x = 1; x <= X; ++x) total += colsum[x * (Y + 1) + Y];
        }
    }

    double operator()(long i) const {
        WalkPath tm = reversed_walk(p.b1, p.b2, X + 1, Y, Orientation::Horizontal, seed, 2 * uint64_t(i));
        WalkPath tb = reversed_walk(p.b1, p.b2, X, Y + 1, Orientation::Vertical, seed, 2 * uint64_t(i) + 1);
        double v = 0;
        if (tm.exit_left) v += p.psi[int(tm.ys.back())] - c;
        if (!tb.exit_left) v += p.chi[int(tb.xs.back())] - c;
        if (!colsum.empty()) {
            auto top = walk_top(tm, X);
            auto right = walk_right(tb, Y);
            double s = -total;
            for (int x = 1; x <= X; ++x)
                if (top[x] >= 1) s += colsum[x * (Y + 1) + std::min(top[x], Y)];
            for (int y = 1; y <= Y; ++y)
                if (right[y] >= 1) s += rowsum[y * (X + 1) + std::min(right[y], X)];
            v += s;
        }
        return v;
    }
};

void check_target(const DiscreteProblem& p, int X, int Y, long n) {
    p.validate();
    if (n < 2) throw std::invalid_argument("need at least two samples");
    if (X < 1 || Y < 1 || X > p.X || Y > p.Y) throw std::out_of_range("target outside the problem rectangle");
}

}  // namespace

Estimate fk_discrete(const DiscreteProblem& p, int X, int Y, long n, uint64_t seed) {
    check_target(p, X, Y, n);
    DiscreteFk f(p, X, Y, seed);
    Accumulator a = parallel_replicas(n, f);
    return {f.c + a.mean, a.std_error(), a.n, seed};
}

Estimate fk_discrete_serial(const DiscreteProblem& p, int X, int Y, long n, uint64_t seed) {
    check_target(p, X, Y, n);
    DiscreteFk f(p, X, Y, seed);
    Accumulator a = serial_replicas(n, f);
    return {f.c + a.mean, a.std_error(), a.n, seed};
}

Estimate fk_continuous(const ContinuousProblem& p, double X, double Y, long n, uint64_t seed, int cells) {
    p.validate();
    if (n < 2) throw std::invalid_argument("need at least two samples");
    if (!(X > 0 && Y > 0)) throw std::invalid_argument("target must lie inside the quadrant");
    const double c = p.chi(0);
    const int m = cells;
    const double hx = X / m, hy = Y / m;
    // cell averages by 2×2 Gauss points; colcum[i][j] = ∫₀^{j·hy} u over column i (per unit width)
    std::vector<double> cell;
    if (p.u) {
        cell.assign(size_t(m) * m, 0);
        const double g = 0.5 / std::sqrt(3.0);
        for (int j = 0; j < m; ++j)
            for (int i = 0; i < m; ++i) {
                double s = 0;
                for (double gx : {-g, g})
                    for (double gy : {-g, g}) s += p.u((i + 0.5 + gx) * hx, (j + 0.5 + gy) * hy);
                cell[size_t(j) * m + i] = s / 4;
            }
    }
    std::vector<double> colcum, rowcum;
    double total = 0;
    if (!cell.empty()) {
        colcum.assign(size_t(m) * (m + 1), 0);
        rowcum.assign(size_t(m) * (m + 1), 0);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) colcum[i * (m + 1) + j + 1] = colcum[i * (m + 1) + j] + cell[j * m + i] * hy;
        for (int j = 0; j < m; ++j)
            for (int i = 0; i < m; ++i) rowcum[j * (m + 1) + i + 1] = rowcum[j * (m + 1) + i] + cell[j * m + i] * hx;
        for (int i = 0; i < m; ++i) total += colcum[i * (m + 1) + m] * hx;
    }
    // ∫₀^t u(column i, y) dy
    auto col_int = [&](int i, double t) {
        if (t <= 0) return 0.0;
        double q = std::min(t, Y) / hy;
        int j = std::min(int(q), m);
        double v = colcum[i * (m + 1) + j];
        if (j < m) v += (q - j) * hy * cell[j * m + i];
        return v;
    };
    auto row_int = [&](int j, double t) {
        if (t <= 0) return 0.0;
        double q = std::min(t, X) / hx;
        int i = std::min(int(q), m);
        double v = rowcum[j * (m + 1) + i];
        if (i < m) v += (q - i) * hx * cell[j * m + i];
        return v;
    };
    // ∫ over abscissas (xa, xb) of the column integrals up to height t
    auto strip_x = [&](double xa, double xb, double t) {
        double s = 0;
        int ia = std::max(0, int(xa / hx)), ib = std::min(m - 1, int(xb / hx));
        for (int i = ia; i <= ib; ++i) {
            double lo = std::max(xa, i * hx), hi = std::min(xb, (i + 1) * hx);
            if (hi > lo) s += (hi - lo) * col_int(i, t);
        }
        return s;
    };
    auto strip_y = [&](double ya, double yb, double t) {
        double s = 0;
        int ja = std::max(0, int(ya / hy)), jb = std::min(m - 1, int(yb / hy));
        for (int j = ja; j <= jb; ++j) {
            double lo = std::max(ya, j * hy), hi = std::min(yb, (j + 1) * hy);
            if (hi > lo) s += (hi - lo) * row_int(j, t);
        }
        return s;
    };
    auto body = [&](long i) {
        WalkPath tm = persistent_walk(p.beta1, p.beta2, X, Y, Orientation::Horizontal, seed, 2 * uint64_t(i));
        WalkPath tb = persistent_walk(p.beta1, p.beta2, X, Y, Orientation::Vertical, seed, 2 * uint64_t(i) + 1);
        double v = 0;
        if (tm.exit_left) v += p.psi(tm.ys.back()) - c;
        if (!tb.exit_left) v += p.chi(tb.xs.back()) - c;
        if (!cell.empty()) {
            double s = -total;
            for (size_t k = 0; k + 1 < tm.xs.size(); ++k)
                if (tm.ys[k] == tm.ys[k + 1]) s += strip_x(tm.xs[k + 1], tm.xs[k], tm.ys[k]);
            for (size_t k = 0; k + 1 < tb.xs.size(); ++k)
                if (tb.xs[k] == tb.xs[k + 1]) s += strip_y(tb.ys[k + 1], tb.ys[k], tb.xs[k]);
            v += s;
        }
        return v;
    };
    Accumulator a = parallel_replicas(n, body);
    return {c + a.mean, a.std_error(), a.n, seed};
}

}  // namespace vtel
