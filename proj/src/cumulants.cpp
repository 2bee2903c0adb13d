#include "vtel/cumulants.hpp"

#include "vtel/core.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace vtel {

std::vector<std::vector<uint32_t>> set_partitions(int n) {
    if (n < 0 || n > 12) throw std::invalid_argument("set_partitions: n out of range");
    std::vector<std::vector<uint32_t>> out;
    if (n == 0) {
        out.push_back({});
        return out;
    }
    // restricted growth strings: a[0] = 0, a[i] <= 1 + max(a[0..i-1])
    std::vector<int> a(n, 0);
    while (true) {
        int nb = 0;
        for (int v : a) nb = std::max(nb, v + 1);
        std::vector<uint32_t> blocks(nb, 0);
        for (int i = 0; i < n; ++i) blocks[a[i]] |= 1u << i;
        out.push_back(std::move(blocks));
        int i = n - 1;
        for (; i > 0; --i) {
            int mx = 0;
            for (int k = 0; k < i; ++k) mx = std::max(mx, a[k]);
            if (a[i] <= mx) {
                ++a[i];
                for (int k = i + 1; k < n; ++k) a[k] = 0;
                break;
            }
        }
        if (i == 0) break;
    }
    return out;
}

namespace {

template <class T>
T cumulant_of(const std::vector<T>& m, int n) {
    static const std::vector<double> fact{1, 1, 2, 6, 24, 120, 720, 5040, 40320, 362880, 3628800, 39916800};
    T c = 0;
    for (const auto& s : set_partitions(n)) {
        int l = int(s.size());
        T prod = 1;
        for (uint32_t b : s) prod *= m[b];
        c += ((l % 2 == 1) ? 1.0 : -1.0) * fact[l - 1] * prod;
    }
    return c;
}

}  // namespace

double cumulant(const MomentTable& M, int n) {
    if (n < 1 || n > 8) throw std::invalid_argument("cumulant: need 1 <= n <= 8");
    if (M.n < n || M.m.size() < (size_t(1) << n)) throw std::invalid_argument("cumulant: moment table misses subsets");
    if (M.m[0] != 1) throw std::invalid_argument("cumulant: M_empty must be 1");
    return cumulant_of(M.m, n);
}

MomentTable moments_from_atoms(const std::vector<std::vector<double>>& atoms, const std::vector<double>& w) {
    if (atoms.empty() || atoms.size() != w.size()) throw std::invalid_argument("atoms and weights must match");
    int n = int(atoms[0].size());
    MomentTable M(n);
    for (uint32_t A = 1; A < (1u << n); ++A) {
        double s = 0;
        for (size_t k = 0; k < atoms.size(); ++k) {
            double p = w[k];
            for (int i = 0; i < n; ++i)
                if (A >> i & 1) p *= atoms[k][i];
            s += p;
        }
        M[A] = s;
    }
    return M;
}

namespace {

// Σ over perfect matchings of the set S of Π C_ij
double isserlis(uint32_t S, const std::vector<std::vector<double>>& C) {
    if (S == 0) return 1;
    if (__builtin_popcount(S) % 2) return 0;
    int i = __builtin_ctz(S);
    uint32_t rest = S & ~(1u << i);
    double t = 0;
    for (uint32_t r = rest; r; r &= r - 1) {
        int j = __builtin_ctz(r);
        t += C[i][j] * isserlis(rest & ~(1u << j), C);
    }
    return t;
}

}  // namespace

MomentTable gaussian_moments(const std::vector<double>& mu, const std::vector<std::vector<double>>& C) {
    int n = int(mu.size());
    if (int(C.size()) != n) throw std::invalid_argument("covariance size mismatch");
    MomentTable M(n);
    for (uint32_t A = 1; A < (1u << n); ++A) {
        double s = 0;
        // split A into the centred part S and the mean part A\S
        for (uint32_t S = A;; S = (S - 1) & A) {
            double p = isserlis(S, C);
            for (int i = 0; i < n; ++i)
                if ((A & ~S) >> i & 1) p *= mu[i];
            s += p;
            if (S == 0) break;
        }
        M[A] = s;
    }
    return M;
}

namespace {

template <class T>
T shifted_moment_t(const std::vector<double>& r, const std::vector<std::vector<double>>& a, const MomentTable& xi,
                   uint32_t A, T eps) {
    const int n = int(r.size());
    T s = 0;
    for (uint32_t S = A;; S = (S - 1) & A) {
        T p = xi[S];
        for (int i = 0; i < n; ++i) {
            if (S >> i & 1)
                p *= eps;
            else if (A >> i & 1)
                p *= r[i];
        }
        s += p;
        if (S == 0) break;
    }
    for (int k = 0; k < n; ++k)
        for (int l = k + 1; l < n; ++l)
            if ((A >> k & 1) && (A >> l & 1)) s *= T(1) + eps * eps * a[k][l];
    return s;
}

}  // namespace

double shifted_moment(const std::vector<double>& r, const std::vector<std::vector<double>>& a, const MomentTable& xi,
                      uint32_t A, double eps) {
    return shifted_moment_t<double>(r, a, xi, A, eps);
}

ShiftedCumulantReport shifted_cumulant_expansion_check(const std::vector<double>& r,
                                                       const std::vector<std::vector<double>>& a,
                                                       const MomentTable& xi, double radius, int nodes) {
    using C = std::complex<double>;
    const int n = int(r.size());
    if (n < 3 || n > 6) throw std::invalid_argument("shifted cumulant check needs 3 <= n <= 6");
    if (xi.n != n || int(a.size()) != n) throw std::invalid_argument("size mismatch between r, a and moments");
    if (!(radius > 0)) throw std::invalid_argument("radius must be positive");
    ShiftedCumulantReport rep;
    rep.n = n;
    rep.degree = n * n;
    rep.nodes = nodes > 0 ? nodes : 2 * (rep.degree + 1);
    if (rep.nodes < rep.degree + 1)
        throw std::invalid_argument("too few evaluation points for a degree-n^2 polynomial; spread more eps values");
    const int N = rep.nodes;
    std::vector<C> vals(N);
    std::vector<C> m(size_t(1) << n);
    for (int j = 0; j < N; ++j) {
        C eps = std::polar(radius, 2 * M_PI * j / N);
        for (uint32_t A = 0; A < m.size(); ++A) m[A] = A == 0 ? C(1) : shifted_moment_t<C>(r, a, xi, A, eps);
        vals[j] = cumulant_of(m, n);
    }
    rep.coeffs.assign(rep.degree + 1, 0);
    for (int k = 0; k <= rep.degree; ++k) {
        C s = 0;
        for (int j = 0; j < N; ++j) s += vals[j] * std::polar(1.0, -2 * M_PI * double(j) * k / N);
        rep.coeffs[k] = (s / double(N)).real() / std::pow(radius, k);
    }
    rep.cn = cumulant(xi, n);
    rep.leading_rel_err = std::abs(rep.coeffs[n] - rep.cn) / std::max(std::abs(rep.cn), 1e-300);
    for (int k = 0; k < n; ++k) rep.lower_max_abs = std::max(rep.lower_max_abs, std::abs(rep.coeffs[k]));
    return rep;
}

}  // namespace vtel
