#include "vtel/core.hpp"
#include "vtel/rng.hpp"

#include <cmath>
#include <sstream>

namespace vtel {

ModelParams derive_params(double b1, double b2, double L, double alpha) {
    if (!(b1 > 0 && b1 < 1 && b2 > 0 && b2 < 1))
        throw std::invalid_argument("weights b1, b2 must lie in (0,1)");
    if (b1 == b2) throw std::invalid_argument("b1 = b2 gives q = 1, which is degenerate");
    if (!(L > 0)) throw std::invalid_argument("L must be positive");
    if (alpha < 0) throw std::invalid_argument("alpha must be nonnegative");
    ModelParams p;
    p.b1 = b1;
    p.b2 = b2;
    p.L = L;
    p.alpha = alpha;
    p.q = b2 / b1;
    p.beta1 = -L * std::log(b1);
    p.beta2 = -L * std::log(b2);
    p.lnQ = p.beta1 - p.beta2;
    p.Q = std::exp(p.lnQ);
    p.s = p.beta1 / p.beta2;
    return p;
}

ModelParams params_from_betas(double beta1, double beta2, double L, double alpha) {
    if (!(beta1 > 0 && beta2 > 0)) throw std::invalid_argument("beta1, beta2 must be positive");
    if (beta1 == beta2) throw std::invalid_argument("beta1 = beta2 is degenerate");
    ModelParams p = derive_params(std::exp(-beta1 / L), std::exp(-beta2 / L), L, alpha);
    // keep the user's betas exactly
    p.beta1 = beta1;
    p.beta2 = beta2;
    p.lnQ = beta1 - beta2;
    p.Q = std::exp(p.lnQ);
    p.s = beta1 / beta2;
    return p;
}

std::vector<int> BoundaryData::left_heights() const {
    std::vector<int> h(left.size() + 1, 0);
    for (size_t j = 0; j < left.size(); ++j) h[j + 1] = h[j] + left[j];
    return h;
}

std::vector<int> BoundaryData::bottom_heights() const {
    std::vector<int> h(bottom.size() + 1, 0);
    for (size_t i = 0; i < bottom.size(); ++i) h[i + 1] = h[i] - bottom[i];
    return h;
}

BoundaryData BoundaryData::empty(int X, int Y) {
    BoundaryData b;
    b.left.assign(Y, 0);
    b.bottom.assign(X, 0);
    return b;
}

BoundaryData BoundaryData::domain_wall(int X, int Y) {
    BoundaryData b;
    b.left.assign(Y, 1);
    b.bottom.assign(X, 0);
    return b;
}

BoundaryData BoundaryData::bernoulli(int X, int Y, double p1, double p2, uint64_t seed) {
    if (!(p1 >= 0 && p1 <= 1 && p2 >= 0 && p2 <= 1))
        throw std::invalid_argument("bernoulli densities must lie in [0,1]");
    BoundaryData b;
    uint64_t k = stream_key(seed, 0xb0b0ULL);
    b.left.resize(Y);
    b.bottom.resize(X);
    for (int y = 0; y < Y; ++y) b.left[y] = uniform_at(k, 0, y + 1) < p1;
    for (int x = 0; x < X; ++x) b.bottom[x] = uniform_at(k, x + 1, 0) < p2;
    return b;
}

namespace detail {
void check_steps(const std::vector<int>& h, int lo, int hi, const char* what) {
    if (h.empty() || h[0] != 0) throw std::invalid_argument(std::string(what) + ": must start at 0");
    for (size_t i = 1; i < h.size(); ++i) {
        int d = h[i] - h[i - 1];
        if (d < lo || d > hi)
            throw std::invalid_argument(std::string(what) + ": illegal increment at " + std::to_string(i));
    }
}
}  // namespace detail

BoundaryData BoundaryData::from_heights(const std::vector<int>& hb, const std::vector<int>& hl) {
    detail::check_steps(hb, -1, 0, "bottom boundary");
    detail::check_steps(hl, 0, 1, "left boundary");
    BoundaryData b;
    b.bottom.resize(hb.size() - 1);
    b.left.resize(hl.size() - 1);
    for (size_t i = 1; i < hb.size(); ++i) b.bottom[i - 1] = uint8_t(hb[i - 1] - hb[i]);
    for (size_t j = 1; j < hl.size(); ++j) b.left[j - 1] = uint8_t(hl[j] - hl[j - 1]);
    return b;
}

int HeightField::at(int x, int y) const {
    if (x < 0 || y < 0 || x > X_ || y > Y_) throw std::out_of_range("height coordinates out of range");
    return (*this)(x, y);
}

std::string HeightField::check() const {
    std::ostringstream os;
    if (!v_.empty() && (*this)(0, 0) != 0) return "H(0,0) != 0";
    for (int y = 0; y <= Y_; ++y)
        for (int x = 0; x <= X_; ++x) {
            if (y < Y_) {
                int d = (*this)(x, y + 1) - (*this)(x, y);
                if (d != 0 && d != 1) {
                    os << "vertical increment " << d << " at (" << x << "," << y << ")";
                    return os.str();
                }
            }
            if (x < X_) {
                int d = (*this)(x + 1, y) - (*this)(x, y);
                if (d != 0 && d != -1) {
                    os << "horizontal increment " << d << " at (" << x << "," << y << ")";
                    return os.str();
                }
            }
        }
    return {};
}

int modified_height(const HeightField& H, int x, int y) { return x - y - 1 + 2 * H.at(x, y); }

double extend_bilinear(const HeightField& H, double x, double y) {
    if (!(x >= 0 && y >= 0 && x <= H.X() && y <= H.Y()))
        throw std::out_of_range("extend_bilinear: point outside the lattice rectangle");
    int i = std::min(int(std::floor(x)), std::max(H.X() - 1, 0));
    int j = std::min(int(std::floor(y)), std::max(H.Y() - 1, 0));
    double fx = H.X() ? x - i : 0, fy = H.Y() ? y - j : 0;
    auto val = [&](int a, int b) { return double(H(std::min(a, H.X()), std::min(b, H.Y()))); };
    double lo = (1 - fx) * val(i, j) + fx * val(i + 1, j);
    double hi = (1 - fx) * val(i, j + 1) + fx * val(i + 1, j + 1);
    return (1 - fy) * lo + fy * hi;
}

double Field2D::max_abs_diff(const Field2D& o) const {
    if (nx != o.nx || ny != o.ny) throw std::invalid_argument("field shapes differ");
    double m = 0;
    for (size_t k = 0; k < v.size(); ++k) m = std::max(m, std::abs(v[k] - o.v[k]));
    return m;
}

Field2D to_field(const HeightField& H) {
    Field2D f(H.X() + 1, H.Y() + 1);
    for (int y = 0; y <= H.Y(); ++y)
        for (int x = 0; x <= H.X(); ++x) f(x, y) = H(x, y);
    return f;
}

}  // namespace vtel
