#pragma once
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace vtel {

// Numerical non-convergence; distinct from bad input so the CLI can map it.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ModelParams {
    double b1 = 0, b2 = 0, L = 1;
    double q = 0, beta1 = 0, beta2 = 0;
    double lnQ = 0;   // ln 𝔮 = β1 − β2
    double Q = 0;     // 𝔮
    double s = 0;     // 𝔰 = β1/β2
    double alpha = 0; // only read by the contour formulas
};

ModelParams derive_params(double b1, double b2, double L, double alpha = 0.0);
ModelParams params_from_betas(double beta1, double beta2, double L, double alpha = 0.0);

struct BoundaryData {
    std::vector<uint8_t> left;    // left[y-1] for y = 1..Y
    std::vector<uint8_t> bottom;  // bottom[x-1] for x = 1..X

    int Y() const { return int(left.size()); }
    int X() const { return int(bottom.size()); }
    // H(0,y), y = 0..Y and H(x,0), x = 0..X
    std::vector<int> left_heights() const;
    std::vector<int> bottom_heights() const;

    static BoundaryData empty(int X, int Y);
    static BoundaryData domain_wall(int X, int Y);
    static BoundaryData bernoulli(int X, int Y, double p1, double p2, uint64_t seed);
    // Profiles are height profiles in macroscopic units: chi nonincreasing and
    // psi nondecreasing, both 1-Lipschitz, chi(0) = psi(0) = 0.
    template <class F, class G>
    static BoundaryData from_profiles(int X, int Y, F chi, G psi, double L);
    // counts ~ L^{1-δ} · profile
    template <class F, class G>
    static BoundaryData low_density(int X, int Y, double delta, F chi, G psi, double L);
    static BoundaryData from_heights(const std::vector<int>& h_bottom, const std::vector<int>& h_left);
};

class HeightField {
public:
    HeightField() = default;
    HeightField(int X, int Y) : X_(X), Y_(Y), v_(size_t(X + 1) * (Y + 1), 0) {}
    int X() const { return X_; }
    int Y() const { return Y_; }
    int operator()(int x, int y) const { return v_[size_t(y) * (X_ + 1) + x]; }
    int& operator()(int x, int y) { return v_[size_t(y) * (X_ + 1) + x]; }
    int at(int x, int y) const;
    const std::vector<int>& raw() const { return v_; }
    // empty string if all increment invariants hold
    std::string check() const;

private:
    int X_ = 0, Y_ = 0;
    std::vector<int> v_;
};

int modified_height(const HeightField& H, int x, int y);
double extend_bilinear(const HeightField& H, double x, double y);

// Real values on nodes (i, j), i = 0..nx-1, j = 0..ny-1, with physical
// coordinates x0 + i*dx, y0 + j*dy.
struct Field2D {
    int nx = 0, ny = 0;
    double x0 = 0, y0 = 0, dx = 1, dy = 1;
    std::vector<double> v;

    Field2D() = default;
    Field2D(int nx_, int ny_, double dx_ = 1, double dy_ = 1, double x0_ = 0, double y0_ = 0)
        : nx(nx_), ny(ny_), x0(x0_), y0(y0_), dx(dx_), dy(dy_), v(size_t(nx_) * ny_, 0.0) {}
    double operator()(int i, int j) const { return v[size_t(j) * nx + i]; }
    double& operator()(int i, int j) { return v[size_t(j) * nx + i]; }
    double xc(int i) const { return x0 + i * dx; }
    double yc(int j) const { return y0 + j * dy; }
    double max_abs_diff(const Field2D& o) const;
};

Field2D to_field(const HeightField& H);

// ---- template definitions

namespace detail {
inline int round_height(double v) { return int(std::floor(v + 0.5)); }
void check_steps(const std::vector<int>& h, int lo, int hi, const char* what);
}

template <class F, class G>
BoundaryData BoundaryData::from_profiles(int X, int Y, F chi, G psi, double L) {
    std::vector<int> hb(X + 1), hl(Y + 1);
    for (int x = 0; x <= X; ++x) hb[x] = detail::round_height(L * chi(x / L));
    for (int y = 0; y <= Y; ++y) hl[y] = detail::round_height(L * psi(y / L));
    return from_heights(hb, hl);
}

template <class F, class G>
BoundaryData BoundaryData::low_density(int X, int Y, double delta, F chi, G psi, double L) {
    if (!(delta > 0 && delta < 1)) throw std::invalid_argument("low_density: need 0 < delta < 1");
    double scale = std::pow(L, 1 - delta);
    std::vector<int> hb(X + 1), hl(Y + 1);
    for (int x = 0; x <= X; ++x) hb[x] = detail::round_height(scale * chi(x / L));
    for (int y = 0; y <= Y; ++y) hl[y] = detail::round_height(scale * psi(y / L));
    if (hb.back() == 0 && hl.back() == 0)
        throw std::invalid_argument("low_density: entry counts round to zero");
    return from_heights(hb, hl);
}

}  // namespace vtel
