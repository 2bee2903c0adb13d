#pragma once
#include "vtel/core.hpp"

#include <functional>

namespace vtel {

using Fn1 = std::function<double(double)>;
using Fn2 = std::function<double(double, double)>;

// φ_XY + β1 φ_Y + β2 φ_X = u on [0,a]×[0,b], φ(x,0) = χ(x), φ(0,y) = ψ(y)
struct ContinuousProblem {
    double beta1 = 1, beta2 = 2;
    double a = 1, b = 1;
    Fn1 chi, psi;
    Fn1 dchi, dpsi;  // optional; central differences otherwise
    Fn2 u;           // optional; u ≡ 0 otherwise
    void validate() const;
};

// φ + λ∫₀^X φ(x,Y)dx + μ∫₀^Y φ(X,y)dy + ν∫₀^X∫₀^Y φ = g
struct IntegratedProblem {
    double lambda = 0, mu = 0, nu = 0;
    double a = 1, b = 1;
    Fn2 g;
};

double riemann(double beta1, double beta2, double dX, double dY);

// Cumulative quadrature weights on a uniform grid: ∫₀^{m h} f ≈ Σ_{k≤m} W(m,k) f_k.
// Fourth order for m ≥ 2 (Simpson, with a 3/8 panel when m is odd).
class CumulativeWeights {
public:
    CumulativeWeights(int n, double h);
    double operator()(int m, int k) const { return w_[size_t(m) * (n_ + 1) + k]; }
    int n() const { return n_; }
    // last node used by the rule for ∫₀^{m h}; the first panel borrows nodes 2, 3
    int kmax(int m) const { return (m == 1 && n_ >= 3) ? 3 : m; }

private:
    int n_;
    std::vector<double> w_;
};

// Grid nodes (i·a/nx, j·b/ny), i = 0..nx, j = 0..ny.
Field2D solve_quadrature(const ContinuousProblem& p, int nx, int ny);
Field2D solve_quadrature_serial(const ContinuousProblem& p, int nx, int ny);

Field2D picard_solve(const IntegratedProblem& p, int nx, int ny, double tol = 1e-13, int max_iter = 500);

// The integrated form of a telegraph problem: λ = β1, μ = β2, ν = 0 and
// g = χ(X) + ψ(Y) − χ(0) + β1∫χ + β2∫ψ + ∬u.
IntegratedProblem integrated_form(const ContinuousProblem& p);

// 𝔮^𝐡 for Bernoulli boundaries φ(x,0) = 𝔮^{−p_bottom·x}, φ(0,y) = 𝔮^{p_left·y}.
double homogeneous_bernoulli_shape(double x, double y, double p_bottom, double p_left, double beta1, double beta2);

struct RiemannResiduals {
    double pde = 0;       // R_XY + β1R_Y + β2R_X in the offsets
    double edge_x = 0;    // R_X + β1R on ΔY = 0
    double edge_y = 0;    // R_Y + β2R on ΔX = 0
    double corner = 0;    // R(0,0) − 1
};
RiemannResiduals riemann_property_residuals(double beta1, double beta2, double max_offset, int points, double h_fd);

}  // namespace vtel
