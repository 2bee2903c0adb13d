#pragma once
#include "vtel/contour.hpp"
#include "vtel/core.hpp"

#include <functional>
#include <vector>

namespace vtel {

// ---- domain-wall limit shape (continuum coordinates)

// 𝔮^𝐡 and its x, y derivatives at α = 0
struct ShapeSample {
    double v = 0, vx = 0, vy = 0;
};
ShapeSample qh_dw(double x, double y, const ModelParams& p);

double limit_shape_dw(double x, double y, double alpha, const ModelParams& p);
double limit_shape_q0(double x, double y, double s);

// ---- finite-L observables (lattice coordinates of the contour formula)

// Nested: z_i inside q·z_j for i < j. Tiny: one small circle around −q for
// every variable, enclosing no cross pole. Both give the same value; Auto
// tries Nested and falls back to Tiny.
enum class NestLayout { Nested, Tiny, Auto };

// E_N = E Π_k (q^{H(x_k,y)} − q^{k−1}) at α = 0, x_1 ≥ … ≥ x_n ≥ 1, n ≤ 4.
// Sampler heights correspond to formula abscissa x+1. E_N does not depend on α.
double moments_EN(const std::vector<int>& xs, int y, const ModelParams& p, NestLayout layout = NestLayout::Auto);
double observable_O(int H, int x, int y, double alpha, double q);

// ---- covariances

// Right side of the two-point covariance formula: at α = 0 the limit of
// L·Cov(q^{H(Lx1,Ly)}, q^{H(Lx2,Ly)}); for α > 0 the limit of
// L·Cov(𝒪,𝒪)/(1+α^{−1})². Requires x1 ≥ x2 > 0, y > 0.
double covariance_dw(double x1, double x2, double y, double alpha, const ModelParams& p);

// Bernoulli boundary: left density p_left, bottom density p_bottom.
double limit_shape_bernoulli_qh(double x, double y, double p_left, double p_bottom, const ModelParams& p);
// Points on a monotone section: x1 ≥ x2, y1 ≤ y2.
double covariance_bernoulli(double x1, double y1, double x2, double y2, double p_left, double p_bottom,
                            const ModelParams& p);

using ShapeFn = std::function<ShapeSample(double, double)>;

// V^∞ from 𝔮^𝐡 and its derivatives
double variance_density(const ShapeSample& s, double beta1, double beta2);
// the same density written through 𝐡, 𝐡_x, 𝐡_y
double variance_density_h(double h, double hx, double hy, double beta1, double beta2);

double covariance_general(double X1, double Y1, double X2, double Y2, const ShapeFn& shape, double beta1,
                          double beta2, int panels = 4);

// shape supplies 𝐡, 𝐡_x, 𝐡_y
double variance_low_density(double X, double Y, const ShapeFn& h, double beta1, double beta2, int panels = 4);

// Values on a uniform grid (spacing dx, dy from the field) with 4th-order
// finite-difference derivatives and bicubic interpolation.
class GridShape {
public:
    explicit GridShape(Field2D values);
    ShapeSample operator()(double x, double y) const;

private:
    Field2D f_, fx_, fy_;
    double interp(const Field2D& g, double x, double y) const;
};

}  // namespace vtel
