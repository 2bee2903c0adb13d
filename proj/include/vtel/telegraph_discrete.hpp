#pragma once
#include "vtel/core.hpp"

#include <vector>

namespace vtel {

// Φ(x+1,y+1) − b1Φ(x,y+1) − b2Φ(x+1,y) + (b1+b2−1)Φ(x,y) = u(x+1,y+1)
struct DiscreteProblem {
    double b1 = 0.5, b2 = 0.5;
    int X = 0, Y = 0;
    std::vector<double> chi;  // x = 0..X
    std::vector<double> psi;  // y = 0..Y
    Field2D u;                // u(x,y) at index (x-1, y-1); empty means u ≡ 0

    double u_at(int x, int y) const { return u.v.empty() ? 0.0 : u(x - 1, y - 1); }
    void validate() const;
};

// Output fields are indexed (X, Y) on {0..X}×{0..Y}.
Field2D solve_recursive(const DiscreteProblem& p);

// R^d(ΔX, ΔY) for 0..maxX × 0..maxY by the recursion seeded with the edge laws.
Field2D riemann_discrete_table(double b1, double b2, int maxX, int maxY);
double riemann_discrete(double b1, double b2, int dX, int dY);
// Same value from the contour integral.
double riemann_discrete_quadrature(double b1, double b2, int dX, int dY);

// OpenMP over target points; the serial version is the reference.
Field2D solve_riemann(const DiscreteProblem& p);
Field2D solve_riemann_serial(const DiscreteProblem& p);

// max over sources (x,y) in [x_lo,x_hi]×[y_lo,y_hi] (excluding (X+1,Y+1)) of
// |R(X,Y;x−1,y−1) − b1R(X,Y;x,y−1) − b2R(X,Y;x−1,y) + (b1+b2−1)R(X,Y;x,y)|
double riemann_discrete_fourpoint_residual(double b1, double b2, int X, int Y, int x_lo, int x_hi, int y_lo,
                                           int y_hi);
// R(X,Y;x0,y0) + (1−b1)Σ_{x>x0} R(X,Y;x,y0) + (1−b2)Σ_{y>y0} R(X,Y;x0,y) − 1
double riemann_discrete_summed_residual(double b1, double b2, int X, int Y, int x0, int y0);

}  // namespace vtel
