#pragma once
#include "vtel/core.hpp"
#include "vtel/telegraph_continuous.hpp"
#include "vtel/telegraph_discrete.hpp"

#include <cstdint>
#include <vector>

namespace vtel {

enum class Orientation { Horizontal, Vertical };

// Corner points from the start to the exit point on an axis. Consecutive
// points differ in exactly one coordinate; orientations alternate.
struct WalkPath {
    Orientation start_orientation = Orientation::Horizontal;
    std::vector<double> xs, ys;
    bool exit_left = false;  // exit on x = 0 (else on y = 0)
    double exit_coord() const { return exit_left ? ys.back() : xs.back(); }
};

// Discrete reversed walk; start coordinates are lattice points.
WalkPath reversed_walk(double b1, double b2, int x0, int y0, Orientation o, uint64_t seed, uint64_t stream = 0);
WalkPath persistent_walk(double beta1, double beta2, double x0, double y0, Orientation o, uint64_t seed,
                         uint64_t stream = 0);

// For a lattice walk launched leftwards: top[x] = height at which the path
// reaches abscissa x (−1 if never). For a downward walk: right[y] likewise.
std::vector<int> walk_top(const WalkPath& w, int X);
std::vector<int> walk_right(const WalkPath& w, int Y);

// 1[weakly below T−] + 1[weakly left of T|] − 1 at lattice point (x,y)
int i_between(const WalkPath& t_minus, const WalkPath& t_bar, int x, int y);

struct Estimate {
    double estimate = 0, std_error = 0;
    long n = 0;
    uint64_t seed = 0;
};

Estimate fk_discrete(const DiscreteProblem& p, int X, int Y, long n, uint64_t seed);
Estimate fk_discrete_serial(const DiscreteProblem& p, int X, int Y, long n, uint64_t seed);

// u is averaged into cells×cells piecewise constant values over [0,X]×[0,Y].
Estimate fk_continuous(const ContinuousProblem& p, double X, double Y, long n, uint64_t seed, int cells = 128);

}  // namespace vtel
