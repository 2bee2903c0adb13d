#pragma once
#include "vtel/core.hpp"
#include "vtel/observables.hpp"
#include "vtel/sampler.hpp"
#include "vtel/walks.hpp"

#include <functional>
#include <utility>
#include <vector>

namespace vtel {

struct ExactDistribution {
    std::vector<double> weight;
    std::vector<HeightField> H;

    double total() const;
    double expect(const std::function<double(const HeightField&)>& f) const;
};

// Depth-first over the choices at single-input vertices; throws when a
// branch needs more than max_choices of them.
ExactDistribution enumerate_exact(const ModelParams& p, const BoundaryData& bd, int X, int Y, int max_choices = 24);

using EstimatorResult = Estimate;

EstimatorResult mc_functional(const ModelParams& p, const BoundaryData& bd, int X, int Y,
                              const std::function<double(const HeightField&)>& f, long n, uint64_t seed);
EstimatorResult mc_functional_serial(const ModelParams& p, const BoundaryData& bd, int X, int Y,
                                     const std::function<double(const HeightField&)>& f, long n, uint64_t seed);

using LatticePoint = std::pair<int, int>;

// Heights at the listed points for one replica, without storing the field.
std::vector<int> sample_points(const ModelParams& p, const BoundaryData& bd, int X, int Y, uint64_t key,
                               const std::vector<LatticePoint>& pts);
// n × k row-major table of heights, replica i uses stream_key(seed, i)
std::vector<int> sample_heights(const ModelParams& p, const BoundaryData& bd, int X, int Y,
                                const std::vector<LatticePoint>& pts, long n, uint64_t seed);
std::vector<int> sample_heights_serial(const ModelParams& p, const BoundaryData& bd, int X, int Y,
                                       const std::vector<LatticePoint>& pts, long n, uint64_t seed);

// ---- experiments

using BoundaryBuilder = std::function<BoundaryData(int X, int Y, double L)>;
using MacroPoint = std::pair<double, double>;

struct LlnRow {
    double L = 0;
    long n = 0;
    double sup_mean_err = 0;    // sup over the grid of |mean H/L − h|
    double mean_sample_err = 0; // average over replicas of the per-sample sup error
    double mc_se = 0;           // largest standard error of mean H/L on the grid
};
struct LlnReport {
    std::vector<LlnRow> rows;
    bool decreasing = false;
};

// Lattice point (round(Lx), round(Ly)); h is the reference shape.
LlnReport lln_experiment(double beta1, double beta2, const BoundaryBuilder& boundary,
                         const std::function<double(double, double)>& h, const std::vector<MacroPoint>& grid,
                         const std::vector<double>& Ls, long n, uint64_t seed);

struct Moments4 {
    double mean = 0, var = 0, skew = 0, exkurt = 0;
};
Moments4 sample_moments(const std::vector<double>& v);

struct CltReport {
    int k = 0;
    long n = 0;
    std::vector<double> mean;           // E q^H
    std::vector<double> cov, cov_se;    // k×k, L·Cov(q^H, q^H)
    std::vector<double> skew, exkurt;   // standardized marginals
    double skew_band = 0, kurt_band = 0; // 4σ thresholds
    std::vector<bool> degenerate;
    bool normality_ok = true;
};

CltReport clt_experiment(const ModelParams& p, const BoundaryData& bd, int X, int Y,
                         const std::vector<LatticePoint>& pts, long n, uint64_t seed);

// max |(emp − expected)/se| over the k×k entries (skipping zero-se entries)
double max_z(const CltReport& r, const std::vector<double>& expected);

struct LowDensityRow {
    double L = 0;
    long n = 0;
    double sup_mean_err = 0;
    double var_emp = 0, var_se = 0, var_formula = 0;
};

// Entries ~ L^{1−δ}·profile; mean of H/L^{1−δ} over the grid against the
// linear telegraph solution, and Var(H/√(L^{1−δ})) at var_point.
std::vector<LowDensityRow> low_density_experiment(double beta1, double beta2, double delta, const Fn1& chi,
                                                  const Fn1& psi, const std::vector<double>& Ls,
                                                  const std::vector<MacroPoint>& grid, MacroPoint var_point,
                                                  long n, uint64_t seed, int solver_n = 128);

// Linear telegraph solution on [0,a]×[0,b] wrapped as a shape (𝐡, 𝐡_x, 𝐡_y).
GridShape telegraph_shape(double beta1, double beta2, double a, double b, const Fn1& chi, const Fn1& psi,
                          int nx, int ny);

}  // namespace vtel
