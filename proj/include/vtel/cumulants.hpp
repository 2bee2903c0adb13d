#pragma once
#include <cstdint>
#include <vector>

namespace vtel {

// M_A for A ⊆ {1..n} indexed by bitmask; M_∅ = 1.
struct MomentTable {
    int n = 0;
    std::vector<double> m;
    MomentTable() = default;
    explicit MomentTable(int n_) : n(n_), m(size_t(1) << n_, 0.0) { m[0] = 1; }
    double operator[](uint32_t mask) const { return m[mask]; }
    double& operator[](uint32_t mask) { return m[mask]; }
};

// All set partitions of {0..n-1}, each as a list of block bitmasks.
std::vector<std::vector<uint32_t>> set_partitions(int n);

double cumulant(const MomentTable& M, int n);

// Moments of a finite discrete joint law: atoms[k] is a vector of n values with weight w[k].
MomentTable moments_from_atoms(const std::vector<std::vector<double>>& atoms, const std::vector<double>& w);
// Gaussian vector with mean mu and covariance C (Isserlis).
MomentTable gaussian_moments(const std::vector<double>& mu, const std::vector<std::vector<double>>& C);

struct ShiftedCumulantReport {
    int n = 0, degree = 0, nodes = 0;
    std::vector<double> coeffs;  // coefficients of C'_n(ε) in ε^0..ε^degree
    double cn = 0;               // C_n of the ξ moments
    double leading_rel_err = 0;  // |coeff_n − C_n| / |C_n|
    double lower_max_abs = 0;    // max_{k<n} |coeff_k|
};

// M'_A(ε) = E[Π_{i∈A}(r_i + εξ_i)] · Π_{k<l∈A}(1 + ε² a_kl). The polynomial
// C'_n(ε) is recovered from its values at `nodes` points on the circle |ε| =
// radius (nodes must exceed the degree n²).
ShiftedCumulantReport shifted_cumulant_expansion_check(const std::vector<double>& r,
                                                       const std::vector<std::vector<double>>& a,
                                                       const MomentTable& xi, double radius = 1.0, int nodes = 0);

// M'_A(ε) directly, for a single real or complex ε (exposed for tests).
double shifted_moment(const std::vector<double>& r, const std::vector<std::vector<double>>& a, const MomentTable& xi,
                      uint32_t A, double eps);

}  // namespace vtel
