#pragma once
#include "vtel/core.hpp"
#include "vtel/rng.hpp"

#include <cstdint>
#include <vector>

namespace vtel {

enum class VertexKind : uint8_t { Empty, Crossing, StraightVertical, TurnRight, StraightHorizontal, TurnUp };

const char* kind_name(VertexKind k);

struct VertexOutcome {
    bool left = false, bottom = false, right = false, top = false;
};

struct Configuration {
    int X = 0, Y = 0;
    uint64_t seed = 0, replica = 0;
    ModelParams params;
    HeightField H;

    // in/out edges of vertex (x,y), 1 <= x <= X, 1 <= y <= Y, read off the heights
    VertexOutcome vertex(int x, int y) const;
    VertexKind kind(int x, int y) const;
};

// One vertex of the local rule. h = H(x,y), hr = H(x+1,y), hu = H(x,y+1);
// returns H(x+1,y+1). u is only read for single-input vertices.
inline int vertex_update(int h, int hr, int hu, double u, double b1, double b2) {
    bool lin = hu - h == 1, bin = h - hr == 1;
    if (lin == bin) return h;
    if (lin) return u < b1 ? h + 1 : h;
    return u < b2 ? h - 1 : h;
}

// Row-major streaming sampler; calls row_cb(y, row) for y = 0..Y where row
// holds H(0..X, y). Only two rows are live at once.
template <class RowCb>
void sample_rows(const ModelParams& p, const BoundaryData& bd, int X, int Y, uint64_t key, RowCb&& row_cb) {
    if (X < 1 || Y < 1) throw std::invalid_argument("extents must be >= 1");
    if (bd.X() < X || bd.Y() < Y) throw std::invalid_argument("boundary data shorter than the lattice");
    std::vector<int> prev = bd.bottom_heights(), cur(X + 1);
    prev.resize(X + 1);
    std::vector<int> hl = bd.left_heights();
    row_cb(0, prev.data());
    const double b1 = p.b1, b2 = p.b2;
    for (int y = 0; y < Y; ++y) {
        cur[0] = hl[y + 1];
        for (int x = 0; x < X; ++x) {
            int h = prev[x], hr = prev[x + 1], hu = cur[x];
            bool lin = hu - h == 1, bin = h - hr == 1;
            if (lin == bin) {
                cur[x + 1] = h;
            } else {
                double u = uniform_at(key, uint32_t(x + 1), uint32_t(y + 1));
                cur[x + 1] = lin ? h + (u < b1) : h - (u < b2);
            }
        }
        row_cb(y + 1, cur.data());
        prev.swap(cur);
    }
}

Configuration sample(const ModelParams& p, const BoundaryData& bd, int X, int Y, uint64_t seed,
                     uint64_t replica = 0);

// ξ on {1..X}×{1..Y}; field index (x-1, y-1)
Field2D extract_noise(const Configuration& c, const ModelParams& p);

// The case-table value of ξ at a vertex of the given kind, h = H at its lower-left face.
double xi_case_value(VertexKind k, int h, const ModelParams& p);

// max over vertices of |ξ from the heights − case-table value|, in units of max(1, q^h)
double case_table_mismatch(const Configuration& c, const ModelParams& p);

double conditional_noise_variance(int h, int h_right, int h_up, const ModelParams& p);

// (left side − Σξ) divided by the largest single term (at least 1), since q^H
// spans many decades when |ln q|·H is large
double integrated_identity_residual(const Configuration& c, const ModelParams& p, int X, int Y);

// empty string when edges, heights and boundary agree everywhere
std::string check_configuration(const Configuration& c, const BoundaryData& bd);

}  // namespace vtel
