#include "vtel/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace vtel {

const char* kind_name(VertexKind k) {
    switch (k) {
        case VertexKind::Empty: return "empty";
        case VertexKind::Crossing: return "crossing";
        case VertexKind::StraightVertical: return "straight-vertical";
        case VertexKind::TurnRight: return "turn-right";
        case VertexKind::StraightHorizontal: return "straight-horizontal";
        case VertexKind::TurnUp: return "turn-up";
    }
    return "?";
}

VertexOutcome Configuration::vertex(int x, int y) const {
    VertexOutcome v;
    v.left = H(x - 1, y) - H(x - 1, y - 1) == 1;
    v.bottom = H(x - 1, y - 1) - H(x, y - 1) == 1;
    v.right = H(x, y) - H(x, y - 1) == 1;
    v.top = H(x - 1, y) - H(x, y) == 1;
    return v;
}

VertexKind Configuration::kind(int x, int y) const {
    VertexOutcome v = vertex(x, y);
    if (v.left && v.bottom) return VertexKind::Crossing;
    if (v.left) return v.right ? VertexKind::StraightHorizontal : VertexKind::TurnUp;
    if (v.bottom) return v.top ? VertexKind::StraightVertical : VertexKind::TurnRight;
    return VertexKind::Empty;
}

Configuration sample(const ModelParams& p, const BoundaryData& bd, int X, int Y, uint64_t seed, uint64_t replica) {
    Configuration c;
    c.X = X;
    c.Y = Y;
    c.seed = seed;
    c.replica = replica;
    c.params = p;
    c.H = HeightField(X, Y);
    sample_rows(p, bd, X, Y, stream_key(seed, replica), [&](int y, const int* row) {
        for (int x = 0; x <= X; ++x) c.H(x, y) = row[x];
    });
    return c;
}

Field2D extract_noise(const Configuration& c, const ModelParams& p) {
    Field2D xi(c.X, c.Y);
    const double b = p.b1, bq = p.b2, q = p.q;
    for (int y = 0; y < c.Y; ++y)
        for (int x = 0; x < c.X; ++x) {
            double v = std::pow(q, c.H(x + 1, y + 1)) - b * std::pow(q, c.H(x, y + 1)) -
                       bq * std::pow(q, c.H(x + 1, y)) + (b + bq - 1) * std::pow(q, c.H(x, y));
            xi(x, y) = v;
        }
    return xi;
}

double xi_case_value(VertexKind k, int h, const ModelParams& p) {
    const double b = p.b1, q = p.q, qh = std::pow(q, h);
    switch (k) {
        case VertexKind::Empty:
        case VertexKind::Crossing: return 0.0;
        case VertexKind::StraightVertical: return qh * (1 / q - b) * (1 - q);
        case VertexKind::TurnRight: return qh * b * (q - 1);
        case VertexKind::StraightHorizontal: return qh * (1 - b) * (q - 1);
        case VertexKind::TurnUp: return qh * b * (1 - q);
    }
    return 0.0;
}

double case_table_mismatch(const Configuration& c, const ModelParams& p) {
    Field2D xi = extract_noise(c, p);
    double worst = 0;
    for (int y = 0; y < c.Y; ++y)
        for (int x = 0; x < c.X; ++x)
        {
            double want = xi_case_value(c.kind(x + 1, y + 1), c.H(x, y), p);
            worst = std::max(worst, std::abs(xi(x, y) - want) / std::max(1.0, std::pow(p.q, c.H(x, y))));
        }
    return worst;
}

double conditional_noise_variance(int h, int h_right, int h_up, const ModelParams& p) {
    const double b = p.b1, q = p.q, qb = p.b2, qh = std::pow(q, h);
    double dx = std::pow(q, h_right) - qh, dy = std::pow(q, h_up) - qh;
    return (qb * (1 - b) + b * (1 - qb)) * dx * dy + b * (1 - qb) * (1 - q) * qh * dx -
           b * (1 - b) * (1 - q) * qh * dy;
}

double integrated_identity_residual(const Configuration& c, const ModelParams& p, int X, int Y) {
    if (X < 1 || Y < 1 || X > c.X || Y > c.Y) throw std::out_of_range("rectangle outside configuration");
    const double b = p.b1, bq = p.b2, q = p.q;
    auto Q = [&](int x, int y) { return std::pow(q, c.H(x, y)); };
    double lhs = 0, scale = 1;
    auto add = [&](double& acc, double t) {
        acc += t;
        scale = std::max(scale, std::abs(t));
    };
    for (int x = 1; x <= X - 1; ++x) {
        add(lhs, -(1 - b) * Q(x, 0));
        add(lhs, (1 - b) * Q(x, Y));
    }
    for (int y = 1; y <= Y - 1; ++y) {
        add(lhs, -(1 - bq) * Q(0, y));
        add(lhs, (1 - bq) * Q(X, y));
    }
    for (double t : {(b + bq - 1) * Q(0, 0), -bq * Q(X, 0), -b * Q(0, Y), Q(X, Y)}) add(lhs, t);
    Field2D xi = extract_noise(c, p);
    double rhs = 0;
    for (int y = 0; y < Y; ++y)
        for (int x = 0; x < X; ++x) add(rhs, xi(x, y));
    return (lhs - rhs) / scale;
}

std::string check_configuration(const Configuration& c, const BoundaryData& bd) {
    std::string e = c.H.check();
    if (!e.empty()) return e;
    std::ostringstream os;
    auto hl = bd.left_heights();
    auto hb = bd.bottom_heights();
    for (int y = 0; y <= c.Y; ++y)
        if (c.H(0, y) != hl[y]) return "left boundary mismatch";
    for (int x = 0; x <= c.X; ++x)
        if (c.H(x, 0) != hb[x]) return "bottom boundary mismatch";
    for (int y = 1; y <= c.Y; ++y)
        for (int x = 1; x <= c.X; ++x) {
            VertexOutcome v = c.vertex(x, y);
            if (int(v.left) + int(v.bottom) != int(v.right) + int(v.top)) {
                os << "path conservation fails at (" << x << "," << y << ")";
                return os.str();
            }
            if (v.left && v.bottom && !(v.right && v.top)) return "crossing not deterministic";
            if (x < c.X && v.right != c.vertex(x + 1, y).left) return "right/left edge mismatch";
            if (y < c.Y && v.top != c.vertex(x, y + 1).bottom) return "top/bottom edge mismatch";
        }
    return {};
}

}  // namespace vtel
