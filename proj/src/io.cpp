#include "vtel/io.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace vtel {

std::string fmt_double(double v) {
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

void write_csv(std::ostream& os, const Field2D& f) {
    os << "x,y,value\n";
    for (int j = 0; j < f.ny; ++j)
        for (int i = 0; i < f.nx; ++i)
            os << fmt_double(f.xc(i)) << ',' << fmt_double(f.yc(j)) << ',' << fmt_double(f(i, j)) << '\n';
}

void write_csv(std::ostream& os, const HeightField& H) {
    os << "x,y,value\n";
    for (int y = 0; y <= H.Y(); ++y)
        for (int x = 0; x <= H.X(); ++x) os << x << ',' << y << ',' << H(x, y) << '\n';
}

Field2D read_field_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line != "x,y,value") throw std::invalid_argument("CSV header must be x,y,value");
    std::vector<double> xs, ys, vs;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string a, b, c;
        if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') || !std::getline(ss, c))
            throw std::invalid_argument("malformed CSV row: " + line);
        xs.push_back(std::stod(a));
        ys.push_back(std::stod(b));
        vs.push_back(std::stod(c));
    }
    if (vs.empty()) throw std::invalid_argument("empty CSV field");
    // rows are x-fastest; nx = length of the first run with constant y
    size_t nx = 1;
    while (nx < ys.size() && ys[nx] == ys[0]) ++nx;
    if (vs.size() % nx) throw std::invalid_argument("CSV field is not rectangular");
    size_t ny = vs.size() / nx;
    double dx = nx > 1 ? xs[1] - xs[0] : 1, dy = ny > 1 ? ys[nx] - ys[0] : 1;
    Field2D f(int(nx), int(ny), dx, dy, xs[0], ys[0]);
    f.v = vs;
    return f;
}

ojson to_json(const Field2D& f) {
    ojson j;
    j["dims"] = {f.nx, f.ny};
    j["spacing"] = {f.dx, f.dy};
    j["origin"] = {f.x0, f.y0};
    j["data"] = f.v;
    return j;
}

ojson to_json(const HeightField& H) {
    ojson j;
    j["dims"] = {H.X() + 1, H.Y() + 1};
    j["spacing"] = {1, 1};
    j["origin"] = {0, 0};
    j["data"] = H.raw();
    return j;
}

Field2D field_from_json(const ojson& j) {
    int nx = j.at("dims").at(0), ny = j.at("dims").at(1);
    Field2D f(nx, ny, j.at("spacing").at(0).get<double>(), j.at("spacing").at(1).get<double>());
    if (j.contains("origin")) {
        f.x0 = j["origin"].at(0).get<double>();
        f.y0 = j["origin"].at(1).get<double>();
    }
    f.v = j.at("data").get<std::vector<double>>();
    if (f.v.size() != size_t(nx) * ny) throw std::invalid_argument("field data size does not match dims");
    return f;
}

ojson edges_json(const Configuration& c) {
    ojson arr = ojson::array();
    for (int y = 1; y <= c.Y; ++y)
        for (int x = 1; x <= c.X; ++x) {
            VertexOutcome v = c.vertex(x, y);
            arr.push_back({{"vertex", {x, y}}, {"in", {int(v.left), int(v.bottom)}}, {"out", {int(v.right), int(v.top)}}});
        }
    return arr;
}

BoundaryData boundary_from_json(const ojson& j) {
    BoundaryData bd;
    for (int v : j.at("left").get<std::vector<int>>()) {
        if (v != 0 && v != 1) throw std::invalid_argument("boundary entries must be 0 or 1");
        bd.left.push_back(uint8_t(v));
    }
    for (int v : j.at("bottom").get<std::vector<int>>()) {
        if (v != 0 && v != 1) throw std::invalid_argument("boundary entries must be 0 or 1");
        bd.bottom.push_back(uint8_t(v));
    }
    return bd;
}

ojson boundary_to_json(const BoundaryData& bd) {
    ojson j;
    j["left"] = std::vector<int>(bd.left.begin(), bd.left.end());
    j["bottom"] = std::vector<int>(bd.bottom.begin(), bd.bottom.end());
    return j;
}

std::string config_hash(const ojson& config) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : config.dump()) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

ojson provenance(const std::string& source, const ojson& config) {
    return {{"source", source}, {"config_hash", config_hash(config)}};
}

}  // namespace vtel
