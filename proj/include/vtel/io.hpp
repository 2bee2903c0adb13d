#pragma once
#include "vtel/core.hpp"
#include "vtel/sampler.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>

namespace vtel {

using ojson = nlohmann::ordered_json;

// "x,y,value" rows; Field2D writes physical coordinates, HeightField lattice ones.
void write_csv(std::ostream& os, const Field2D& f);
void write_csv(std::ostream& os, const HeightField& H);
Field2D read_field_csv(std::istream& is);

// {dims, spacing, origin, data (row-major, x fastest)}
ojson to_json(const Field2D& f);
ojson to_json(const HeightField& H);
Field2D field_from_json(const ojson& j);

// edge list {vertex: [x,y], in: [L,B], out: [R,T]} for every vertex
ojson edges_json(const Configuration& c);

// {"left": [0/1 ...], "bottom": [0/1 ...]}
BoundaryData boundary_from_json(const ojson& j);
ojson boundary_to_json(const BoundaryData& bd);

// FNV-1a over the canonical (dumped) JSON text, as 16 hex digits
std::string config_hash(const ojson& config);
ojson provenance(const std::string& source, const ojson& config);

// shortest round-trip decimal
std::string fmt_double(double v);

}  // namespace vtel
