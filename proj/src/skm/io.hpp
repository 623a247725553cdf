#pragma once

#include <string>

#include "local_search.hpp"
#include "reductions.hpp"

namespace skm {

// Text instance format; grammar in docs/format.md. parse(serialize(x)) == x
// field-for-field with bit-exact rationals.
Instance parse_instance(const std::string& text);
std::string serialize_instance(const Instance& inst);

GridTilingInstance parse_grid_tiling(const std::string& text);
std::string serialize_grid_tiling(const GridTilingInstance& gt);

std::string serialize_trace(const SearchTrace& trace);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

// Scalar token: "p/q" or "sqrt(p/q)".
Scalar scalar_from_string(const std::string& tok);

}  // namespace skm
