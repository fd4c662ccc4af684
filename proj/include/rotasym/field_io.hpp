#pragma once

#include <iosfwd>
#include <string>

#include "rotasym/geometry.hpp"

namespace rotasym {

// Plain-text snapshot format with exact value round-trip (every double is
// written with 17 significant digits):
//   rotasym-field 1
//   kind disk|annulus
//   r_inner <g17>
//   r_outer <g17>
//   nr <int>
//   ntheta <int>
//   time <g17>
//   <nr lines of ntheta space-separated values, row-major by ring>
void write_field(std::ostream& os, const Field& f);
void write_field_file(const std::string& path, const Field& f);

// Throws std::runtime_error with a description on malformed input.
Field read_field(std::istream& is);
Field read_field_file(const std::string& path);

// Shared %.17g formatting helper (used by snapshot files and metrics).
std::string format_g17(double v);

}  // namespace rotasym
