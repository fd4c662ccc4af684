#pragma once

#include <string>

#include "rotasym/geometry.hpp"

namespace rotasym {

// ASCII P2 portable graymap of a field on a size x size Cartesian raster
// covering the bounding square [-r_outer, r_outer]^2 (row 0 at the top).
// Pixel values come from nearest-cell lookup, affinely mapped from
// [min, max] to 0..255; a degenerate range pins interior pixels to 127.
// Pixels outside the domain are 0. Header comments record the time, grid,
// value range, and the outside-domain convention.
std::string render_pgm(const Field& f, int size = 256);
void render_pgm_file(const std::string& path, const Field& f, int size = 256);

}  // namespace rotasym
