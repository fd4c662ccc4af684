#include "rotasym/render.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "rotasym/field_io.hpp"

namespace rotasym {

std::string render_pgm(const Field& f, int size) {
  if (size < 8) throw std::invalid_argument("render_pgm: size must be >= 8");
  const PolarGrid& g = *f.grid;
  const double R = g.domain.r_outer;

  double lo = f.values[0], hi = f.values[0];
  for (double v : f.values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const double span = hi - lo;
  const bool degenerate = !(span > 0.0);

  std::ostringstream os;
  os << "P2\n";
  os << "# time " << format_g17(f.time) << '\n';
  os << "# grid " << (g.is_disk() ? "disk" : "annulus") << " r_inner "
     << format_g17(g.domain.r_inner) << " r_outer " << format_g17(R) << " nr "
     << g.nr << " ntheta " << g.ntheta << '\n';
  os << "# range min " << format_g17(lo) << " max " << format_g17(hi) << '\n';
  if (degenerate) os << "# degenerate range: interior pinned to 127\n";
  os << "# mask: pixels outside the domain are 0\n";
  os << size << ' ' << size << "\n255\n";

  const double pixel = 2.0 * R / size;
  int on_line = 0;
  for (int py = 0; py < size; ++py) {
    for (int px = 0; px < size; ++px) {
      const double x = -R + (px + 0.5) * pixel;
      const double y = R - (py + 0.5) * pixel;
      const double r = std::hypot(x, y);
      int value = 0;
      if (r <= R && r >= g.domain.r_inner) {
        double phi = std::atan2(y, x);
        if (phi < 0.0) phi += kTwoPi;
        int i = static_cast<int>(std::floor((r - g.domain.r_inner) / g.dr));
        i = std::clamp(i, 0, g.nr - 1);
        const int j = g.wrap(static_cast<int>(std::lround(phi / g.dphi)));
        if (degenerate) {
          value = 127;
        } else {
          const double v01 = (f.values[g.idx(i, j)] - lo) / span;
          value = std::clamp(static_cast<int>(std::lround(v01 * 255.0)), 0, 255);
        }
      }
      os << value;
      if (++on_line == 16) {
        os << '\n';
        on_line = 0;
      } else {
        os << ' ';
      }
    }
  }
  if (on_line) os << '\n';
  return os.str();
}

void render_pgm_file(const std::string& path, const Field& f, int size) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  os << render_pgm(f, size);
  os.flush();
  if (!os) throw std::runtime_error("write failed: " + path);
}

}  // namespace rotasym
