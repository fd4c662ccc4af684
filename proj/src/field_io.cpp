#include "rotasym/field_io.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace rotasym {

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_field(std::ostream& os, const Field& f) {
  const PolarGrid& g = *f.grid;
  os << "rotasym-field 1\n";
  os << "kind " << (g.is_disk() ? "disk" : "annulus") << '\n';
  os << "r_inner " << format_g17(g.domain.r_inner) << '\n';
  os << "r_outer " << format_g17(g.domain.r_outer) << '\n';
  os << "nr " << g.nr << '\n';
  os << "ntheta " << g.ntheta << '\n';
  os << "time " << format_g17(f.time) << '\n';
  for (int i = 0; i < g.nr; ++i) {
    for (int j = 0; j < g.ntheta; ++j) {
      if (j) os << ' ';
      os << format_g17(f.values[g.idx(i, j)]);
    }
    os << '\n';
  }
}

void write_field_file(const std::string& path, const Field& f) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  write_field(os, f);
  os.flush();
  if (!os) throw std::runtime_error("write failed: " + path);
}

namespace {

[[noreturn]] void bad(const std::string& what) {
  throw std::runtime_error("field file: " + what);
}

std::string expect_key(std::istream& is, const std::string& key) {
  std::string k, v;
  if (!(is >> k >> v)) bad("truncated header, expected '" + key + "'");
  if (k != key) bad("expected header key '" + key + "', found '" + k + "'");
  return v;
}

double parse_double(const std::string& s, const std::string& key) {
  try {
    size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) bad("trailing characters in value for '" + key + "'");
    return v;
  } catch (const std::invalid_argument&) {
    bad("invalid number for '" + key + "': " + s);
  } catch (const std::out_of_range&) {
    bad("number out of range for '" + key + "': " + s);
  }
}

int parse_int(const std::string& s, const std::string& key) {
  try {
    size_t pos = 0;
    int v = std::stoi(s, &pos);
    if (pos != s.size()) bad("trailing characters in value for '" + key + "'");
    return v;
  } catch (const std::invalid_argument&) {
    bad("invalid integer for '" + key + "': " + s);
  } catch (const std::out_of_range&) {
    bad("integer out of range for '" + key + "': " + s);
  }
}

}  // namespace

Field read_field(std::istream& is) {
  std::string magic, version;
  if (!(is >> magic >> version)) bad("missing magic line");
  if (magic != "rotasym-field" || version != "1")
    bad("unrecognized magic '" + magic + " " + version + "'");

  const std::string kind = expect_key(is, "kind");
  const double r_inner = parse_double(expect_key(is, "r_inner"), "r_inner");
  const double r_outer = parse_double(expect_key(is, "r_outer"), "r_outer");
  const int nr = parse_int(expect_key(is, "nr"), "nr");
  const int ntheta = parse_int(expect_key(is, "ntheta"), "ntheta");
  const double time = parse_double(expect_key(is, "time"), "time");

  RadialDomain dom;
  if (kind == "disk") {
    if (r_inner != 0.0) bad("disk requires r_inner 0");
    dom = RadialDomain::disk(r_outer);
  } else if (kind == "annulus") {
    dom = RadialDomain::annulus(r_inner, r_outer);
  } else {
    bad("unknown kind '" + kind + "'");
  }

  GridPtr grid;
  try {
    grid = build_grid(dom, nr, ntheta);
  } catch (const std::invalid_argument& e) {
    bad(e.what());
  }

  Field f(grid, time);
  for (int c = 0; c < grid->cells(); ++c)
    if (!(is >> f.values[c]))
      bad("truncated values: expected " + std::to_string(grid->cells()) +
          ", got " + std::to_string(c));
  return f;
}

Field read_field_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open field file: " + path);
  try {
    return read_field(is);
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

}  // namespace rotasym
