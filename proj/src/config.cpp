#include "rotasym/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>

#include "rotasym/bessel.hpp"

namespace rotasym {

namespace {

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

double to_double(const std::string& s, const std::string& key, int line) {
  try {
    size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size())
      throw ConfigError("trailing characters in value for '" + key + "'", line);
    return v;
  } catch (const std::invalid_argument&) {
    throw ConfigError("invalid number for '" + key + "': " + s, line);
  } catch (const std::out_of_range&) {
    throw ConfigError("number out of range for '" + key + "': " + s, line);
  }
}

int to_int(const std::string& s, const std::string& key, int line) {
  try {
    size_t pos = 0;
    int v = std::stoi(s, &pos);
    if (pos != s.size())
      throw ConfigError("trailing characters in value for '" + key + "'", line);
    return v;
  } catch (const std::invalid_argument&) {
    throw ConfigError("invalid integer for '" + key + "': " + s, line);
  } catch (const std::out_of_range&) {
    throw ConfigError("integer out of range for '" + key + "': " + s, line);
  }
}

bool to_bool(const std::string& s, const std::string& key, int line) {
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw ConfigError("invalid boolean for '" + key + "': " + s, line);
}

std::vector<double> to_list(const std::string& s, const std::string& key,
                            int line) {
  std::vector<double> out;
  const std::string body = trim(s);
  if (body.empty()) return out;
  size_t start = 0;
  while (true) {
    size_t comma = body.find(',', start);
    const std::string item = trim(body.substr(
        start, comma == std::string::npos ? std::string::npos : comma - start));
    if (item.empty()) throw ConfigError("empty element in list for '" + key + "'", line);
    out.push_back(to_double(item, key, line));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

ScenarioConfig parse_config(std::istream& is) {
  ScenarioConfig cfg;
  std::string domain_kind = "disk";
  double r_inner = 0.0, r_outer = 1.0;
  std::set<std::string> seen;

  std::string raw;
  int line_no = 0;
  while (std::getline(is, raw)) {
    ++line_no;
    std::string line = raw;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;

    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("expected 'key = value', got '" + trim(raw) + "'", line_no);
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("empty key", line_no);
    if (val.empty()) throw ConfigError("empty value for '" + key + "'", line_no);
    seen.insert(key);

    if (key == "domain.kind") {
      if (val != "disk" && val != "annulus")
        throw ConfigError("domain.kind must be disk or annulus, got '" + val + "'",
                          line_no);
      domain_kind = val;
    } else if (key == "domain.r_inner") {
      r_inner = to_double(val, key, line_no);
    } else if (key == "domain.r_outer") {
      r_outer = to_double(val, key, line_no);
    } else if (key == "grid.nr") {
      cfg.nr = to_int(val, key, line_no);
      if (cfg.nr < 4) throw ConfigError("grid.nr must be >= 4", line_no);
    } else if (key == "grid.ntheta") {
      cfg.ntheta = to_int(val, key, line_no);
      if (cfg.ntheta % 2 != 0)
        throw ConfigError("grid.ntheta must be even, got " + val, line_no);
      if (cfg.ntheta < 8) throw ConfigError("grid.ntheta must be >= 8", line_no);
    } else if (key == "scheme.kind") {
      if (val == "imex_fourier")
        cfg.scheme.kind = Scheme::Kind::imex_fourier;
      else if (val == "backward_euler")
        cfg.scheme.kind = Scheme::Kind::backward_euler;
      else
        throw ConfigError(
            "scheme.kind must be imex_fourier or backward_euler, got '" + val + "'",
            line_no);
    } else if (key == "scheme.dt") {
      cfg.scheme.dt = to_double(val, key, line_no);
      if (!(cfg.scheme.dt > 0.0))
        throw ConfigError("scheme.dt must be > 0", line_no);
    } else if (key == "scheme.reaction_order") {
      cfg.scheme.reaction_order = to_int(val, key, line_no);
      if (cfg.scheme.reaction_order != 1 && cfg.scheme.reaction_order != 2)
        throw ConfigError("scheme.reaction_order must be 1 or 2", line_no);
    } else if (key == "scheme.lin_tol") {
      cfg.scheme.lin_tol = to_double(val, key, line_no);
      if (!(cfg.scheme.lin_tol > 0.0))
        throw ConfigError("scheme.lin_tol must be > 0", line_no);
    } else if (key == "scheme.blowup_guard") {
      cfg.blowup_guard = to_double(val, key, line_no);
      if (!(cfg.blowup_guard > 0.0))
        throw ConfigError("scheme.blowup_guard must be > 0", line_no);
    } else if (key == "nonlinearity.preset") {
      cfg.nonlinearity_preset = val;
    } else if (key == "nonlinearity.params") {
      cfg.nonlinearity_params = to_list(val, key, line_no);
    } else if (key == "ic.preset") {
      cfg.ic_preset = val;
    } else if (key == "ic.params") {
      cfg.ic_params = to_list(val, key, line_no);
    } else if (key == "time.t_end") {
      cfg.t_end = to_double(val, key, line_no);
      if (!(cfg.t_end > 0.0)) throw ConfigError("time.t_end must be > 0", line_no);
    } else if (key == "time.snapshot_every") {
      cfg.snapshot_every = to_double(val, key, line_no);
      if (!(cfg.snapshot_every > 0.0))
        throw ConfigError("time.snapshot_every must be > 0", line_no);
    } else if (key == "analysis.tol") {
      cfg.tol = to_double(val, key, line_no);
      if (!(cfg.tol > 0.0)) throw ConfigError("analysis.tol must be > 0", line_no);
    } else if (key == "analysis.window_fraction") {
      cfg.window_fraction = to_double(val, key, line_no);
      if (!(cfg.window_fraction > 0.0) || cfg.window_fraction > 1.0)
        throw ConfigError("analysis.window_fraction must be in (0, 1]", line_no);
    } else if (key == "analysis.e_start") {
      cfg.e_start_angle = to_double(val, key, line_no);
    } else if (key == "output.dir") {
      cfg.out_dir = val;
    } else if (key == "output.snapshots") {
      cfg.emit_snapshots = to_bool(val, key, line_no);
    } else if (key == "output.heatmaps") {
      cfg.emit_heatmaps = to_bool(val, key, line_no);
    } else {
      throw ConfigError("unknown key '" + key + "'", line_no);
    }
  }

  for (const char* req : {"grid.nr", "grid.ntheta", "scheme.dt",
                          "nonlinearity.preset", "ic.preset", "time.t_end",
                          "time.snapshot_every"})
    if (!seen.count(req))
      throw ConfigError(std::string("missing required key '") + req + "'", 0);

  try {
    cfg.domain = domain_kind == "disk" ? RadialDomain::disk(r_outer)
                                       : RadialDomain::annulus(r_inner, r_outer);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what(), 0);
  }

  try {
    (void)cfg.make_nonlinearity();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what(), 0);
  }

  static const std::set<std::string> ic_presets = {"eigenfunction", "bump",
                                                   "radial", "modes"};
  if (!ic_presets.count(cfg.ic_preset))
    throw ConfigError("unknown ic.preset '" + cfg.ic_preset + "'", 0);

  if (!lattice_index(Direction::from_angle(cfg.e_start_angle), cfg.ntheta))
    throw ConfigError(
        "analysis.e_start is not on the half-angle lattice (multiples of pi/" +
            std::to_string(cfg.ntheta) + ")",
        0);

  return cfg;
}

ScenarioConfig parse_config_text(const std::string& text) {
  std::istringstream is(text);
  return parse_config(is);
}

ScenarioConfig parse_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file: " + path, 0);
  return parse_config(is);
}

GridPtr ScenarioConfig::make_grid() const { return build_grid(domain, nr, ntheta); }

Nonlinearity ScenarioConfig::make_nonlinearity() const {
  return Nonlinearity::from_preset(nonlinearity_preset, nonlinearity_params);
}

Direction ScenarioConfig::e_start() const {
  return Direction::from_angle(e_start_angle);
}

namespace {

// Vanishes at every Dirichlet wall, peak value 1.
double parabolic_profile(const RadialDomain& d, double r) {
  if (d.kind == DomainKind::disk) {
    const double s = r / d.r_outer;
    return 1.0 - s * s;
  }
  const double a = d.r_inner, b = d.r_outer;
  return 4.0 * (r - a) * (b - r) / ((b - a) * (b - a));
}

double angular_distance(double phi, double center) {
  double d = std::fmod(phi - center, kTwoPi);
  if (d < -kPi) d += kTwoPi;
  if (d >= kPi) d -= kTwoPi;
  return d;
}

}  // namespace

Field ScenarioConfig::initial_condition(const GridPtr& grid) const {
  const PolarGrid& g = *grid;
  auto arity = [&](size_t lo, size_t hi) {
    if (ic_params.size() < lo || ic_params.size() > hi)
      throw std::invalid_argument("ic.params: preset '" + ic_preset +
                                  "' takes between " + std::to_string(lo) +
                                  " and " + std::to_string(hi) + " numbers");
  };

  Field u(grid, 0.0);
  if (ic_preset == "eigenfunction") {
    arity(2, 3);
    const int m = static_cast<int>(ic_params[0]);
    const int k = static_cast<int>(ic_params[1]);
    const double amp = ic_params.size() > 2 ? ic_params[2] : 1.0;
    Eigenpair ep = eigenpair_oracle(grid, m, k);
    for (int c = 0; c < g.cells(); ++c) u.values[c] = amp * ep.field.values[c];
    return u;
  }
  if (ic_preset == "bump") {
    arity(2, 3);
    const double center = ic_params[0];
    const double width = ic_params[1];
    const double amp = ic_params.size() > 2 ? ic_params[2] : 1.0;
    if (!(width > 0.0))
      throw std::invalid_argument("ic.params: bump width must be > 0");
    for (int i = 0; i < g.nr; ++i) {
      const double radial = parabolic_profile(g.domain, g.r[i]);
      for (int j = 0; j < g.ntheta; ++j) {
        const double d = angular_distance(g.phi[j], center) / width;
        u.values[g.idx(i, j)] = amp * radial * std::exp(-d * d);
      }
    }
    return u;
  }
  if (ic_preset == "radial") {
    arity(0, 2);
    const int profile = ic_params.empty() ? 0 : static_cast<int>(ic_params[0]);
    const double amp = ic_params.size() > 1 ? ic_params[1] : 1.0;
    for (int i = 0; i < g.nr; ++i) {
      double radial;
      if (profile == 0) {
        radial = parabolic_profile(g.domain, g.r[i]);
      } else if (profile == 1) {
        if (!g.is_disk())
          throw std::invalid_argument("ic radial profile 1 needs a disk domain");
        const double z = bessel_j_zero(0, 1);
        radial = bessel_j(0, z * g.r[i] / g.domain.r_outer);
      } else {
        throw std::invalid_argument("ic radial profile must be 0 or 1");
      }
      for (int j = 0; j < g.ntheta; ++j) u.values[g.idx(i, j)] = amp * radial;
    }
    return u;
  }
  if (ic_preset == "modes") {
    if (ic_params.empty() || ic_params.size() % 3 != 0)
      throw std::invalid_argument("ic.params: modes preset takes m,k,amp triples");
    for (size_t s = 0; s < ic_params.size(); s += 3) {
      const int m = static_cast<int>(ic_params[s]);
      const int k = static_cast<int>(ic_params[s + 1]);
      const double amp = ic_params[s + 2];
      Eigenpair ep = eigenpair_oracle(grid, m, k);
      for (int c = 0; c < g.cells(); ++c)
        u.values[c] += amp * ep.field.values[c];
    }
    return u;
  }
  throw std::invalid_argument("unknown ic.preset '" + ic_preset + "'");
}

}  // namespace rotasym
