#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>

#include "rotasym/bessel.hpp"
#include "rotasym/config.hpp"
#include "rotasym/field_io.hpp"
#include "rotasym/geometry.hpp"
#include "rotasym/solver.hpp"

using namespace rotasym;

namespace {

Field random_field(const GridPtr& g, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-10.0, 10.0);
  Field f(g, 0.625);
  for (double& v : f.values) v = dist(rng);
  return f;
}

// Minimal complete scenario; callers append or override lines.
std::string base_config() {
  return "grid.nr = 8\n"
         "grid.ntheta = 16\n"
         "scheme.dt = 1e-3\n"
         "nonlinearity.preset = linear\n"
         "nonlinearity.params = 0.5\n"
         "ic.preset = radial\n"
         "time.t_end = 0.1\n"
         "time.snapshot_every = 0.05\n";
}

int error_line(const std::string& text) {
  try {
    parse_config_text(text);
  } catch (const ConfigError& e) {
    return e.line;
  }
  return -1;
}

}  // namespace

TEST_CASE("field text round-trip is bitwise exact") {
  for (const RadialDomain& dom :
       {RadialDomain::disk(1.0), RadialDomain::annulus(0.3, 1.7)}) {
    const GridPtr g = build_grid(dom, 5, 12);
    const Field f = random_field(g, 11);
    std::stringstream ss;
    write_field(ss, f);
    const Field back = read_field(ss);
    CHECK(grids_compatible(*back.grid, *g));
    CHECK(back.time == f.time);
    REQUIRE(back.values.size() == f.values.size());
    for (size_t c = 0; c < f.values.size(); ++c)
      CHECK(back.values[c] == f.values[c]);
  }
}

TEST_CASE("field file round-trip, including awkward values") {
  const GridPtr g = build_grid(RadialDomain::disk(2.0), 4, 8);
  Field f = random_field(g, 7);
  f.values[0] = 0.1;                   // not representable exactly
  f.values[1] = -0.0;
  f.values[2] = 1e-308;                // subnormal neighborhood
  f.values[3] = 12345678901234567.0;   // needs all 17 digits
  f.values[4] = kPi;
  const std::string path = "/tmp/rotasym_io_test_field.txt";
  write_field_file(path, f);
  const Field back = read_field_file(path);
  for (size_t c = 0; c < f.values.size(); ++c) CHECK(back.values[c] == f.values[c]);
  CHECK(std::signbit(back.values[1]));
  std::remove(path.c_str());
}

TEST_CASE("format_g17 round-trips doubles through text") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> dist(-1e6, 1e6);
  for (int trial = 0; trial < 200; ++trial) {
    const double x = dist(rng) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
    CHECK(std::stod(format_g17(x)) == x);
  }
  CHECK(format_g17(2.0) == "2");  // compact for exact integers
}

TEST_CASE("read_field rejects malformed input with a reason") {
  const GridPtr g = build_grid(RadialDomain::disk(1.0), 4, 8);
  std::stringstream good;
  write_field(good, random_field(g, 3));
  const std::string text = good.str();

  auto expect_fail = [](const std::string& s, const char* fragment) {
    std::istringstream is(s);
    try {
      read_field(is);
      FAIL_CHECK("expected read_field to reject: " << fragment);
    } catch (const std::runtime_error& e) {
      CHECK(std::string(e.what()).find(fragment) != std::string::npos);
    }
  };

  expect_fail("", "missing magic");
  expect_fail("rotasym-field 2\n" + text.substr(text.find("kind")), "magic");
  expect_fail("other-format 1\nkind disk\n", "magic");

  std::string bad_kind = text;
  bad_kind.replace(bad_kind.find("disk"), 4, "cube");
  expect_fail(bad_kind, "unknown kind");

  // Truncation: drop the last value line entirely.
  const std::string truncated = text.substr(0, text.rfind('\n', text.size() - 2));
  expect_fail(truncated, "truncated values");

  std::string bad_nr = text;
  bad_nr.replace(bad_nr.find("nr 4"), 4, "nr 2");  // below the grid minimum
  expect_fail(bad_nr, "nr");

  std::string no_number = text;
  no_number.replace(no_number.find("time"), 4, "tame");
  expect_fail(no_number, "expected header key 'time'");

  CHECK_THROWS_AS(read_field_file("/tmp/rotasym_does_not_exist.txt"),
                  std::runtime_error);
}

TEST_CASE("a complete config parses into the expected scenario") {
  const std::string text =
      "# full scenario\n"
      "domain.kind = annulus\n"
      "domain.r_inner = 0.5\n"
      "domain.r_outer = 2.0\n"
      "grid.nr = 12          # inline comment\n"
      "grid.ntheta = 24\n"
      "\n"
      "scheme.kind = backward_euler\n"
      "scheme.dt = 2e-3\n"
      "scheme.lin_tol = 1e-9\n"
      "scheme.blowup_guard = 500\n"
      "nonlinearity.preset = cubic\n"
      "nonlinearity.params = 1.0, -2.0\n"
      "ic.preset = bump\n"
      "ic.params = 0.7853981633974483, 0.4, 2.0\n"
      "time.t_end = 0.25\n"
      "time.snapshot_every = 0.05\n"
      "analysis.tol = 5e-4\n"
      "analysis.window_fraction = 0.4\n"
      "analysis.e_start = 0.130899693899574718\n"  // pi/24
      "output.dir = /tmp/somewhere\n"
      "output.snapshots = true\n"
      "output.heatmaps = false\n";
  const ScenarioConfig cfg = parse_config_text(text);
  CHECK(cfg.domain.kind == DomainKind::annulus);
  CHECK(cfg.domain.r_inner == 0.5);
  CHECK(cfg.domain.r_outer == 2.0);
  CHECK(cfg.nr == 12);
  CHECK(cfg.ntheta == 24);
  CHECK(cfg.scheme.kind == Scheme::Kind::backward_euler);
  CHECK(cfg.scheme.dt == 2e-3);
  CHECK(cfg.scheme.lin_tol == 1e-9);
  CHECK(cfg.blowup_guard == 500.0);
  CHECK(cfg.nonlinearity_preset == "cubic");
  REQUIRE(cfg.nonlinearity_params.size() == 2);
  CHECK(cfg.nonlinearity_params[1] == -2.0);
  CHECK(cfg.ic_preset == "bump");
  CHECK(cfg.t_end == 0.25);
  CHECK(cfg.snapshot_every == 0.05);
  CHECK(cfg.tol == 5e-4);
  CHECK(cfg.window_fraction == 0.4);
  CHECK(cfg.out_dir == "/tmp/somewhere");
  CHECK(cfg.emit_snapshots);
  CHECK_FALSE(cfg.emit_heatmaps);

  const GridPtr g = cfg.make_grid();
  CHECK(g->nr == 12);
  CHECK(g->ntheta == 24);
  CHECK(lattice_index(cfg.e_start(), 24) == 1);
}

TEST_CASE("defaults cover everything optional") {
  const ScenarioConfig cfg = parse_config_text(base_config());
  CHECK(cfg.domain.kind == DomainKind::disk);
  CHECK(cfg.domain.r_outer == 1.0);
  CHECK(cfg.scheme.kind == Scheme::Kind::imex_fourier);
  CHECK(cfg.scheme.reaction_order == 2);
  CHECK(cfg.blowup_guard == 1e6);
  CHECK(cfg.tol == 1e-3);
  CHECK(cfg.window_fraction == 0.2);
  CHECK(cfg.e_start().alpha == 0.0);
  CHECK(cfg.out_dir == "out");
  CHECK_FALSE(cfg.emit_snapshots);
  CHECK_FALSE(cfg.emit_heatmaps);
}

TEST_CASE("config errors carry the offending line number") {
  CHECK(error_line("grid.nr = 8\ngrid.ntheta = 15\n") == 2);          // odd
  CHECK(error_line(base_config() + "grid.extra = 1\n") == 9);         // unknown
  CHECK(error_line("grid.nr = abc\n") == 1);                          // not int
  CHECK(error_line("grid.nr 8\n") == 1);                              // no '='
  CHECK(error_line("grid.nr =\n") == 1);                              // empty val
  CHECK(error_line("= 3\n") == 1);                                    // empty key
  CHECK(error_line("grid.nr = 2\n") == 1);                            // too small
  CHECK(error_line("grid.ntheta = 6\n") == 1);                        // too small
  CHECK(error_line("scheme.kind = rk4\n") == 1);                      // bad enum
  CHECK(error_line("scheme.dt = 0\n") == 1);
  CHECK(error_line("scheme.reaction_order = 3\n") == 1);
  CHECK(error_line("time.t_end = -1\n") == 1);
  CHECK(error_line("analysis.window_fraction = 1.5\n") == 1);
  CHECK(error_line("nonlinearity.params = 1,,2\n") == 1);             // empty elt
}

TEST_CASE("missing required keys are reported without a line") {
  for (const char* req : {"grid.nr", "grid.ntheta", "scheme.dt",
                          "nonlinearity.preset", "ic.preset", "time.t_end",
                          "time.snapshot_every"}) {
    std::istringstream all(base_config());
    std::string text, line;
    while (std::getline(all, line))
      if (line.find(req) != 0) text += line + "\n";
    try {
      parse_config_text(text);
      FAIL_CHECK("expected a missing-key error for " << req);
    } catch (const ConfigError& e) {
      CHECK(e.line == 0);
      CHECK(std::string(e.what()).find(req) != std::string::npos);
    }
  }
}

TEST_CASE("whole-scenario validation happens at parse time") {
  // Nonlinearity arity is checked by a dry construction.
  CHECK(error_line(base_config() + "nonlinearity.params = 0.5, 1.0\n") == 0);
  CHECK(error_line(base_config() + "nonlinearity.preset = vortex\n") == 0);
  // Unknown ic preset.
  CHECK(error_line(base_config() + "ic.preset = spiral\n") == 0);
  // Annulus radii must nest.
  CHECK(error_line(base_config() +
                   "domain.kind = annulus\ndomain.r_inner = 2.0\n") == 0);
  // e_start must sit on the half-angle lattice pi/ntheta.
  CHECK(error_line(base_config() + "analysis.e_start = 0.1\n") == 0);
  const ScenarioConfig ok =
      parse_config_text(base_config() + "analysis.e_start = 0.19634954084936207\n");
  CHECK(lattice_index(ok.e_start(), 16) == 1);  // accepted: pi/16
}

TEST_CASE("parse_config_file reports unopenable paths") {
  CHECK_THROWS_AS(parse_config_file("/tmp/rotasym_missing_config.cfg"),
                  ConfigError);
}

TEST_CASE("eigenfunction and modes initial conditions match the oracle") {
  ScenarioConfig cfg = parse_config_text(base_config());
  const GridPtr g = cfg.make_grid();

  cfg.ic_preset = "eigenfunction";
  cfg.ic_params = {1.0, 1.0, 2.5};
  const Field u = cfg.initial_condition(g);
  const Field ref = eigenpair_oracle(g, 1, 1).field;
  for (int c = 0; c < g->cells(); ++c) CHECK(u.values[c] == 2.5 * ref.values[c]);

  cfg.ic_preset = "modes";
  cfg.ic_params = {0.0, 1.0, 1.0, 2.0, 1.0, -0.5};
  const Field mix = cfg.initial_condition(g);
  const Field a = eigenpair_oracle(g, 0, 1).field;
  const Field b = eigenpair_oracle(g, 2, 1).field;
  for (int c = 0; c < g->cells(); ++c)
    CHECK(mix.values[c] ==
          doctest::Approx(a.values[c] - 0.5 * b.values[c]).epsilon(1e-15));
}

TEST_CASE("bump initial condition peaks at its center and wraps") {
  ScenarioConfig cfg = parse_config_text(base_config());
  const GridPtr g = cfg.make_grid();
  cfg.ic_preset = "bump";
  const double center = g->phi[3];
  cfg.ic_params = {center, 0.5, 2.0};
  const Field u = cfg.initial_condition(g);

  const int mid = g->nr / 2;
  for (int j = 0; j < g->ntheta; ++j)
    CHECK(u.at(mid, j) <= u.at(mid, 3) + 1e-15);
  CHECK(u.at(mid, 3) == doctest::Approx(2.0 * (1.0 - g->r[mid] * g->r[mid])));
  // Angular distance wraps: one step below the center equals one step above.
  CHECK(u.at(mid, 2) == doctest::Approx(u.at(mid, 4)).epsilon(1e-12));
  cfg.ic_params = {0.0, -1.0};  // negative width
  CHECK_THROWS_AS(cfg.initial_condition(g), std::invalid_argument);
}

TEST_CASE("radial initial condition profiles") {
  ScenarioConfig cfg = parse_config_text(base_config());
  const GridPtr g = cfg.make_grid();

  cfg.ic_preset = "radial";
  cfg.ic_params = {};
  const Field para = cfg.initial_condition(g);
  for (int i = 0; i < g->nr; ++i) {
    const double want = 1.0 - g->r[i] * g->r[i];
    for (int j = 0; j < g->ntheta; ++j)
      CHECK(para.at(i, j) == doctest::Approx(want).epsilon(1e-15));
  }

  cfg.ic_params = {1.0, 3.0};
  const Field ground = cfg.initial_condition(g);
  const double z = bessel_j_zero(0, 1);
  CHECK(ground.at(2, 5) ==
        doctest::Approx(3.0 * bessel_j(0, z * g->r[2])).epsilon(1e-14));

  cfg.ic_params = {2.0};
  CHECK_THROWS_AS(cfg.initial_condition(g), std::invalid_argument);

  // Bessel ground mode has no annulus analogue here.
  ScenarioConfig ann = parse_config_text(
      base_config() + "domain.kind = annulus\ndomain.r_inner = 0.4\n");
  ann.ic_preset = "radial";
  ann.ic_params = {1.0};
  CHECK_THROWS_AS(ann.initial_condition(ann.make_grid()), std::invalid_argument);

  // Parabolic annulus profile vanishes at both walls and peaks mid-gap.
  ann.ic_params = {};
  const GridPtr ag = ann.make_grid();
  const Field apara = ann.initial_condition(ag);
  for (int i = 0; i < ag->nr; ++i) {
    const double a = ag->domain.r_inner, b = ag->domain.r_outer;
    const double want = 4.0 * (ag->r[i] - a) * (b - ag->r[i]) / ((b - a) * (b - a));
    CHECK(apara.at(i, 0) == doctest::Approx(want).epsilon(1e-15));
  }
}

TEST_CASE("initial condition arity violations") {
  ScenarioConfig cfg = parse_config_text(base_config());
  const GridPtr g = cfg.make_grid();
  cfg.ic_preset = "eigenfunction";
  cfg.ic_params = {1.0};
  CHECK_THROWS_AS(cfg.initial_condition(g), std::invalid_argument);
  cfg.ic_params = {1.0, 1.0, 1.0, 1.0};
  CHECK_THROWS_AS(cfg.initial_condition(g), std::invalid_argument);
  cfg.ic_preset = "modes";
  cfg.ic_params = {1.0, 1.0};
  CHECK_THROWS_AS(cfg.initial_condition(g), std::invalid_argument);
  cfg.ic_params = {};
  CHECK_THROWS_AS(cfg.initial_condition(g), std::invalid_argument);
}
