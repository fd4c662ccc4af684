#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "rotasym/geometry.hpp"
#include "rotasym/solver.hpp"

namespace rotasym {

// Config parse/validation failure; line is 1-based, 0 when the problem is not
// tied to one line (e.g. a missing required key).
struct ConfigError : std::runtime_error {
  int line;
  ConfigError(const std::string& what, int line_no)
      : std::runtime_error(line_no > 0
                               ? "line " + std::to_string(line_no) + ": " + what
                               : what),
        line(line_no) {}
};

// Scenario description parsed from flat `section.key = value` text.
// Keys:
//   domain.kind       disk | annulus
//   domain.r_inner    (annulus only)
//   domain.r_outer
//   grid.nr  grid.ntheta
//   scheme.kind       imex_fourier | backward_euler
//   scheme.dt  scheme.reaction_order  scheme.lin_tol  scheme.blowup_guard
//   nonlinearity.preset  nonlinearity.params   (comma-separated numbers)
//   ic.preset         eigenfunction | bump | radial | modes
//   ic.params         eigenfunction: m,k[,amp]; bump: center_phi,width[,amp];
//                     radial: [profile,[amp]] (0 parabolic, 1 ground mode);
//                     modes: m,k,amp triples
//   time.t_end  time.snapshot_every
//   analysis.tol  analysis.window_fraction  analysis.e_start   (radians, on
//                     the half-angle lattice)
//   output.dir  output.snapshots  output.heatmaps
struct ScenarioConfig {
  RadialDomain domain = RadialDomain::disk(1.0);
  int nr = 0;
  int ntheta = 0;
  Scheme scheme;
  double blowup_guard = 1e6;
  std::string nonlinearity_preset;
  std::vector<double> nonlinearity_params;
  std::string ic_preset;
  std::vector<double> ic_params;
  double t_end = 0.0;
  double snapshot_every = 0.0;
  double tol = 1e-3;
  double window_fraction = 0.2;
  double e_start_angle = 0.0;
  std::string out_dir = "out";
  bool emit_snapshots = false;
  bool emit_heatmaps = false;

  GridPtr make_grid() const;
  Nonlinearity make_nonlinearity() const;
  Direction e_start() const;
  // Initial condition on the given grid; throws std::invalid_argument for
  // preset/domain mismatches (e.g. Bessel modes on an annulus).
  Field initial_condition(const GridPtr& grid) const;
};

// Parses and validates; throws ConfigError with a line number for syntax
// errors and unknown keys, line 0 for missing/inconsistent fields.
ScenarioConfig parse_config(std::istream& is);
ScenarioConfig parse_config_text(const std::string& text);
ScenarioConfig parse_config_file(const std::string& path);

}  // namespace rotasym
