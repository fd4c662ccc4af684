#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rotasym/config.hpp"
#include "rotasym/omega.hpp"
#include "rotasym/solver.hpp"
#include "rotasym/symmetry.hpp"

namespace rotasym {

// Joint symmetry verdicts for a set of fields on one grid: the dominance
// set, the detected axis with per-field certification, and (when a start
// direction is supplied and admissible) the rotating-plane sweep.
struct AnalysisReport {
  double tol = 0.0;
  DirectionSet M;
  AxisResult axis;
  bool sweep_ran = false;
  SweepResult sweep;
  std::string sweep_note;  // why the sweep was skipped, when it was
};

AnalysisReport analyze_fields(const std::vector<Field>& fields, double tol,
                              std::optional<Direction> e_start);

// Everything a scenario run produces, minus wall-clock (which only ever goes
// to timing.log so the deterministic artifacts stay byte-stable).
struct RunSummary {
  bool u1_holds = false;
  double max_sup = 0.0;
  bool aborted = false;
  std::string abort_reason;
  double abort_time = 0.0;
  long steps = 0;
  double dt_eff = 0.0;
  bool omega_ok = false;
  OmegaEstimate omega;
  AnalysisReport analysis;
  std::vector<std::string> artifacts;  // paths relative to the output dir
};

// Executes the full pipeline (integrate -> collect_omega -> compute_M ->
// detect_axis -> fss certification -> rotating_plane_sweep) and writes
// metrics.csv, summary.txt, timing.log, final.txt and rep_NNN.txt under
// cfg.out_dir, plus snapshots/ and heatmaps/ when enabled. Solver aborts do
// not throw: the summary is flagged and partial artifacts are written.
RunSummary run_scenario(const ScenarioConfig& cfg);

// Deterministic structured text; contains no wall-clock data.
std::string summary_text(const RunSummary& s, const ScenarioConfig& cfg);
std::string analysis_text(const AnalysisReport& rep);

}  // namespace rotasym
