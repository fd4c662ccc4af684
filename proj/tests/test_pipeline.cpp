#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "rotasym/config.hpp"
#include "rotasym/field_io.hpp"
#include "rotasym/pipeline.hpp"
#include "rotasym/render.hpp"

using namespace rotasym;
namespace fs = std::filesystem;

namespace {

std::string heat_config(const std::string& out_dir) {
  return "grid.nr = 8\n"
         "grid.ntheta = 16\n"
         "scheme.dt = 1e-3\n"
         "nonlinearity.preset = linear\n"
         "nonlinearity.params = 0\n"
         "ic.preset = eigenfunction\n"
         "ic.params = 1,1\n"
         "time.t_end = 0.05\n"
         "time.snapshot_every = 0.01\n"
         "output.dir = " + out_dir + "\n";
}

ScenarioConfig fresh(const std::string& text, const std::string& out_dir) {
  fs::remove_all(out_dir);
  ScenarioConfig cfg = parse_config_text(text);
  cfg.out_dir = out_dir;
  return cfg;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  REQUIRE_MESSAGE(static_cast<bool>(is), "cannot open " << p.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::istringstream is(slurp(p));
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(is, line)) {
    std::vector<std::string> row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) row.push_back(cell);
    rows.push_back(row);
  }
  return rows;
}

std::vector<std::string> tree(const fs::path& root) {
  std::vector<std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(root))
    if (e.is_regular_file())
      files.push_back(fs::relative(e.path(), root).generic_string());
  std::sort(files.begin(), files.end());
  return files;
}

int run_cmd(const std::string& cmd) {
  const int rc = std::system(cmd.c_str());
  if (rc == -1) return -1;
  return WEXITSTATUS(rc);
}

}  // namespace

TEST_CASE("run_scenario writes exactly the artifacts it reports") {
  const std::string dir = "/tmp/rotasym_pl_full";
  ScenarioConfig cfg = fresh(heat_config(dir), dir);
  cfg.emit_snapshots = true;
  cfg.emit_heatmaps = true;

  const RunSummary su = run_scenario(cfg);
  CHECK_FALSE(su.aborted);
  CHECK(su.u1_holds);
  CHECK(su.steps == 50);
  CHECK(su.dt_eff == doctest::Approx(1e-3));
  CHECK(su.omega_ok);
  CHECK(su.omega.representatives.size() >= 2);

  // The advertised artifact list and the on-disk tree must agree exactly.
  std::vector<std::string> advertised = su.artifacts;
  std::sort(advertised.begin(), advertised.end());
  CHECK(tree(dir) == advertised);

  // Six snapshots at the 0.01 cadence, written under snapshots/.
  CHECK(std::count_if(advertised.begin(), advertised.end(), [](const auto& a) {
          return a.rfind("snapshots/", 0) == 0;
        }) == 6);

  // summary.txt is byte-for-byte the deterministic summary text.
  CHECK(slurp(fs::path(dir) / "summary.txt") == summary_text(su, cfg));

  // final.txt equals the last emitted snapshot, value for value.
  const Field fin = read_field_file(dir + std::string("/final.txt"));
  const Field last = read_field_file(dir + std::string("/snapshots/snap_005.txt"));
  CHECK(fin.time == last.time);
  CHECK(fin.values == last.values);

  // Every representative file reads back on the run grid.
  const Field rep0 = read_field_file(dir + std::string("/rep_000.txt"));
  CHECK(grids_compatible(*rep0.grid, *cfg.make_grid()));
}

TEST_CASE("metrics.csv rows follow the snapshot cadence and semantics") {
  const std::string dir = "/tmp/rotasym_pl_metrics";
  ScenarioConfig cfg = fresh(heat_config(dir), dir);
  cfg.emit_snapshots = true;
  const RunSummary su = run_scenario(cfg);

  const auto rows = read_csv(fs::path(dir) / "metrics.csv");
  REQUIRE(rows.size() == 7);  // header + six snapshots
  const std::vector<std::string> header = {
      "t",        "sup_norm",      "u1_holds",     "m_arc_count",
      "largest_arc_deg", "axis_deg", "axial_deficit", "mono_deficit",
      "dist_to_omega"};
  CHECK(rows[0] == header);

  double prev_sup = 1e300;
  for (size_t k = 1; k < rows.size(); ++k) {
    REQUIRE(rows[k].size() == 9);
    const Field snap = read_field_file(
        dir + std::string("/snapshots/snap_00") + std::to_string(k - 1) + ".txt");
    CHECK(std::stod(rows[k][0]) == snap.time);
    CHECK(std::stod(rows[k][1]) == sup_norm(snap));
    CHECK(rows[k][2] == "1");  // dominance holds at every time
    CHECK(rows[k][3] == "1");  // one arc
    CHECK(std::stod(rows[k][4]) > 180.0);  // closed half circle plus boundary
    CHECK(std::stod(rows[k][5]) == 0.0);   // axis at phi = 0 degrees
    CHECK(std::stod(rows[k][6]) < 1e-12);  // axial deficit
    CHECK(std::stod(rows[k][7]) == 0.0);   // monotone about the axis
    const double sup = std::stod(rows[k][1]);
    CHECK(sup < prev_sup);
    prev_sup = sup;
  }
  // The last snapshot lies inside the omega window: within tol of the net.
  CHECK(std::stod(rows.back()[8]) <= cfg.tol);
  CHECK(su.analysis.axis.kind == AxisResult::Kind::axis);
}

TEST_CASE("two identical runs differ only in timing.log") {
  const std::string da = "/tmp/rotasym_pl_det_a";
  const std::string db = "/tmp/rotasym_pl_det_b";
  ScenarioConfig ca = fresh(heat_config(da), da);
  ScenarioConfig cb = fresh(heat_config(db), db);
  ca.emit_snapshots = cb.emit_snapshots = true;
  ca.emit_heatmaps = cb.emit_heatmaps = true;
  (void)run_scenario(ca);
  (void)run_scenario(cb);

  const auto files_a = tree(da);
  CHECK(files_a == tree(db));
  for (const std::string& rel : files_a) {
    if (rel == "timing.log") continue;
    INFO("artifact " << rel);
    CHECK(slurp(fs::path(da) / rel) == slurp(fs::path(db) / rel));
  }
  CHECK(fs::exists(fs::path(da) / "timing.log"));
}

TEST_CASE("analyze_fields on the written representatives matches the run") {
  const std::string dir = "/tmp/rotasym_pl_reanalyze";
  ScenarioConfig cfg = fresh(heat_config(dir), dir);
  const RunSummary su = run_scenario(cfg);

  std::vector<Field> reps;
  for (const std::string& a : su.artifacts)
    if (a.rfind("rep_", 0) == 0)
      reps.push_back(read_field_file(dir + "/" + a));
  REQUIRE(reps.size() == su.omega.representatives.size());

  const AnalysisReport re = analyze_fields(reps, cfg.tol, cfg.e_start());
  CHECK(re.M.member == su.analysis.M.member);
  REQUIRE(re.axis.kind == su.analysis.axis.kind);
  CHECK(re.axis.p->alpha == su.analysis.axis.p->alpha);
  CHECK(re.axis.all_fss() == su.analysis.axis.all_fss());
  REQUIRE(re.sweep_ran);
  REQUIRE(su.analysis.sweep_ran);
  CHECK(re.sweep.theta1 == su.analysis.sweep.theta1);
  CHECK(re.sweep.theta2 == su.analysis.sweep.theta2);
  // Deterministic narration as well.
  CHECK(analysis_text(re) == analysis_text(su.analysis));
}

TEST_CASE("analyze_fields gates the sweep on the start direction") {
  const GridPtr g = build_grid(RadialDomain::disk(1.0), 8, 16);
  const std::vector<Field> fields = {eigenpair_oracle(g, 1, 1).field};

  const AnalysisReport none = analyze_fields(fields, 1e-6, std::nullopt);
  CHECK_FALSE(none.sweep_ran);
  CHECK(none.sweep_note == "no start direction supplied");

  const AnalysisReport ran =
      analyze_fields(fields, 1e-6, Direction::lattice(0, 16));
  CHECK(ran.sweep_ran);
  CHECK(ran.sweep_note.empty());
  CHECK(ran.sweep.theta1 == doctest::Approx(kPi / 2.0));

  // An inadmissible start is reported, not thrown.
  const AnalysisReport bad =
      analyze_fields(fields, 1e-6, Direction::lattice(16, 16));
  CHECK_FALSE(bad.sweep_ran);
  CHECK_FALSE(bad.sweep_note.empty());
}

TEST_CASE("a symmetry-broken attractor is reported as uncertified") {
  const std::string dir = "/tmp/rotasym_pl_none";
  ScenarioConfig cfg = fresh(
      "grid.nr = 8\n"
      "grid.ntheta = 16\n"
      "scheme.dt = 1e-3\n"
      "nonlinearity.preset = linear\n"
      "nonlinearity.params = 0\n"
      "ic.preset = eigenfunction\n"
      "ic.params = 2,1\n"  // second angular mode: no single reflection axis
      "time.t_end = 0.02\n"
      "time.snapshot_every = 0.01\n"
      "output.dir = " + dir + "\n",
      dir);
  const RunSummary su = run_scenario(cfg);

  CHECK_FALSE(su.aborted);
  CHECK(su.analysis.axis.kind == AxisResult::Kind::none);
  CHECK_FALSE(su.analysis.axis.diagnostics.empty());
  CHECK_FALSE(su.u1_holds);  // symmetric at e_start, not strictly dominant

  // The sweep still runs from the (symmetric, hence member) start direction
  // and terminates immediately: both extremes stay at the start.
  REQUIRE(su.analysis.sweep_ran);
  CHECK(su.analysis.sweep.theta1 == 0.0);
  CHECK(su.analysis.sweep.theta2 == 0.0);
  CHECK(su.analysis.sweep.boundary_symmetric);

  const auto rows = read_csv(fs::path(dir) / "metrics.csv");
  REQUIRE(rows.size() == 4);
  for (size_t k = 1; k < rows.size(); ++k) {
    CHECK(rows[k][2] == "0");
    CHECK(rows[k][3] == "4");            // four isolated symmetric directions
    CHECK(std::stod(rows[k][4]) == doctest::Approx(180.0 / 16.0));
    CHECK(rows[k][5] == "nan");          // no axis: angle columns are nan
    CHECK(rows[k][6] == "nan");
    CHECK(rows[k][7] == "nan");
    CHECK(std::stod(rows[k][8]) >= 0.0);  // omega distance stays finite
  }
  const std::string summary = slurp(fs::path(dir) / "summary.txt");
  CHECK(summary.find("none") != std::string::npos);
}

TEST_CASE("guard aborts keep the offending state as a final snapshot") {
  const std::string dir = "/tmp/rotasym_pl_abort_guard";
  ScenarioConfig cfg = fresh(
      "grid.nr = 8\n"
      "grid.ntheta = 16\n"
      "scheme.dt = 1e-3\n"
      "scheme.blowup_guard = 100\n"
      "nonlinearity.preset = linear\n"
      "nonlinearity.params = 40\n"  // growth rate far above lambda_1
      "ic.preset = eigenfunction\n"
      "ic.params = 1,1\n"
      "time.t_end = 1.0\n"
      "time.snapshot_every = 0.5\n"
      "output.dir = " + dir + "\n",
      dir);
  const RunSummary su = run_scenario(cfg);

  CHECK(su.aborted);
  CHECK(su.abort_reason.find("guard") != std::string::npos);
  CHECK(su.abort_time > 0.0);
  CHECK(su.abort_time < 0.5);  // well before the first scheduled snapshot
  CHECK(su.max_sup >= 100.0);

  // The t = 0 state plus the aborting state: enough for an omega estimate.
  CHECK(su.omega_ok);
  REQUIRE(su.omega.size() == 2);
  CHECK(su.omega.representatives.size() == 2);
  // Linear growth keeps the mode shape: the axis stays certified.
  CHECK(su.analysis.axis.kind == AxisResult::Kind::axis);

  std::vector<std::string> advertised = su.artifacts;
  std::sort(advertised.begin(), advertised.end());
  CHECK(tree(dir) == advertised);
  const auto rows = read_csv(fs::path(dir) / "metrics.csv");
  REQUIRE(rows.size() == 3);
  CHECK(std::stod(rows[2][1]) > 100.0);

  const std::string summary = slurp(fs::path(dir) / "summary.txt");
  CHECK(summary.find("abort") != std::string::npos);
  CHECK(summary.find("exceeded") != std::string::npos);
  CHECK(summary == summary_text(su, cfg));
}

TEST_CASE("non-finite aborts fall back to analyzing the initial state") {
  const std::string dir = "/tmp/rotasym_pl_abort_nan";
  ScenarioConfig cfg = fresh(
      "grid.nr = 8\n"
      "grid.ntheta = 16\n"
      "scheme.dt = 1e-3\n"
      "scheme.blowup_guard = 1e300\n"  // never trips: overflow hits first
      "nonlinearity.preset = cubic\n"
      "nonlinearity.params = 0, -10\n"  // feedback term +10 u^3
      "ic.preset = eigenfunction\n"
      "ic.params = 1,1,20\n"  // large enough that feedback beats diffusion
      "time.t_end = 1.0\n"
      "time.snapshot_every = 0.5\n"
      "output.dir = " + dir + "\n",
      dir);
  const RunSummary su = run_scenario(cfg);

  CHECK(su.aborted);
  CHECK_FALSE(su.abort_reason.empty());
  CHECK(su.abort_time < 0.5);

  // Only the t = 0 snapshot survives: no omega estimate, analysis on u0.
  CHECK_FALSE(su.omega_ok);
  CHECK(su.omega.representatives.empty());
  CHECK(su.analysis.axis.kind == AxisResult::Kind::axis);

  std::vector<std::string> advertised = su.artifacts;
  std::sort(advertised.begin(), advertised.end());
  CHECK(tree(dir) == advertised);
  const auto rows = read_csv(fs::path(dir) / "metrics.csv");
  REQUIRE(rows.size() == 2);
  CHECK(rows[1][8] == "nan");  // dist_to_omega without an estimate

  const std::string summary = slurp(fs::path(dir) / "summary.txt");
  CHECK(summary.find("abort") != std::string::npos);
  CHECK(summary == summary_text(su, cfg));
}

TEST_CASE("render_pgm rasters are structured, masked, and symmetric") {
  const GridPtr g = build_grid(RadialDomain::disk(1.0), 8, 16);
  const Field u = eigenpair_oracle(g, 1, 1).field;
  const int size = 64;
  const std::string pgm = render_pgm(u, size);

  // Header: magic, comments, dimensions, maxval.
  std::istringstream is(pgm);
  std::string line;
  REQUIRE(std::getline(is, line));
  CHECK(line == "P2");
  int comments = 0;
  while (std::getline(is, line) && !line.empty() && line[0] == '#') ++comments;
  CHECK(comments >= 3);
  CHECK(pgm.find("# time ") != std::string::npos);
  CHECK(pgm.find("# range min ") != std::string::npos);
  CHECK(pgm.find("# mask: pixels outside the domain are 0") != std::string::npos);
  CHECK(line == std::to_string(size) + " " + std::to_string(size));
  REQUIRE(std::getline(is, line));
  CHECK(line == "255");

  std::vector<int> px;
  int v;
  while (is >> v) px.push_back(v);
  REQUIRE(static_cast<int>(px.size()) == size * size);
  CHECK(*std::max_element(px.begin(), px.end()) <= 255);
  CHECK(*std::min_element(px.begin(), px.end()) >= 0);

  auto inside = [&](int ix, int iy) {
    const double x = -1.0 + (ix + 0.5) * 2.0 / size;
    const double y = 1.0 - (iy + 0.5) * 2.0 / size;
    return std::hypot(x, y) <= 1.0;
  };
  // Corners sit outside the disk.
  CHECK(px[0] == 0);
  CHECK(px[size - 1] == 0);
  CHECK(px[size * size - 1] == 0);

  // The odd mode renders antisymmetrically across the vertical midline.
  int worst = 0;
  for (int iy = 0; iy < size; ++iy)
    for (int ix = 0; ix < size; ++ix) {
      if (!inside(ix, iy)) {
        CHECK(px[iy * size + ix] == 0);
        continue;
      }
      const int mirror = px[iy * size + (size - 1 - ix)];
      worst = std::max(worst, std::abs(px[iy * size + ix] + mirror - 255));
    }
  CHECK(worst <= 1);
}

TEST_CASE("render_pgm degenerate range and annulus mask") {
  const GridPtr g = build_grid(RadialDomain::disk(1.0), 4, 8);
  Field c(g);
  c.values.assign(c.values.size(), 3.25);
  const std::string pgm = render_pgm(c, 32);
  CHECK(pgm.find("degenerate range") != std::string::npos);
  std::istringstream rest(pgm.substr(pgm.find("\n255\n") + 5));
  std::vector<int> px;
  int v;
  while (rest >> v) px.push_back(v);
  REQUIRE(px.size() == 32u * 32u);
  for (int p : px) CHECK((p == 0 || p == 127));
  CHECK(px[16 * 32 + 16] == 127);  // center of the disk

  const GridPtr ann = build_grid(RadialDomain::annulus(0.5, 1.0), 4, 8);
  Field a(ann);
  a.values.assign(a.values.size(), 1.0);
  const std::string apgm = render_pgm(a, 32);
  std::istringstream arest(apgm.substr(apgm.find("\n255\n") + 5));
  px.clear();
  while (arest >> v) px.push_back(v);
  REQUIRE(px.size() == 32u * 32u);
  CHECK(px[16 * 32 + 16] == 0);  // the hole renders as background
  CHECK(px[16 * 32 + 4] == 127);  // mid-annulus, r ~ 0.72

  // File variant writes the identical bytes.
  const std::string path = "/tmp/rotasym_pl_render.pgm";
  render_pgm_file(path, a, 32);
  CHECK(slurp(path) == apgm);
  fs::remove(path);
}

TEST_CASE("command line interface round trip") {
  if (!fs::exists("rotasym")) {
    MESSAGE("rotasym binary not in the working directory; skipping CLI checks");
    return;
  }
  const std::string dir = "/tmp/rotasym_cli_run";
  fs::remove_all(dir);
  const std::string cfg_path = "/tmp/rotasym_cli.cfg";
  {
    std::ofstream os(cfg_path);
    os << heat_config(dir) << "analysis.e_start = 0\n";
  }

  CHECK(run_cmd("./rotasym run " + cfg_path + " > /dev/null") == 0);
  CHECK(fs::exists(fs::path(dir) / "summary.txt"));
  CHECK(run_cmd("./rotasym run " + cfg_path + " --expect-fss > /dev/null") == 0);

  // Environment override redirects every artifact.
  const std::string env_dir = "/tmp/rotasym_cli_env";
  fs::remove_all(env_dir);
  CHECK(run_cmd("ROTASYM_OUT=" + env_dir + " ./rotasym run " + cfg_path +
                " > /dev/null") == 0);
  CHECK(fs::exists(fs::path(env_dir) / "summary.txt"));

  // Re-analysis of the emitted representatives agrees with the run.
  CHECK(run_cmd("./rotasym analyze " + dir + "/rep_*.txt --e-start 0 "
                "> /tmp/rotasym_cli_an.txt") == 0);
  const std::string an = slurp("/tmp/rotasym_cli_an.txt");
  CHECK(an.find("axis") != std::string::npos);

  // Render to a file.
  CHECK(run_cmd("./rotasym render " + dir + "/final.txt --out "
                "/tmp/rotasym_cli.pgm --size 32 > /dev/null") == 0);
  CHECK(slurp("/tmp/rotasym_cli.pgm").rfind("P2\n", 0) == 0);

  // Exit codes: validation, abort, uncertified.
  CHECK(run_cmd("./rotasym analyze /tmp/rotasym_no_such_field.txt "
                "2> /dev/null") == 1);
  {
    std::ofstream os("/tmp/rotasym_cli_bad.cfg");
    os << "grid.ntheta = 15\n";
  }
  CHECK(run_cmd("./rotasym run /tmp/rotasym_cli_bad.cfg 2> /dev/null") == 1);
  {
    std::ofstream os("/tmp/rotasym_cli_blow.cfg");
    os << "grid.nr = 8\ngrid.ntheta = 16\nscheme.dt = 1e-3\n"
          "scheme.blowup_guard = 100\nnonlinearity.preset = linear\n"
          "nonlinearity.params = 40\nic.preset = eigenfunction\n"
          "ic.params = 1,1\ntime.t_end = 1.0\ntime.snapshot_every = 0.5\n"
          "output.dir = /tmp/rotasym_cli_blow_out\n";
  }
  CHECK(run_cmd("./rotasym run /tmp/rotasym_cli_blow.cfg > /dev/null "
                "2> /dev/null") == 2);
  {
    std::ofstream os("/tmp/rotasym_cli_none.cfg");
    os << "grid.nr = 8\ngrid.ntheta = 16\nscheme.dt = 1e-3\n"
          "nonlinearity.preset = linear\nnonlinearity.params = 0\n"
          "ic.preset = eigenfunction\nic.params = 2,1\ntime.t_end = 0.02\n"
          "time.snapshot_every = 0.01\noutput.dir = /tmp/rotasym_cli_none_out\n";
  }
  CHECK(run_cmd("./rotasym run /tmp/rotasym_cli_none.cfg --expect-fss "
                "> /dev/null 2> /dev/null") == 3);
}
