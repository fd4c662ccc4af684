#include "rotasym/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "rotasym/field_io.hpp"
#include "rotasym/render.hpp"

namespace rotasym {

namespace fs = std::filesystem;

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

double deg(double radians) { return radians * (180.0 / kPi); }

// Lattice-pitch measure of an arc: len directions, each one step pi/ntheta;
// the full lattice measures 360 degrees.
double arc_deg(const DirectionArc& a, int ntheta) {
  return a.len * (180.0 / ntheta);
}

std::string zero_pad(int v, int width) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%0*d", width, v);
  return buf;
}

const char* axis_kind_name(AxisResult::Kind k) {
  switch (k) {
    case AxisResult::Kind::axis:
      return "axis";
    case AxisResult::Kind::radial:
      return "radial";
    case AxisResult::Kind::none:
      return "none";
  }
  return "?";
}

}  // namespace

AnalysisReport analyze_fields(const std::vector<Field>& fields, double tol,
                              std::optional<Direction> e_start) {
  AnalysisReport rep;
  rep.tol = tol;
  rep.M = compute_M(fields, tol);
  rep.axis = detect_axis(rep.M, fields, tol);
  if (e_start) {
    try {
      rep.sweep = rotating_plane_sweep(fields, *e_start, tol);
      rep.sweep_ran = true;
    } catch (const std::invalid_argument& e) {
      rep.sweep_note = e.what();
    }
  } else {
    rep.sweep_note = "no start direction supplied";
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Deterministic text renderings

std::string analysis_text(const AnalysisReport& rep) {
  std::ostringstream os;
  const DirectionSet& M = rep.M;
  os << "dominance set:\n";
  os << "  tol " << format_g17(rep.tol) << '\n';
  os << "  lattice directions " << M.lattice_size() << " members " << M.count()
     << " arcs " << M.arcs.size() << '\n';
  os << "  antipode condition: " << (M.condition_33() ? "holds" : "fails")
     << '\n';
  if (const DirectionArc* a = M.largest_arc())
    os << "  largest arc: start " << a->start << " len " << a->len << " ("
       << format_g17(arc_deg(*a, M.ntheta)) << " deg)\n";

  os << "axis:\n";
  os << "  kind " << axis_kind_name(rep.axis.kind) << '\n';
  if (rep.axis.kind == AxisResult::Kind::none) {
    os << "  diagnostics: " << rep.axis.diagnostics << '\n';
  } else {
    os << "  p angle " << format_g17(deg(rep.axis.p->alpha)) << " deg";
    if (rep.axis.kind == AxisResult::Kind::radial)
      os << " (radial: any axis works, canonical choice)";
    os << '\n';
    for (size_t i = 0; i < rep.axis.reports.size(); ++i) {
      const FssReport& f = rep.axis.reports[i];
      os << "  field " << i << ": axial_deficit " << format_g17(f.axial_deficit)
         << " mono_deficit " << format_g17(f.mono_deficit) << " fss "
         << (f.fss ? "true" : "false") << '\n';
    }
    os << "  all fss: " << (rep.axis.all_fss() ? "true" : "false") << '\n';
  }

  os << "sweep:\n";
  if (!rep.sweep_ran) {
    os << "  skipped: " << rep.sweep_note << '\n';
  } else {
    const SweepResult& sw = rep.sweep;
    os << "  theta1 " << format_g17(deg(sw.theta1)) << " deg, theta2 "
       << format_g17(deg(sw.theta2)) << " deg, span "
       << format_g17(deg(sw.theta1 - sw.theta2)) << " deg\n";
    os << "  boundary " << format_g17(deg(sw.e_theta1.alpha)) << " deg: "
       << to_string(sw.boundary1.cls) << "; boundary "
       << format_g17(deg(sw.e_theta2.alpha)) << " deg: "
       << to_string(sw.boundary2.cls) << '\n';
    os << "  boundary symmetric: " << (sw.boundary_symmetric ? "true" : "false")
       << '\n';
    os << "  full rotation: " << (sw.full_rotation ? "true" : "false") << '\n';
  }
  return os.str();
}

std::string summary_text(const RunSummary& s, const ScenarioConfig& cfg) {
  std::ostringstream os;
  os << "rotasym run summary\n";
  os << "scenario:\n";
  os << "  domain " << (cfg.domain.kind == DomainKind::disk ? "disk" : "annulus")
     << " r_inner " << format_g17(cfg.domain.r_inner) << " r_outer "
     << format_g17(cfg.domain.r_outer) << '\n';
  os << "  grid nr " << cfg.nr << " ntheta " << cfg.ntheta << '\n';
  os << "  scheme "
     << (cfg.scheme.kind == Scheme::Kind::imex_fourier ? "imex_fourier"
                                                       : "backward_euler")
     << " dt " << format_g17(cfg.scheme.dt) << " reaction_order "
     << cfg.scheme.reaction_order << '\n';
  os << "  nonlinearity " << cfg.nonlinearity_preset << " params";
  for (double p : cfg.nonlinearity_params) os << ' ' << format_g17(p);
  if (cfg.nonlinearity_params.empty()) os << " (defaults)";
  os << '\n';
  os << "  ic " << cfg.ic_preset << " params";
  for (double p : cfg.ic_params) os << ' ' << format_g17(p);
  if (cfg.ic_params.empty()) os << " (defaults)";
  os << '\n';
  os << "  time t_end " << format_g17(cfg.t_end) << " snapshot_every "
     << format_g17(cfg.snapshot_every) << '\n';
  os << "  analysis tol " << format_g17(cfg.tol) << " window_fraction "
     << format_g17(cfg.window_fraction) << " e_start "
     << format_g17(cfg.e_start_angle) << " rad\n";

  os << "run:\n";
  if (s.aborted)
    os << "  status aborted: " << s.abort_reason << " at t "
       << format_g17(s.abort_time) << '\n';
  else
    os << "  status completed\n";
  os << "  steps " << s.steps << " dt_eff " << format_g17(s.dt_eff) << '\n';
  os << "  initial dominance at e_start: " << (s.u1_holds ? "true" : "false")
     << '\n';
  os << "  max sup-norm " << format_g17(s.max_sup) << " (blow-up guard "
     << format_g17(cfg.blowup_guard) << ": "
     << (s.max_sup <= cfg.blowup_guard ? "ok" : "exceeded") << ")\n";

  os << "omega:\n";
  if (!s.omega_ok) {
    os << "  unavailable (fewer than 2 snapshots)\n";
  } else {
    os << "  window [" << format_g17(s.omega.t_lo) << ", "
       << format_g17(s.omega.t_hi) << "] snapshots " << s.omega.size()
       << " representatives " << s.omega.representatives.size() << " diameter "
       << format_g17(s.omega.diameter) << '\n';
  }

  os << analysis_text(s.analysis);

  os << "artifacts:\n";
  for (const std::string& a : s.artifacts) os << "  " << a << '\n';
  return os.str();
}

// ---------------------------------------------------------------------------
// Scenario runner

RunSummary run_scenario(const ScenarioConfig& cfg) {
  using clock = std::chrono::steady_clock;
  const auto t_begin = clock::now();
  auto ms_since = [](clock::time_point a, clock::time_point b) {
    return std::chrono::duration_cast<std::chrono::milliseconds>(b - a).count();
  };

  const GridPtr grid = cfg.make_grid();
  const Nonlinearity f = cfg.make_nonlinearity();
  const Field u0 = cfg.initial_condition(grid);
  const Direction e_start = cfg.e_start();

  RunSummary su;
  su.u1_holds = check_U1(u0, e_start, cfg.tol);

  Trajectory traj = integrate(u0, f, cfg.scheme, cfg.t_end, cfg.snapshot_every,
                              cfg.blowup_guard);
  const auto t_integrated = clock::now();

  su.aborted = traj.aborted;
  su.abort_reason = traj.abort_reason;
  su.abort_time = traj.abort_time;
  su.max_sup = traj.max_sup;
  su.steps = static_cast<long>(traj.times.size()) - 1;
  su.dt_eff = traj.dt_eff;

  std::vector<Field> analysis_fields;
  if (traj.snapshots.size() >= 2) {
    su.omega = collect_omega(traj, cfg.window_fraction, cfg.tol);
    su.omega_ok = true;
    analysis_fields = su.omega.representatives;
  } else {
    analysis_fields = {traj.snapshots.front()};
  }
  su.analysis = analyze_fields(analysis_fields, cfg.tol, e_start);
  const auto t_analyzed = clock::now();

  // ---- artifacts ----------------------------------------------------------
  const fs::path out(cfg.out_dir);
  fs::create_directories(out);

  {
    std::ofstream csv(out / "metrics.csv");
    if (!csv)
      throw std::runtime_error("cannot open for writing: " +
                               (out / "metrics.csv").string());
    csv << "t,sup_norm,u1_holds,m_arc_count,largest_arc_deg,axis_deg,"
           "axial_deficit,mono_deficit,dist_to_omega\n";
    for (const Field& snap : traj.snapshots) {
      const double sup = sup_norm(snap);
      const bool u1 = check_U1(snap, e_start, cfg.tol);
      const DirectionSet Ms = compute_M({snap}, cfg.tol);
      const DirectionArc* arc = Ms.largest_arc();
      const AxisResult ax = detect_axis(Ms, {snap}, cfg.tol);
      double axis_deg = kNan, axial = kNan, mono = kNan;
      if (ax.kind != AxisResult::Kind::none) {
        axis_deg = deg(ax.p->alpha);
        axial = ax.reports.front().axial_deficit;
        mono = ax.reports.front().mono_deficit;
      }
      const double dist =
          su.omega_ok ? dist_to_estimate(snap, su.omega) : kNan;
      csv << format_g17(snap.time) << ',' << format_g17(sup) << ','
          << (u1 ? 1 : 0) << ',' << Ms.arcs.size() << ','
          << format_g17(arc ? arc_deg(*arc, Ms.ntheta) : 0.0) << ','
          << format_g17(axis_deg) << ',' << format_g17(axial) << ','
          << format_g17(mono) << ',' << format_g17(dist) << '\n';
    }
  }
  su.artifacts.push_back("metrics.csv");

  write_field_file((out / "final.txt").string(), traj.snapshots.back());
  su.artifacts.push_back("final.txt");

  for (size_t i = 0; i < su.omega.representatives.size(); ++i) {
    const std::string name = "rep_" + zero_pad(static_cast<int>(i), 3) + ".txt";
    write_field_file((out / name).string(), su.omega.representatives[i]);
    su.artifacts.push_back(name);
  }

  if (cfg.emit_snapshots) {
    fs::create_directories(out / "snapshots");
    for (size_t i = 0; i < traj.snapshots.size(); ++i) {
      const std::string name =
          "snapshots/snap_" + zero_pad(static_cast<int>(i), 3) + ".txt";
      write_field_file((out / name).string(), traj.snapshots[i]);
      su.artifacts.push_back(name);
    }
  }

  if (cfg.emit_heatmaps) {
    fs::create_directories(out / "heatmaps");
    render_pgm_file((out / "heatmaps/final.pgm").string(), traj.snapshots.back());
    su.artifacts.push_back("heatmaps/final.pgm");
    for (size_t i = 0; i < su.omega.representatives.size(); ++i) {
      const std::string name =
          "heatmaps/rep_" + zero_pad(static_cast<int>(i), 3) + ".pgm";
      render_pgm_file((out / name).string(), su.omega.representatives[i]);
      su.artifacts.push_back(name);
    }
  }

  {
    std::ofstream sum(out / "summary.txt");
    if (!sum)
      throw std::runtime_error("cannot open for writing: " +
                               (out / "summary.txt").string());
    su.artifacts.push_back("summary.txt");
    su.artifacts.push_back("timing.log");
    sum << summary_text(su, cfg);
  }

  {
    // Wall-clock lives here and only here; everything above is deterministic.
    const auto t_done = clock::now();
    std::ofstream log(out / "timing.log");
    log << "integrate_ms " << ms_since(t_begin, t_integrated) << '\n';
    log << "analysis_ms " << ms_since(t_integrated, t_analyzed) << '\n';
    log << "io_ms " << ms_since(t_analyzed, t_done) << '\n';
    log << "total_ms " << ms_since(t_begin, t_done) << '\n';
  }

  return su;
}

}  // namespace rotasym
