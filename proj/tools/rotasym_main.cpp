#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rotasym/config.hpp"
#include "rotasym/field_io.hpp"
#include "rotasym/geometry.hpp"
#include "rotasym/pipeline.hpp"
#include "rotasym/render.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kValidation = 1;
constexpr int kAbort = 2;
constexpr int kNotCertified = 3;

bool certified_fss(const rotasym::AnalysisReport& rep) {
  return rep.axis.kind != rotasym::AxisResult::Kind::none &&
         rep.axis.all_fss();
}

int cmd_run(const std::string& config_path, bool expect_fss) {
  rotasym::ScenarioConfig cfg = rotasym::parse_config_file(config_path);
  if (const char* env = std::getenv("ROTASYM_OUT"); env != nullptr && *env)
    cfg.out_dir = env;
  const rotasym::RunSummary s = rotasym::run_scenario(cfg);
  std::cout << rotasym::summary_text(s, cfg);
  if (s.aborted) return kAbort;
  if (expect_fss && !certified_fss(s.analysis)) return kNotCertified;
  return kOk;
}

int cmd_analyze(const std::vector<std::string>& files, double tol,
                std::optional<double> e_start_angle, bool expect_fss) {
  std::vector<rotasym::Field> fields;
  fields.reserve(files.size());
  for (const std::string& path : files) {
    fields.push_back(rotasym::read_field_file(path));
    if (!rotasym::grids_compatible(*fields.front().grid, *fields.back().grid))
      throw std::invalid_argument("grid mismatch: " + path +
                                  " does not match " + files.front());
  }
  std::optional<rotasym::Direction> e;
  if (e_start_angle) e = rotasym::Direction::from_angle(*e_start_angle);
  const rotasym::AnalysisReport rep = rotasym::analyze_fields(fields, tol, e);
  std::cout << rotasym::analysis_text(rep);
  if (expect_fss && !certified_fss(rep)) return kNotCertified;
  return kOk;
}

int cmd_render(const std::string& field_path, const std::string& out_path,
               int size) {
  const rotasym::Field f = rotasym::read_field_file(field_path);
  if (out_path.empty())
    std::cout << rotasym::render_pgm(f, size);
  else
    rotasym::render_pgm_file(out_path, f, size);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "reaction-diffusion runs on planar radial domains with "
      "rotating-plane symmetry analysis"};
  app.require_subcommand(1);

  std::string config_path;
  bool run_expect_fss = false;
  CLI::App* run =
      app.add_subcommand("run", "execute a scenario config, write artifacts");
  run->add_option("config", config_path, "scenario config file")->required();
  run->add_flag("--expect-fss", run_expect_fss,
                "exit 3 unless every omega representative is certified "
                "foliated Schwarz symmetric");

  std::vector<std::string> files;
  double tol = 1e-3;
  double e_start_angle = 0.0;
  bool analyze_expect_fss = false;
  CLI::App* analyze = app.add_subcommand(
      "analyze", "re-run the symmetry pipeline on stored snapshots");
  analyze->add_option("files", files, "snapshot files on one grid")
      ->required();
  analyze->add_option("--tol", tol, "symmetry tolerance");
  CLI::Option* e_opt = analyze->add_option(
      "--e-start", e_start_angle,
      "sweep start direction, radians on the half-angle lattice");
  analyze->add_flag("--expect-fss", analyze_expect_fss,
                    "exit 3 unless certified");

  std::string field_path;
  std::string out_path;
  int size = 256;
  CLI::App* render = app.add_subcommand(
      "render", "rasterize a snapshot to an ASCII PGM heatmap");
  render->add_option("field", field_path, "snapshot file")->required();
  render->add_option("--out", out_path, "output path (stdout when absent)");
  render->add_option("--size", size, "raster width and height in pixels")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kValidation;
  }

  try {
    if (run->parsed()) return cmd_run(config_path, run_expect_fss);
    if (analyze->parsed())
      return cmd_analyze(files, tol,
                         e_opt->count() > 0
                             ? std::optional<double>(e_start_angle)
                             : std::nullopt,
                         analyze_expect_fss);
    return cmd_render(field_path, out_path, size);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidation;
  }
}
