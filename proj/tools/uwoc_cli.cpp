// uwoc: run tracking scenarios, solve the communication cone, export the
// bit-rate contour and compare runs.
//
// Exit codes: 0 success, 1 invalid input or I/O failure, 2 divergence.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "uwoc/cone.hpp"
#include "uwoc/config.hpp"
#include "uwoc/export.hpp"
#include "uwoc/sim.hpp"

namespace {

using uwoc::config::RunConfig;

constexpr int kExitInvalid = 1;
constexpr int kExitDivergence = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw uwoc::io::IoError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool is_preset(const std::string& name) {
  for (const auto& p : uwoc::config::preset_names()) {
    if (p == name) return true;
  }
  return false;
}

RunConfig load(const std::string& source, const std::vector<std::string>& sets) {
  RunConfig cfg;
  if (source.empty()) {
    cfg = uwoc::config::preset("nominal");
  } else if (is_preset(source)) {
    cfg = uwoc::config::preset(source);
  } else {
    cfg = uwoc::config::parse_config(read_file(source));
  }
  if (!sets.empty()) {
    std::string overlay;
    for (const auto& s : sets) overlay += s + "\n";
    cfg = uwoc::config::parse_config(overlay, cfg);
  }
  return cfg;
}

std::string fmt_time(const std::optional<double>& t) {
  if (!t) return "n/a";
  if (std::isinf(*t)) return "never";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f s", *t);
  return buf;
}

void print_metrics(const RunConfig& cfg, const uwoc::sim::RunRecord& rec) {
  const auto& m = rec.metrics;
  std::printf("scenario        %s (%s)\n", cfg.scenario.name.c_str(),
              uwoc::sim::to_string(cfg.scenario.controller.kind).c_str());
  std::printf("cone slant      %.6f m\n", rec.slant_height);
  std::printf("arrival t_a     %s\n", fmt_time(m.arrival_time).c_str());
  std::printf("established t_b %s\n", fmt_time(m.established_time).c_str());
  if (cfg.scenario.disturbance) {
    std::printf("restoring dt    %s\n", fmt_time(m.restoring_time).c_str());
    std::printf("max d after disturbance %.6f m\n",
                uwoc::sim::max_distance(rec.rows, cfg.scenario.disturbance->start));
  }
  if (m.rmse_window) {
    std::printf("rmse window     [%.3f, %.3f] s\n", m.rmse_window->first,
                m.rmse_window->second);
    std::printf("rmse x y rho    %.6f %.6f %.6f\n", *m.rmse_x, *m.rmse_y,
                *m.rmse_rho);
  }
}

int cmd_run(const std::string& source, const std::vector<std::string>& sets,
            const std::string& controller, const std::string& csv,
            const std::string& metrics) {
  RunConfig cfg = load(source, sets);
  if (!controller.empty()) {
    cfg.scenario.controller.kind =
        uwoc::sim::controller_kind_from_string(controller);
  }
  if (!csv.empty()) cfg.output.timeseries = csv;
  if (!metrics.empty()) cfg.output.metrics = metrics;

  uwoc::sim::RunRecord rec;
  try {
    rec = uwoc::sim::run(cfg.scenario, cfg.target);
  } catch (const uwoc::sim::DivergenceError& e) {
    std::fprintf(stderr, "divergence: %s\n", e.what());
    return kExitDivergence;
  }
  print_metrics(cfg, rec);
  if (!cfg.output.timeseries.empty()) {
    uwoc::io::export_timeseries(rec, cfg.output.timeseries);
  }
  if (!cfg.output.metrics.empty()) {
    uwoc::io::export_metrics({uwoc::io::metrics_json(cfg, rec)},
                             cfg.output.metrics);
  }
  return 0;
}

int cmd_cone(const std::string& source, const std::vector<std::string>& sets) {
  const RunConfig cfg = load(source, sets);
  const double d = uwoc::cone::solve_slant_height(
      cfg.target.link, cfg.target.target_ber, cfg.target.min_bit_rate);
  const double psi = cfg.target.link.rx.fov_half_angle;
  std::printf("slant_height %.9f m\n", d);
  std::printf("height       %.9f m\n", d * std::cos(psi));
  std::printf("radius       %.9f m\n", d * std::sin(psi));
  return 0;
}

int cmd_contour(const std::string& source, const std::vector<std::string>& sets,
                const std::string& path) {
  RunConfig cfg = load(source, sets);
  if (!path.empty()) cfg.output.contour = path;
  const auto grid = uwoc::io::contour_grid(cfg.target, cfg.contour);
  if (cfg.output.contour.empty()) {
    uwoc::io::write_contour(std::cout, grid, cfg.target);
  } else {
    uwoc::io::export_contour(grid, cfg.target, cfg.output.contour);
    std::printf("wrote %zu x %zu grid to %s\n", grid.depths.size(),
                grid.offsets.size(), cfg.output.contour.c_str());
  }
  return 0;
}

nlohmann::json first_run(const std::string& path) {
  const nlohmann::json doc = nlohmann::json::parse(read_file(path));
  if (!doc.contains("runs") || doc["runs"].empty()) {
    throw uwoc::io::IoError("'" + path + "' has no runs");
  }
  return doc["runs"][0];
}

int cmd_compare(const std::string& a_path, const std::string& b_path) {
  const nlohmann::json a = first_run(a_path);
  const nlohmann::json b = first_run(b_path);
  if (a["rmse"].is_null() || b["rmse"].is_null()) {
    throw uwoc::io::IoError("both runs need RMSE values");
  }
  std::printf("baseline  %s (%s)\n", a["name"].get<std::string>().c_str(),
              a["controller"].get<std::string>().c_str());
  std::printf("candidate %s (%s)\n", b["name"].get<std::string>().c_str(),
              b["controller"].get<std::string>().c_str());
  std::printf("%-4s %12s %12s %12s\n", "", "baseline", "candidate",
              "improvement");
  for (const char* c : {"x", "y", "rho"}) {
    const double ra = a["rmse"][c].get<double>();
    const double rb = b["rmse"][c].get<double>();
    std::printf("%-4s %12.6f %12.6f %11.2f%%\n", c, ra, rb,
                100.0 * (1.0 - rb / ra));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optical-link-aware AUV tracking simulator"};
  app.require_subcommand(1);

  std::string source;
  std::vector<std::string> sets;
  std::string controller, csv, metrics, contour_out, run_a, run_b;

  auto* run = app.add_subcommand("run", "Simulate a preset or config file");
  run->add_option("source", source, "nominal, case1, case2 or a config path")
      ->required();
  run->add_option("--set", sets, "Override, e.g. --set controller.type=\"nlpd\"");
  run->add_option("--controller", controller, "pd, nlpd or none");
  run->add_option("--csv", csv, "Time-series CSV path");
  run->add_option("--metrics", metrics, "Metrics JSON path");

  auto* cone = app.add_subcommand("cone-solve", "Solve the cone slant height");
  cone->add_option("--config", source, "Preset or config path");
  cone->add_option("--set", sets, "Override a config key");

  auto* contour = app.add_subcommand("contour", "Export the bit-rate contour");
  contour->add_option("--config", source, "Preset or config path");
  contour->add_option("--set", sets, "Override a config key");
  contour->add_option("-o,--output", contour_out, "Output path (stdout if unset)");

  auto* compare = app.add_subcommand("compare", "RMSE improvement of B over A");
  compare->add_option("baseline", run_a, "Metrics JSON of the baseline run")
      ->required();
  compare->add_option("candidate", run_b, "Metrics JSON of the candidate run")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitInvalid;
  }

  try {
    if (*run) return cmd_run(source, sets, controller, csv, metrics);
    if (*cone) return cmd_cone(source, sets);
    if (*contour) return cmd_contour(source, sets, contour_out);
    if (*compare) return cmd_compare(run_a, run_b);
  } catch (const uwoc::sim::DivergenceError& e) {
    std::fprintf(stderr, "divergence: %s\n", e.what());
    return kExitDivergence;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInvalid;
  }
  return 0;
}
