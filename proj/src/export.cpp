#include "uwoc/export.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

namespace uwoc::io {

namespace {

void append(std::string& line, double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  line += buf;
}

std::ofstream open_for_write(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  return out;
}

void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw IoError("write to '" + path + "' failed");
}

nlohmann::json optional_time(const std::optional<double>& t) {
  if (!t) return nullptr;
  if (std::isinf(*t)) return "never";
  return *t;
}

double log10_rate(double rate) {
  if (rate == 0.0) return -std::numeric_limits<double>::infinity();
  return std::log10(rate);
}

}  // namespace

const std::vector<std::string>& timeseries_columns() {
  static const std::vector<std::string> cols = {
      "t",     "x",     "y",       "rho",     "u",       "v",
      "r",     "x_ref", "y_ref",   "rho_ref", "tau1",    "tau2",
      "tau3",  "d",     "psi",     "log10_bitrate", "inside_cone",
      "lyapunov_v"};
  return cols;
}

void write_timeseries(std::ostream& out, const sim::RunRecord& record) {
  std::string line;
  const auto& cols = timeseries_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (i) line += ',';
    line += cols[i];
  }
  line += '\n';
  out << line;

  for (const sim::RunRow& row : record.rows) {
    line.clear();
    const double values[] = {
        row.t,          row.state.eta[0], row.state.eta[1], row.state.eta[2],
        row.state.nu[0], row.state.nu[1], row.state.nu[2],  row.eta_ref[0],
        row.eta_ref[1], row.eta_ref[2],   row.tau.tau[0],   row.tau.tau[1],
        row.tau.tau[2], row.distance,     row.incidence_angle,
        log10_rate(row.bit_rate)};
    for (double v : values) {
      append(line, v);
      line += ',';
    }
    line += row.inside_cone ? '1' : '0';
    line += ',';
    append(line, row.lyapunov);
    line += '\n';
    out << line;
  }
}

void export_timeseries(const sim::RunRecord& record, const std::string& path) {
  std::ofstream out = open_for_write(path);
  write_timeseries(out, record);
  finish(out, path);
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

nlohmann::json metrics_json(const config::RunConfig& config,
                            const sim::RunRecord& record) {
  const std::string text = config::serialize(config);
  char hash[20];
  std::snprintf(hash, sizeof(hash), "%016llx",
                static_cast<unsigned long long>(fnv1a(text)));

  const sim::RunMetrics& m = record.metrics;
  nlohmann::json j;
  j["name"] = config.scenario.name;
  j["controller"] = sim::to_string(config.scenario.controller.kind);
  j["config_hash"] = std::string("fnv1a64:") + hash;
  j["config"] = text;
  if (config.scenario.noise) {
    j["seed"] = config.scenario.noise->seed;
  } else {
    j["seed"] = nullptr;
  }
  j["steps"] = record.rows.empty() ? 0 : record.rows.size() - 1;
  j["slant_height"] = record.slant_height;
  j["arrival_time"] = optional_time(m.arrival_time);
  j["established_time"] = optional_time(m.established_time);
  j["restoring_time"] = optional_time(m.restoring_time);
  if (m.rmse_window) {
    j["rmse_window"] = {m.rmse_window->first, m.rmse_window->second};
    j["rmse"] = {{"x", *m.rmse_x}, {"y", *m.rmse_y}, {"rho", *m.rmse_rho}};
  } else {
    j["rmse_window"] = nullptr;
    j["rmse"] = nullptr;
  }
  if (config.scenario.disturbance) {
    j["max_distance_after_disturbance"] =
        sim::max_distance(record.rows, config.scenario.disturbance->start);
  }
  return j;
}

void export_metrics(const std::vector<nlohmann::json>& runs,
                    const std::string& path) {
  nlohmann::json doc;
  doc["runs"] = runs;
  std::ofstream out = open_for_write(path);
  out << doc.dump(2) << '\n';
  finish(out, path);
}

ContourGrid contour_grid(const sim::CommTarget& target,
                         const config::ContourSpec& spec) {
  ContourGrid g;
  g.offsets = config::grid_axis(spec.offset_min, spec.offset_max, spec.step);
  g.depths = config::grid_axis(spec.depth_min, spec.depth_max, spec.step);
  g.values.assign(g.depths.size(), std::vector<double>(g.offsets.size()));
  for (std::size_t i = 0; i < g.depths.size(); ++i) {
    const double depth = g.depths[i];
    for (std::size_t j = 0; j < g.offsets.size(); ++j) {
      const double offset = g.offsets[j];
      const double d = std::hypot(offset, depth);
      if (d == 0.0) {
        g.values[i][j] = std::numeric_limits<double>::quiet_NaN();
        continue;
      }
      const double psi = std::atan2(std::abs(offset), depth);
      g.values[i][j] = log10_rate(
          optics::bit_rate(target.link, {d, psi, depth}, target.target_ber));
    }
  }
  return g;
}

void write_contour(std::ostream& out, const ContourGrid& grid,
                   const sim::CommTarget& target) {
  std::string line = "quantity,log10_bitrate,target_ber,";
  append(line, target.target_ber);
  line += ",solar_model," + optics::to_string(target.link.solar_model) + '\n';
  line += "depth\\offset";
  for (double o : grid.offsets) {
    line += ',';
    append(line, o);
  }
  line += '\n';
  out << line;
  for (std::size_t i = 0; i < grid.depths.size(); ++i) {
    line.clear();
    append(line, grid.depths[i]);
    for (double v : grid.values[i]) {
      line += ',';
      append(line, v);
    }
    line += '\n';
    out << line;
  }
}

void export_contour(const ContourGrid& grid, const sim::CommTarget& target,
                    const std::string& path) {
  std::ofstream out = open_for_write(path);
  write_contour(out, grid, target);
  finish(out, path);
}

}  // namespace uwoc::io
