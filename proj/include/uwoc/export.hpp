#pragma once

// Result files: per-step time series (CSV), run metrics (JSON) and the
// log10 bit-rate contour over (horizontal offset, depth).

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "uwoc/config.hpp"
#include "uwoc/sim.hpp"

namespace uwoc::io {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Column order of the time-series CSV.
const std::vector<std::string>& timeseries_columns();

void write_timeseries(std::ostream& out, const sim::RunRecord& record);
void export_timeseries(const sim::RunRecord& record, const std::string& path);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(const std::string& bytes);

/// Metrics of one run, with the serialized config and its hash so the run can
/// be reproduced from the file alone.
nlohmann::json metrics_json(const config::RunConfig& config,
                            const sim::RunRecord& record);

/// {"runs": [...]} with one entry per run.
void export_metrics(const std::vector<nlohmann::json>& runs,
                    const std::string& path);

struct ContourGrid {
  std::vector<double> offsets;  // m, columns
  std::vector<double> depths;   // m, rows
  /// values[i][j]: log10 bit rate at depths[i], offsets[j]; -inf outside the
  /// field of view, nan at the receiver itself.
  std::vector<std::vector<double>> values;
};

ContourGrid contour_grid(const sim::CommTarget& target,
                         const config::ContourSpec& spec);

/// Two header rows (quantity and target, then offsets), then one row per
/// depth starting with the depth.
void write_contour(std::ostream& out, const ContourGrid& grid,
                   const sim::CommTarget& target);
void export_contour(const ContourGrid& grid, const sim::CommTarget& target,
                    const std::string& path);

}  // namespace uwoc::io
