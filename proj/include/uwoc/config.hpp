#pragma once

// Run configuration: a strict key-value tree.
//
//   # comment
//   preset = "case1"            # optional base, applied before other keys
//   controller.type = "nlpd"
//   [optics.receiver]           # section prefix for the keys that follow
//   area = 1e-4
//   fov_half_angle_deg = 30     # *_deg aliases for angles stored in radians
//   [disturbance]
//   wrench = [350, 350, 350]
//
// Values are numbers, double-quoted strings, true/false, or flat numeric
// arrays. Unknown and duplicate keys are rejected.

#include <stdexcept>
#include <string>
#include <vector>

#include "uwoc/sim.hpp"

namespace uwoc::config {

/// Malformed text: carries the offending line number or key.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Well-formed text describing an invalid configuration.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Rectangular (horizontal offset, depth) grid for the bit-rate contour.
struct ContourSpec {
  double offset_min = -5.0;  // m
  double offset_max = 5.0;   // m
  double depth_min = 0.0;    // m
  double depth_max = 8.0;    // m
  double step = 0.05;        // m

  bool operator==(const ContourSpec&) const = default;
};

/// Output file paths; empty means "do not write".
struct OutputSpec {
  std::string timeseries;
  std::string metrics;
  std::string contour;

  bool operator==(const OutputSpec&) const = default;
};

struct RunConfig {
  sim::Scenario scenario;
  sim::CommTarget target;
  OutputSpec output;
  ContourSpec contour;

  bool operator==(const RunConfig&) const = default;
};

std::vector<std::string> preset_names();

/// nominal, case1 (pulse + measurement noise) or case2 (case1 + 20 % mass).
RunConfig preset(const std::string& name);

/// Parses `text` on top of `base`. A `preset` key replaces the base first.
RunConfig parse_config(const std::string& text, const RunConfig& base = {});

/// Every field, angles in radians, numbers with 17 significant digits.
std::string serialize(const RunConfig& config);

/// Throws ValidationError naming the violated invariant.
void validate(const RunConfig& config);

/// Grid coordinates from min to max inclusive.
std::vector<double> grid_axis(double min, double max, double step);

}  // namespace uwoc::config
