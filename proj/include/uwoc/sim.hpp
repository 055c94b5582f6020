#pragma once

// Closed-loop tracking scenario: the AUV transmitter follows the ship
// receiver while the optical link and cone membership are logged each step.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "uwoc/cone.hpp"
#include "uwoc/control.hpp"
#include "uwoc/optics.hpp"
#include "uwoc/rng.hpp"
#include "uwoc/vehicle.hpp"

namespace uwoc::sim {

using vehicle::Vec3;

class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(double t, const std::string& what);
  double time() const { return time_; }

 private:
  double time_;
};

enum class ControllerKind { kPd, kNlpd, kNone };

std::string to_string(ControllerKind kind);
ControllerKind controller_kind_from_string(const std::string& name);

struct ControllerConfig {
  ControllerKind kind = ControllerKind::kPd;
  double kp = 300.0;
  double kv = 250.0;
  control::GainSchedule nlpd = control::GainSchedule::nlpd_default();

  bool operator==(const ControllerConfig&) const = default;

  /// The schedule the controller evaluates (constant gains for PD).
  control::GainSchedule schedule() const;
};

struct DisturbanceSpec {
  double start = 30.0;    // s
  double duration = 1.0;  // s
  vehicle::Wrench wrench{Vec3(350.0, 350.0, 350.0)};

  bool operator==(const DisturbanceSpec&) const = default;
};

struct NoiseSpec {
  double sigma_pos = 0.02;   // m, on x and y
  double sigma_yaw = 0.005;  // rad, on rho
  double sigma_vel = 0.02;   // on u, v [m/s] and r [rad/s]
  std::uint64_t seed = 1;

  bool operator==(const NoiseSpec&) const = default;
};

struct Scenario {
  std::string name = "nominal";
  double duration = 150.0;  // s
  double dt = 0.005;        // s
  Vec3 initial_eta = Vec3(5.0, 5.0, 0.0);
  double depth = 3.8157;    // m, constant transmitter depth
  ControllerConfig controller;
  std::optional<DisturbanceSpec> disturbance;
  std::optional<NoiseSpec> noise;
  double mass_scale = 1.0;  // plant only; the controller keeps nominal masses
  vehicle::AuvParams vehicle;
  control::ShipTrajectory ship;
  /// RMSE window; unset means [t_b, duration].
  std::optional<std::pair<double, double>> rmse_window;

  bool operator==(const Scenario&) const = default;

  std::int64_t step_count() const;
};

void validate(const Scenario& scenario);

/// Link model plus the rate requirement that defines the cone.
struct CommTarget {
  optics::OpticalLink link;
  double target_ber = 1e-4;
  double min_bit_rate = 1e7;  // bit/s

  bool operator==(const CommTarget&) const = default;
};

struct RunRow {
  double t = 0.0;
  vehicle::AuvState state;
  Vec3 eta_ref = Vec3::Zero();
  vehicle::Wrench tau;
  double distance = 0.0;
  double incidence_angle = 0.0;
  double bit_rate = 0.0;
  bool inside_cone = false;
  double lyapunov = 0.0;
};

struct RunMetrics {
  std::optional<double> arrival_time;      // t_a
  std::optional<double> established_time;  // t_b
  /// Delta t; unset without a post-disturbance exit, +inf if never restored.
  std::optional<double> restoring_time;
  std::optional<std::pair<double, double>> rmse_window;
  std::optional<double> rmse_x;
  std::optional<double> rmse_y;
  std::optional<double> rmse_rho;

  bool established() const { return established_time.has_value(); }
  bool operator==(const RunMetrics&) const = default;
};

struct RunRecord {
  std::vector<RunRow> rows;
  RunMetrics metrics;
  double slant_height = 0.0;  // d_C used for containment
};

enum class Component { kX, kY, kRho };

/// Full closed-loop simulation. Throws DivergenceError with the failing time.
RunRecord run(const Scenario& scenario, const CommTarget& target);

/// Wrench active on [start, start + duration), zero elsewhere.
vehicle::Wrench disturbance_wrench(double t,
                                   const std::optional<DisturbanceSpec>& spec);

struct Perturbation {
  Vec3 eta = Vec3::Zero();
  Vec3 nu = Vec3::Zero();
};

/// Draws x, y, rho, u, v, r in that order.
Perturbation measurement_noise(Xoshiro256& rng, const NoiseSpec& spec);

std::optional<double> cone_arrival_time(std::span<const RunRow> rows);

/// Earliest time after which the AUV stays inside. With a disturbance onset
/// given, excursions starting at or after the onset are ignored.
std::optional<double> communication_established_time(
    std::span<const RunRow> rows,
    std::optional<double> disturbance_start = std::nullopt);

/// Time from the first cone exit at or after `disturbance_start` to the
/// moment the AUV re-enters for good.
std::optional<double> restoring_time(std::span<const RunRow> rows,
                                     double disturbance_start);

double rmse(std::span<const RunRow> rows, Component component,
            std::pair<double, double> window);

RunMetrics compute_metrics(std::span<const RunRow> rows,
                           const Scenario& scenario);

/// Largest transmitter-receiver distance over rows with t >= t_from.
double max_distance(std::span<const RunRow> rows, double t_from);

}  // namespace uwoc::sim
