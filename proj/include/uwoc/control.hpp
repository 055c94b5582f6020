#pragma once

// Model-based PD / nonlinear-PD trajectory tracking in the earth-fixed frame:
//
//   tau = R^T(rho) [ M(eta) eta_ref_ddot + C(nu, eta) eta_ref_dot
//                    + D(nu, eta) eta_ref_dot + Kp(.) e + Kv(.) e_dot ]
//
// with e = eta_ref - eta and e_dot = eta_ref_dot - R(rho) nu. The nonlinear
// gains follow a power law of the error above a breakpoint and saturate below
// it; exponent mu = 1 gives plain PD.

#include <array>
#include <string>

#include "uwoc/vehicle.hpp"

namespace uwoc::control {

using vehicle::Mat3;
using vehicle::Vec3;

enum class GainFamily { kPosition, kVelocity };

/// k(e) = a |e|^(mu-1) for |e| >= b, a b^(mu-1) otherwise.
struct AxisGain {
  double a = 1.0;
  double b = 1.0;
  double mu = 1.0;

  bool operator==(const AxisGain&) const = default;
};

struct AxisSchedule {
  AxisGain position;
  AxisGain velocity;

  bool operator==(const AxisSchedule&) const = default;
};

/// Axis order: x, y, yaw.
struct GainSchedule {
  std::array<AxisSchedule, 3> axes;

  bool operator==(const GainSchedule&) const = default;

  /// mu = 1 everywhere: constant diagonal gains.
  static GainSchedule constant(double kp, double kv);
  /// Default nonlinear tuning.
  static GainSchedule nlpd_default();
};

void validate(const GainSchedule& schedule);

double gain(const AxisGain& g, double error);
double gain(GainFamily family, int axis, double error,
            const GainSchedule& schedule);

/// Closed form of the integral of zeta * k(zeta) from 0 to x.
double potential(const AxisGain& g, double x);

struct ReferenceState {
  Vec3 eta = Vec3::Zero();
  Vec3 eta_dot = Vec3::Zero();
  Vec3 eta_ddot = Vec3::Zero();
};

struct TrackingError {
  Vec3 eta_tilde = Vec3::Zero();  // yaw component wrapped to (-pi, pi]
  Vec3 nu_tilde = Vec3::Zero();   // earth-fixed velocity error
};

TrackingError tracking_error(const vehicle::AuvState& state,
                             const ReferenceState& ref);

vehicle::Wrench nlpd_tau(const vehicle::AuvState& state,
                         const ReferenceState& ref,
                         const vehicle::AuvParams& params,
                         const GainSchedule& schedule);

vehicle::Wrench pd_tau(const vehicle::AuvState& state,
                       const ReferenceState& ref,
                       const vehicle::AuvParams& params, double kp, double kv);

/// Ship moving on a circle around the origin while its heading oscillates:
///   x = R sin(w t), y = R sin(w t + pi/2), rho = A sin(w t).
struct ShipTrajectory {
  double radius = 10.0;        // m
  double angular_rate = 0.1;   // rad/s
  double yaw_amplitude = 1.5707963267948966;  // rad

  bool operator==(const ShipTrajectory&) const = default;

  ReferenceState at(double t) const;
};

ReferenceState ship_reference(double t);

/// 1/2 e_dot^T M(eta) e_dot + sum_j potential_j(e_j).
double lyapunov_value(const TrackingError& error,
                      const vehicle::AuvState& state,
                      const vehicle::AuvParams& params,
                      const GainSchedule& schedule);

}  // namespace uwoc::control
