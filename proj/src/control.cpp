#include "uwoc/control.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace uwoc::control {

GainSchedule GainSchedule::constant(double kp, double kv) {
  GainSchedule s;
  for (auto& axis : s.axes) {
    axis.position = {kp, 1.0, 1.0};
    axis.velocity = {kv, 1.0, 1.0};
  }
  return s;
}

GainSchedule GainSchedule::nlpd_default() {
  GainSchedule s = constant(300.0, 250.0);
  for (int j = 0; j < 2; ++j) {
    s.axes[j].position = {6000.0, 0.1, 0.5};
    s.axes[j].velocity = {250.0, 1.0, 0.5};
  }
  return s;
}

void validate(const GainSchedule& schedule) {
  for (const auto& axis : schedule.axes) {
    for (const AxisGain* g : {&axis.position, &axis.velocity}) {
      if (!(g->a > 0)) throw std::invalid_argument("gain a > 0");
      if (!(g->b > 0)) throw std::invalid_argument("gain b > 0");
      if (!(g->mu >= 0 && g->mu <= 1)) {
        throw std::invalid_argument("gain mu in [0, 1]");
      }
    }
  }
}

double gain(const AxisGain& g, double error) {
  const double magnitude = std::abs(error);
  if (magnitude >= g.b) return g.a * std::pow(magnitude, g.mu - 1.0);
  return g.a * std::pow(g.b, g.mu - 1.0);
}

double gain(GainFamily family, int axis, double error,
            const GainSchedule& schedule) {
  const AxisSchedule& s = schedule.axes.at(axis);
  return gain(family == GainFamily::kPosition ? s.position : s.velocity, error);
}

double potential(const AxisGain& g, double x) {
  const double magnitude = std::abs(x);
  const double inner = g.a * std::pow(g.b, g.mu - 1.0);
  if (magnitude <= g.b) return 0.5 * inner * magnitude * magnitude;
  const double p = g.mu + 1.0;
  return 0.5 * inner * g.b * g.b +
         g.a * (std::pow(magnitude, p) - std::pow(g.b, p)) / p;
}

TrackingError tracking_error(const vehicle::AuvState& state,
                             const ReferenceState& ref) {
  TrackingError e;
  e.eta_tilde = ref.eta - state.eta;
  e.eta_tilde[2] = vehicle::wrap_angle(e.eta_tilde[2]);
  e.nu_tilde = ref.eta_dot - vehicle::world_kinematics(state);
  return e;
}

vehicle::Wrench nlpd_tau(const vehicle::AuvState& state,
                         const ReferenceState& ref,
                         const vehicle::AuvParams& params,
                         const GainSchedule& schedule) {
  const vehicle::WorldFrameTerms w = vehicle::world_frame_terms(state, params);
  const TrackingError e = tracking_error(state, ref);
  Vec3 feedback;
  for (int j = 0; j < 3; ++j) {
    feedback[j] =
        gain(schedule.axes[j].position, e.eta_tilde[j]) * e.eta_tilde[j] +
        gain(schedule.axes[j].velocity, e.nu_tilde[j]) * e.nu_tilde[j];
  }
  const Vec3 world = w.inertia * ref.eta_ddot + w.coriolis * ref.eta_dot +
                     w.damping * ref.eta_dot + feedback;
  return {vehicle::rotation(state.eta[2]).transpose() * world};
}

vehicle::Wrench pd_tau(const vehicle::AuvState& state,
                       const ReferenceState& ref,
                       const vehicle::AuvParams& params, double kp, double kv) {
  if (!(kp > 0) || !(kv > 0)) throw std::invalid_argument("kp, kv > 0");
  return nlpd_tau(state, ref, params, GainSchedule::constant(kp, kv));
}

ReferenceState ShipTrajectory::at(double t) const {
  const double phase = angular_rate * t;
  const double w2 = angular_rate * angular_rate;
  const double sx = std::sin(phase);
  const double cx = std::cos(phase);
  const double sy = std::sin(phase + std::numbers::pi / 2);
  const double cy = std::cos(phase + std::numbers::pi / 2);
  ReferenceState r;
  r.eta = Vec3(radius * sx, radius * sy, yaw_amplitude * sx);
  r.eta_dot = Vec3(radius * angular_rate * cx, radius * angular_rate * cy,
                   yaw_amplitude * angular_rate * cx);
  r.eta_ddot = Vec3(-radius * w2 * sx, -radius * w2 * sy,
                    -yaw_amplitude * w2 * sx);
  return r;
}

ReferenceState ship_reference(double t) { return ShipTrajectory{}.at(t); }

double lyapunov_value(const TrackingError& error,
                      const vehicle::AuvState& state,
                      const vehicle::AuvParams& params,
                      const GainSchedule& schedule) {
  const vehicle::WorldFrameTerms w = vehicle::world_frame_terms(state, params);
  double v = 0.5 * error.nu_tilde.dot(w.inertia * error.nu_tilde);
  for (int j = 0; j < 3; ++j) {
    v += potential(schedule.axes[j].position, error.eta_tilde[j]);
  }
  return v;
}

}  // namespace uwoc::control
