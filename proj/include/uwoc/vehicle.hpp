#pragma once

// Three-degree-of-freedom horizontal-plane AUV model:
//   M nu_dot + C(nu) nu + D(nu) nu = tau + tau_w,   eta_dot = R(rho) nu
// with eta = (x, y, rho) in the earth-fixed frame and nu = (u, v, r) in the
// body frame.

#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace uwoc::vehicle {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct AuvState {
  Vec3 eta = Vec3::Zero();  // x [m], y [m], rho [rad], rho unwrapped
  Vec3 nu = Vec3::Zero();   // u [m/s], v [m/s], r [rad/s]
};

struct AuvParams {
  double m11 = 100.0;  // kg
  double m22 = 250.0;  // kg
  double m33 = 80.0;   // kg m^2
  double d11_lin = 70.0;
  double d22_lin = 100.0;
  double d33_lin = 50.0;
  double d11_quad = 100.0;
  double d22_quad = 200.0;
  double d33_quad = 100.0;
  double mass_scale = 1.0;  // multiplies m11, m22, m33

  double surge_mass() const { return mass_scale * m11; }
  double sway_mass() const { return mass_scale * m22; }
  double yaw_inertia() const { return mass_scale * m33; }

  bool operator==(const AuvParams&) const = default;
};

void validate(const AuvParams& params);

/// Force/torque triple (surge N, sway N, yaw N m), body frame.
struct Wrench {
  Vec3 tau = Vec3::Zero();

  static Wrench zero() { return {}; }
  Wrench operator+(const Wrench& other) const { return {tau + other.tau}; }
  bool operator==(const Wrench& other) const { return tau == other.tau; }
};

Mat3 inertia_matrix(const AuvParams& params);
Mat3 coriolis_matrix(const Vec3& nu, const AuvParams& params);
Mat3 damping_matrix(const Vec3& nu, const AuvParams& params);

Mat3 rotation(double rho);
/// dR/drho * r
Mat3 rotation_rate(double rho, double r);

/// Wraps an angle to (-pi, pi].
double wrap_angle(double angle);

Vec3 world_kinematics(const AuvState& state);

Vec3 body_acceleration(const AuvState& state, const AuvParams& params,
                       const Wrench& tau, const Wrench& tau_w);

/// Dynamics terms expressed in the earth-fixed frame.
struct WorldFrameTerms {
  Mat3 inertia;
  Mat3 coriolis;
  Mat3 damping;
};

WorldFrameTerms world_frame_terms(const AuvState& state,
                                  const AuvParams& params);

/// eta_ddot from the earth-fixed formulation; the wrenches are body-frame and
/// rotated internally.
Vec3 world_acceleration(const AuvState& state, const AuvParams& params,
                        const Wrench& tau, const Wrench& tau_w);

/// One classical RK4 step of the body-frame model with tau and tau_w held.
AuvState step(const AuvState& state, const AuvParams& params,
              const Wrench& tau, const Wrench& tau_w, double dt);

/// RK4 step of the earth-fixed formulation in (eta, eta_dot); returns the
/// state converted back to body velocities.
AuvState step_world(const AuvState& state, const AuvParams& params,
                    const Wrench& tau, const Wrench& tau_w, double dt);

}  // namespace uwoc::vehicle
