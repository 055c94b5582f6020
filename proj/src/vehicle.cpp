#include "uwoc/vehicle.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Dense>

namespace uwoc::vehicle {

namespace {

using Vec6 = Eigen::Matrix<double, 6, 1>;

constexpr const char* kComponentNames[6] = {"x", "y", "rho", "u", "v", "r"};

void check_finite(const AuvState& s) {
  for (int i = 0; i < 3; ++i) {
    if (!std::isfinite(s.eta[i])) {
      throw DivergenceError(std::string("non-finite state component ") +
                            kComponentNames[i]);
    }
    if (!std::isfinite(s.nu[i])) {
      throw DivergenceError(std::string("non-finite state component ") +
                            kComponentNames[i + 3]);
    }
  }
}

}  // namespace

void validate(const AuvParams& p) {
  auto req = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
  };
  req(p.m11 > 0, "m11 > 0");
  req(p.m22 > 0, "m22 > 0");
  req(p.m33 > 0, "m33 > 0");
  req(p.d11_lin >= 0 && p.d22_lin >= 0 && p.d33_lin >= 0,
      "linear damping >= 0");
  req(p.d11_quad >= 0 && p.d22_quad >= 0 && p.d33_quad >= 0,
      "quadratic damping >= 0");
  req(p.mass_scale > 0, "mass_scale > 0");
}

Mat3 inertia_matrix(const AuvParams& p) {
  return Vec3(p.surge_mass(), p.sway_mass(), p.yaw_inertia()).asDiagonal();
}

Mat3 coriolis_matrix(const Vec3& nu, const AuvParams& p) {
  const double mu = p.surge_mass() * nu[0];
  const double mv = p.sway_mass() * nu[1];
  Mat3 c = Mat3::Zero();
  c(0, 2) = -mv;
  c(1, 2) = mu;
  c(2, 0) = mv;
  c(2, 1) = -mu;
  return c;
}

Mat3 damping_matrix(const Vec3& nu, const AuvParams& p) {
  return Vec3(p.d11_lin + p.d11_quad * std::abs(nu[0]),
              p.d22_lin + p.d22_quad * std::abs(nu[1]),
              p.d33_lin + p.d33_quad * std::abs(nu[2]))
      .asDiagonal();
}

Mat3 rotation(double rho) {
  const double c = std::cos(rho);
  const double s = std::sin(rho);
  Mat3 r;
  r << c, -s, 0.0,
       s, c, 0.0,
       0.0, 0.0, 1.0;
  return r;
}

Mat3 rotation_rate(double rho, double r) {
  const double c = std::cos(rho);
  const double s = std::sin(rho);
  Mat3 m;
  m << -s, -c, 0.0,
       c, -s, 0.0,
       0.0, 0.0, 0.0;
  return r * m;
}

double wrap_angle(double angle) {
  double w = std::remainder(angle, 2.0 * std::numbers::pi);
  if (w <= -std::numbers::pi) w += 2.0 * std::numbers::pi;
  return w;
}

Vec3 world_kinematics(const AuvState& state) {
  return rotation(state.eta[2]) * state.nu;
}

Vec3 body_acceleration(const AuvState& state, const AuvParams& params,
                       const Wrench& tau, const Wrench& tau_w) {
  const Vec3& nu = state.nu;
  const Vec3 rhs = tau.tau + tau_w.tau - coriolis_matrix(nu, params) * nu -
                   damping_matrix(nu, params) * nu;
  return rhs.cwiseQuotient(
      Vec3(params.surge_mass(), params.sway_mass(), params.yaw_inertia()));
}

WorldFrameTerms world_frame_terms(const AuvState& state,
                                  const AuvParams& params) {
  // R is orthogonal: R^{-1} = R^T and R^{-T} = R.
  const Mat3 r = rotation(state.eta[2]);
  const Mat3 rt = r.transpose();
  const Mat3 r_dot = rotation_rate(state.eta[2], state.nu[2]);
  const Mat3 m = inertia_matrix(params);
  WorldFrameTerms out;
  out.inertia = r * m * rt;
  out.coriolis = r * (coriolis_matrix(state.nu, params) - m * rt * r_dot) * rt;
  out.damping = r * damping_matrix(state.nu, params) * rt;
  return out;
}

Vec3 world_acceleration(const AuvState& state, const AuvParams& params,
                        const Wrench& tau, const Wrench& tau_w) {
  const WorldFrameTerms w = world_frame_terms(state, params);
  const Vec3 eta_dot = world_kinematics(state);
  const Vec3 force = rotation(state.eta[2]) * (tau.tau + tau_w.tau);
  return w.inertia.ldlt().solve(force - w.coriolis * eta_dot -
                                w.damping * eta_dot);
}

AuvState step(const AuvState& state, const AuvParams& params,
              const Wrench& tau, const Wrench& tau_w, double dt) {
  if (!(dt > 0)) throw std::invalid_argument("step: dt > 0");
  auto deriv = [&](const AuvState& s) {
    Vec6 d;
    d.head<3>() = world_kinematics(s);
    d.tail<3>() = body_acceleration(s, params, tau, tau_w);
    return d;
  };
  auto offset = [&](const Vec6& k, double h) {
    return AuvState{state.eta + h * k.head<3>(), state.nu + h * k.tail<3>()};
  };
  const Vec6 k1 = deriv(state);
  const Vec6 k2 = deriv(offset(k1, 0.5 * dt));
  const Vec6 k3 = deriv(offset(k2, 0.5 * dt));
  const Vec6 k4 = deriv(offset(k3, dt));
  const Vec6 incr = (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  AuvState next = offset(incr, 1.0);
  check_finite(next);
  return next;
}

AuvState step_world(const AuvState& state, const AuvParams& params,
                    const Wrench& tau, const Wrench& tau_w, double dt) {
  if (!(dt > 0)) throw std::invalid_argument("step_world: dt > 0");
  // Integrate (eta, eta_dot); body velocities are recovered for each stage.
  auto to_state = [](const Vec3& eta, const Vec3& eta_dot) {
    return AuvState{eta, rotation(eta[2]).transpose() * eta_dot};
  };
  auto deriv = [&](const Vec3& eta, const Vec3& eta_dot) {
    Vec6 d;
    d.head<3>() = eta_dot;
    d.tail<3>() = world_acceleration(to_state(eta, eta_dot), params, tau, tau_w);
    return d;
  };
  const Vec3 eta0 = state.eta;
  const Vec3 rate0 = world_kinematics(state);
  const Vec6 k1 = deriv(eta0, rate0);
  const Vec6 k2 = deriv(eta0 + 0.5 * dt * k1.head<3>(),
                        rate0 + 0.5 * dt * k1.tail<3>());
  const Vec6 k3 = deriv(eta0 + 0.5 * dt * k2.head<3>(),
                        rate0 + 0.5 * dt * k2.tail<3>());
  const Vec6 k4 = deriv(eta0 + dt * k3.head<3>(), rate0 + dt * k3.tail<3>());
  const Vec6 incr = (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  AuvState next = to_state(eta0 + incr.head<3>(), rate0 + incr.tail<3>());
  check_finite(next);
  return next;
}

}  // namespace uwoc::vehicle
