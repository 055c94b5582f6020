#pragma once

// Cone-shaped beam region below the ship receiver: the set of transmitter
// positions for which the link sustains a minimum bit rate at a target BER.
//
// World frame: z is depth, positive downward; the apex sits on the surface.

#include <stdexcept>

#include <Eigen/Core>

#include "uwoc/optics.hpp"

namespace uwoc::cone {

class SolveError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Bracket {
  double lower = 1e-3;   // m
  double upper = 150.0;  // m, clear-water range limit
};

inline constexpr double kSlantTolerance = 1e-6;  // m

/// Distance along the psi = FOV ray at which the achievable bit rate drops to
/// `min_bit_rate`.
double solve_slant_height(const optics::OpticalLink& link, double target_ber,
                          double min_bit_rate, Bracket bracket = {});

struct Containment {
  bool inside = false;
  double distance = 0.0;         // m, |point - apex|
  double incidence_angle = 0.0;  // rad, angle from the cone axis
};

class ConeRegion {
 public:
  ConeRegion(const Eigen::Vector3d& apex, double half_angle,
             double slant_height);

  const Eigen::Vector3d& apex() const { return apex_; }
  const Eigen::Vector3d& axis() const { return axis_; }
  double half_angle() const { return half_angle_; }
  double slant_height() const { return slant_height_; }
  double height() const { return height_; }

  /// Same cone shape, apex moved.
  ConeRegion translated_to(const Eigen::Vector3d& apex) const;

  /// Closed-boundary membership. The apex itself is inside with angle 0.
  Containment contains(const Eigen::Vector3d& point) const;

 private:
  Eigen::Vector3d apex_;
  Eigen::Vector3d axis_{0.0, 0.0, 1.0};
  double half_angle_;
  double slant_height_;
  double height_;
};

/// Solve the slant height and build the cone with its apex at `apex`.
ConeRegion make_cone(const optics::OpticalLink& link, double target_ber,
                     double min_bit_rate,
                     const Eigen::Vector3d& apex = Eigen::Vector3d::Zero(),
                     Bracket bracket = {});

}  // namespace uwoc::cone
