#include "uwoc/cone.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace uwoc::cone {

namespace {

double rate_on_boundary(const optics::OpticalLink& link, double target_ber,
                        double distance) {
  const double psi = link.rx.fov_half_angle;
  const optics::LinkGeometry geom{distance, psi, distance * std::cos(psi)};
  return optics::bit_rate(link, geom, target_ber);
}

}  // namespace

double solve_slant_height(const optics::OpticalLink& link, double target_ber,
                          double min_bit_rate, Bracket bracket) {
  if (!(min_bit_rate > 0)) throw SolveError("min_bit_rate must be > 0");
  if (!(bracket.lower > 0) || !(bracket.upper > bracket.lower)) {
    throw SolveError("invalid bracket");
  }
  double lo = bracket.lower;
  double hi = bracket.upper;
  const double excess_lo = rate_on_boundary(link, target_ber, lo) - min_bit_rate;
  const double excess_hi = rate_on_boundary(link, target_ber, hi) - min_bit_rate;
  if (excess_lo < 0) {
    throw SolveError("unreachable rate: " + std::to_string(min_bit_rate) +
                     " bit/s exceeds the rate at " + std::to_string(lo) + " m");
  }
  if (excess_hi > 0) {
    throw SolveError("bracket failure: rate still above target at " +
                     std::to_string(hi) + " m");
  }
  // Rate is strictly decreasing in distance, so the crossing is unique.
  while (hi - lo > 0.25 * kSlantTolerance) {
    const double mid = 0.5 * (lo + hi);
    if (rate_on_boundary(link, target_ber, mid) >= min_bit_rate) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

ConeRegion::ConeRegion(const Eigen::Vector3d& apex, double half_angle,
                       double slant_height)
    : apex_(apex),
      half_angle_(half_angle),
      slant_height_(slant_height),
      height_(slant_height * std::cos(half_angle)) {
  if (!(slant_height > 0)) throw std::invalid_argument("slant_height > 0");
  if (!(half_angle > 0) || !(half_angle < std::numbers::pi / 2)) {
    throw std::invalid_argument("0 < half_angle < pi/2");
  }
}

ConeRegion ConeRegion::translated_to(const Eigen::Vector3d& apex) const {
  return ConeRegion(apex, half_angle_, slant_height_);
}

Containment ConeRegion::contains(const Eigen::Vector3d& point) const {
  const Eigen::Vector3d offset = point - apex_;
  Containment out;
  out.distance = offset.norm();
  if (out.distance == 0.0) {
    out.inside = true;
    return out;
  }
  const double c = std::clamp(offset.dot(axis_) / out.distance, -1.0, 1.0);
  out.incidence_angle = std::acos(c);
  out.inside =
      out.distance <= slant_height_ && out.incidence_angle <= half_angle_;
  return out;
}

ConeRegion make_cone(const optics::OpticalLink& link, double target_ber,
                     double min_bit_rate, const Eigen::Vector3d& apex,
                     Bracket bracket) {
  const double slant =
      solve_slant_height(link, target_ber, min_bit_rate, bracket);
  return ConeRegion(apex, link.rx.fov_half_angle, slant);
}

}  // namespace uwoc::cone
