#include "uwoc/optics.hpp"

#include <cmath>
#include <numbers>

namespace uwoc::optics {

namespace {

constexpr double kPi = std::numbers::pi;

void require(bool ok, const char* what) {
  if (!ok) throw DomainError(what);
}

}  // namespace

std::string to_string(SolarNoiseModel model) {
  switch (model) {
    case SolarNoiseModel::kAperture:
      return "aperture";
    case SolarNoiseModel::kAttenuatedOnce:
      return "attenuated_once";
    case SolarNoiseModel::kAttenuatedTwice:
      return "attenuated_twice";
  }
  return "aperture";
}

SolarNoiseModel solar_noise_model_from_string(const std::string& name) {
  if (name == "aperture") return SolarNoiseModel::kAperture;
  if (name == "attenuated_once") return SolarNoiseModel::kAttenuatedOnce;
  if (name == "attenuated_twice") return SolarNoiseModel::kAttenuatedTwice;
  throw DomainError("unknown solar noise model '" + name + "'");
}

void validate(const Transmitter& tx) {
  require(std::isfinite(tx.power_tx) && tx.power_tx > 0, "power_tx > 0");
  require(tx.half_angle >= kMinHalfAngle && tx.half_angle < kPi / 2,
          "0 < half_angle < pi/2");
  require(std::isfinite(tx.filter_bandwidth) && tx.filter_bandwidth > 0,
          "filter_bandwidth > 0");
}

void validate(const Receiver& rx) {
  require(std::isfinite(rx.area) && rx.area > 0, "area > 0");
  require(rx.fov_half_angle > 0 && rx.fov_half_angle < kPi / 2,
          "0 < fov_half_angle < pi/2");
  require(std::isfinite(rx.refractive_index) && rx.refractive_index >= 1,
          "refractive_index >= 1");
  require(std::isfinite(rx.responsivity) && rx.responsivity > 0,
          "responsivity > 0");
}

void validate(const Water& water) {
  require(std::isfinite(water.attenuation) && water.attenuation > 0,
          "attenuation > 0");
  require(water.transmittance > 0 && water.transmittance <= 1,
          "0 < transmittance <= 1");
  require(std::isfinite(water.surface_irradiance) &&
              water.surface_irradiance >= 0,
          "surface_irradiance >= 0");
}

double lambert_mode(double half_angle) {
  if (!(half_angle >= kMinHalfAngle) || !(half_angle < kPi / 2)) {
    throw DomainError("lambert_mode: half_angle must lie in [1e-6, pi/2)");
  }
  return -std::log(2.0) / std::log(std::cos(half_angle));
}

double radiant_intensity(const Transmitter& tx, double distance,
                         double pointing_angle) {
  if (!(distance > 0)) throw DomainError("radiant_intensity: distance > 0");
  if (!(std::abs(pointing_angle) <= kPi / 2)) {
    throw DomainError("radiant_intensity: |pointing_angle| <= pi/2");
  }
  const double m = lambert_mode(tx.half_angle);
  return tx.power_tx * (m + 1.0) / (2.0 * kPi * distance * distance) *
         std::pow(std::cos(pointing_angle), m);
}

double effective_area(const Receiver& rx, double incidence_angle) {
  if (std::abs(incidence_angle) > rx.fov_half_angle) return 0.0;
  const double s = std::sin(rx.fov_half_angle);
  const double gain = rx.refractive_index * rx.refractive_index / (s * s);
  return gain * rx.area * std::cos(incidence_angle);
}

double channel_loss(const Water& water, double path_length) {
  return std::exp(-water.attenuation * path_length);
}

double received_power(const Transmitter& tx, const Receiver& rx,
                      const Water& water, const LinkGeometry& geom) {
  if (!(geom.distance > 0)) throw DomainError("received_power: distance > 0");
  const double area = effective_area(rx, geom.incidence_angle);
  if (area == 0.0) return 0.0;
  return radiant_intensity(tx, geom.distance, geom.incidence_angle) * area *
         channel_loss(water, geom.distance);
}

double received_photocurrent(const Transmitter& tx, const Receiver& rx,
                             const Water& water, const LinkGeometry& geom) {
  return rx.responsivity * received_power(tx, rx, water, geom);
}

double solar_noise_power(const Receiver& rx, const Water& water,
                         double filter_bandwidth, double depth,
                         double incidence_angle, bool single_attenuation) {
  const double loss = std::exp(-water.attenuation * depth);
  const double irradiance_at_depth = water.surface_irradiance * loss;
  const double extra = single_attenuation ? 1.0 : loss;
  return irradiance_at_depth * water.transmittance * filter_bandwidth * extra *
         effective_area(rx, incidence_angle);
}

double aperture_solar_noise_power(const Receiver& rx, const Water& water,
                                  double filter_bandwidth) {
  return water.surface_irradiance * water.transmittance * filter_bandwidth *
         rx.area;
}

double noise_power(const OpticalLink& link, const LinkGeometry& geom) {
  switch (link.solar_model) {
    case SolarNoiseModel::kAperture:
      return aperture_solar_noise_power(link.rx, link.water,
                                        link.tx.filter_bandwidth);
    case SolarNoiseModel::kAttenuatedOnce:
      return solar_noise_power(link.rx, link.water, link.tx.filter_bandwidth,
                               geom.depth, geom.incidence_angle, true);
    case SolarNoiseModel::kAttenuatedTwice:
      return solar_noise_power(link.rx, link.water, link.tx.filter_bandwidth,
                               geom.depth, geom.incidence_angle, false);
  }
  return 0.0;
}

double noise_variance(double noise_power, double responsivity,
                      double bit_rate) {
  return 2.0 * kElectronCharge * responsivity * noise_power * bit_rate;
}

double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

double q_inverse(double p) {
  if (!(p > 0.0) || !(p <= 0.5)) {
    throw DomainError("q_inverse: p must lie in (0, 0.5]");
  }
  if (p == 0.5) return 0.0;

  // Q is strictly decreasing on [0, 40]; Newton steps are kept inside the
  // shrinking bisection bracket.
  double lo = 0.0;
  double hi = 40.0;
  double x = 1.0;
  for (int i = 0; i < 200; ++i) {
    const double q = q_function(x);
    if (q > p) {
      lo = x;
    } else {
      hi = x;
    }
    if (std::abs(q - p) <= 1e-15 * p || hi - lo <= 1e-15 * hi) break;
    const double density = std::exp(-0.5 * x * x) / std::sqrt(2.0 * kPi);
    double next = x + (q - p) / density;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    x = next;
  }
  return x;
}

double snr(double photocurrent, double noise_variance) {
  if (noise_variance == 0.0) {
    if (photocurrent == 0.0) return 0.0;
    throw DomainError("snr: zero noise variance (noise-free limit)");
  }
  return photocurrent * photocurrent / noise_variance;
}

double ber(double snr) { return q_function(std::sqrt(snr)); }

double bit_rate(const OpticalLink& link, const LinkGeometry& geom,
                double target_ber) {
  if (!(target_ber > 0.0) || !(target_ber < 0.5)) {
    throw DomainError("bit_rate: target_ber must lie in (0, 0.5)");
  }
  if (std::abs(geom.incidence_angle) > link.rx.fov_half_angle) return 0.0;
  const double current =
      received_photocurrent(link.tx, link.rx, link.water, geom);
  const double background = noise_power(link, geom);
  if (!(background > 0.0)) {
    throw DomainError("bit_rate: zero background noise power, rate unbounded");
  }
  const double q = current / q_inverse(target_ber);
  return q * q / (2.0 * kElectronCharge * link.rx.responsivity * background);
}

LinkBudget link_budget(const OpticalLink& link, const LinkGeometry& geom,
                       double target_ber) {
  LinkBudget out;
  out.received_power = received_power(link.tx, link.rx, link.water, geom);
  out.photocurrent = link.rx.responsivity * out.received_power;
  out.noise_power = noise_power(link, geom);
  out.bit_rate = bit_rate(link, geom, target_ber);
  if (out.bit_rate > 0.0) {
    out.noise_variance =
        noise_variance(out.noise_power, link.rx.responsivity, out.bit_rate);
    out.snr = snr(out.photocurrent, out.noise_variance);
    out.ber = ber(out.snr);
  }
  return out;
}

}  // namespace uwoc::optics
