#pragma once

// Directed line-of-sight IM/DD (OOK) optical channel between a transmitter
// on the AUV and a downward-looking receiver on the surface ship, with solar
// background light as the dominant noise source.
//
// Units: SI throughout, except filter bandwidth (nm) and spectral irradiance
// (W / (m^2 nm)), which is how those quantities are tabulated.

#include <numbers>
#include <stdexcept>
#include <string>

namespace uwoc::optics {

/// Raised for inputs outside an operation's mathematical domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

inline constexpr double kElectronCharge = 1.602176634e-19;  // C, exact SI
inline constexpr double kMinHalfAngle = 1e-6;                // rad

struct Transmitter {
  double power_tx = 0.1;                             // W
  double half_angle = 15.0 * std::numbers::pi / 180.0;  // rad, half power
  double filter_bandwidth = 30.0;                    // nm

  bool operator==(const Transmitter&) const = default;
};

struct Receiver {
  double area = 1e-4;                                // m^2
  double fov_half_angle = 30.0 * std::numbers::pi / 180.0;  // rad
  double refractive_index = 1.52;
  double responsivity = 0.6;                         // A/W

  bool operator==(const Receiver&) const = default;
};

struct Water {
  double attenuation = 0.15;         // 1/m
  double transmittance = 0.95;
  double surface_irradiance = 0.7645;  // W/(m^2 nm) at the sea surface

  bool operator==(const Water&) const = default;
};

// How the solar background power at the detector is modelled.
//
//  kAperture:          E_s(0) * eps_t * dlambda * A_r. Surface irradiance on
//                      the bare detector area; the receiver sits at the
//                      surface, so no depth attenuation applies. Default.
//  kAttenuatedOnce:    E_s(0) e^{-K depth} * eps_t * dlambda * A_eff(psi).
//  kAttenuatedTwice:   E_s(0) e^{-K depth} * eps_t * dlambda * e^{-K depth}
//                      * A_eff(psi).
enum class SolarNoiseModel { kAperture, kAttenuatedOnce, kAttenuatedTwice };

std::string to_string(SolarNoiseModel model);
SolarNoiseModel solar_noise_model_from_string(const std::string& name);

struct OpticalLink {
  Transmitter tx;
  Receiver rx;
  Water water;
  SolarNoiseModel solar_model = SolarNoiseModel::kAperture;

  bool operator==(const OpticalLink&) const = default;
};

// Under the pointing assumption (transmitter up, receiver down) the
// transmitter pointing angle equals the receiver incidence angle.
struct LinkGeometry {
  double distance = 0.0;         // m, slant range transmitter -> receiver
  double incidence_angle = 0.0;  // rad, measured from the receiver axis
  double depth = 0.0;            // m, vertical depth of the transmitter
};

struct LinkBudget {
  double received_power = 0.0;  // W
  double photocurrent = 0.0;    // A
  double noise_power = 0.0;     // W
  double noise_variance = 0.0;  // A^2 at the achieved bit rate
  double snr = 0.0;
  double ber = 0.5;
  double bit_rate = 0.0;        // bit/s
};

void validate(const Transmitter& tx);
void validate(const Receiver& rx);
void validate(const Water& water);

/// Lambertian order m = -ln 2 / ln cos(half_angle).
double lambert_mode(double half_angle);

/// Radiant intensity P (m+1) / (2 pi d^2) cos^m(phi), in W/m^2.
double radiant_intensity(const Transmitter& tx, double distance,
                         double pointing_angle);

/// Concentrator gain times projected detector area; exactly 0 outside the
/// field of view (the boundary |psi| == FOV is inside).
double effective_area(const Receiver& rx, double incidence_angle);

double channel_loss(const Water& water, double path_length);

double received_power(const Transmitter& tx, const Receiver& rx,
                      const Water& water, const LinkGeometry& geom);

double received_photocurrent(const Transmitter& tx, const Receiver& rx,
                             const Water& water, const LinkGeometry& geom);

/// Solar background power collected through the receiver concentrator at a
/// given depth. The attenuation factor is applied twice unless
/// `single_attenuation` is set.
double solar_noise_power(const Receiver& rx, const Water& water,
                         double filter_bandwidth, double depth,
                         double incidence_angle,
                         bool single_attenuation = false);

/// Surface solar irradiance on the bare detector area.
double aperture_solar_noise_power(const Receiver& rx, const Water& water,
                                  double filter_bandwidth);

/// Dispatches on `link.solar_model`.
double noise_power(const OpticalLink& link, const LinkGeometry& geom);

/// Shot-noise variance 2 e R P_b B.
double noise_variance(double noise_power, double responsivity,
                      double bit_rate);

/// Standard normal tail probability.
double q_function(double x);

/// Inverse of q_function on p in (0, 0.5].
double q_inverse(double p);

double snr(double photocurrent, double noise_variance);
double ber(double snr);

/// Highest OOK bit rate that meets `target_ber`; 0 outside the field of view.
double bit_rate(const OpticalLink& link, const LinkGeometry& geom,
                double target_ber);

LinkBudget link_budget(const OpticalLink& link, const LinkGeometry& geom,
                       double target_ber);

}  // namespace uwoc::optics
