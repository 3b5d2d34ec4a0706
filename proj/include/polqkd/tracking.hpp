// Polarization-frame compensation. The channel turns the reference direction
// by theta; a compensator placed after it makes the composed map known and
// fixed: the identity for a Faraday rotator, a theta-free mirror for a
// half-wave plate.
#pragma once

#include "polqkd/polarization.hpp"

#include <optional>
#include <string_view>

namespace polqkd {

/// Magneto-optic medium of a Faraday rotator.
struct VerdetMedium {
  double verdet = 0.0;  ///< rad / (T m)
  double length = 0.0;  ///< m

  /// Throws std::invalid_argument on a zero Verdet constant or non-positive length.
  void validate() const;
};

enum class TrackingMode { Faraday, HalfWavePlate, None };

std::string_view to_string(TrackingMode mode);
TrackingMode parse_tracking_mode(std::string_view text);

/// Where the compensator sits relative to the channel.
enum class Placement { Receiver, Transmitter };

std::string_view to_string(Placement placement);
Placement parse_placement(std::string_view text);

struct CompensatorState {
  TrackingMode mode = TrackingMode::None;
  double theta_estimate = 0.0;       ///< rad
  std::optional<double> field;       ///< T, Faraday only
  std::optional<double> axis;        ///< rad, half-wave plate only
};

struct Compensation {
  JonesMatrixd op;
  CompensatorState state;
};

/// Wraps an angle into (-pi, pi].
double normalize_angle(double angle);

/// Magnetic induction that turns the plane by `beta`: beta / (V l).
double field_for_angle(double beta, const VerdetMedium& medium);

/// Rotation produced by `field`: V B l.
double angle_for_field(double field, const VerdetMedium& medium);

/// Faraday rotator undoing a channel rotation of `theta`. The rotator turns by
/// -theta (wrapped into (-pi, pi]) so the commanded field has minimal magnitude.
Compensation faraday_compensator(double theta, const VerdetMedium& medium);

/// Half-wave plate with its axis at theta/2, placed after the channel.
Compensation hwp_compensator(double theta);

/// Compensator for `mode` at `placement`. A transmitter-side half-wave plate
/// sits at -theta/2 so that channel * plate equals plate * channel at the
/// receiver; the Faraday rotator commutes with the channel and is unchanged.
Compensation make_compensator(TrackingMode mode, double theta_estimate, const std::optional<VerdetMedium>& medium,
                              Placement placement = Placement::Receiver);

/// Compensator applied to a channel rotation of `theta` with perfect knowledge of theta.
JonesMatrixd composed_tracking_map(TrackingMode mode, double theta,
                                   const std::optional<VerdetMedium>& medium = std::nullopt);

/// The fixed map the half-wave plate tracking leaves behind (the plate at axis 0).
JonesMatrixd hwp_residual_map();

}  // namespace polqkd
