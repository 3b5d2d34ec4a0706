#include "polqkd/tracking.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace polqkd {

void VerdetMedium::validate() const {
  if (!std::isfinite(verdet) || verdet == 0.0) throw std::invalid_argument("Verdet constant must be finite and nonzero");
  if (!std::isfinite(length) || !(length > 0.0)) throw std::invalid_argument("medium length must be positive");
}

std::string_view to_string(TrackingMode mode) {
  switch (mode) {
    case TrackingMode::Faraday: return "faraday";
    case TrackingMode::HalfWavePlate: return "hwp";
    case TrackingMode::None: return "none";
  }
  return "none";
}

TrackingMode parse_tracking_mode(std::string_view text) {
  if (text == "faraday") return TrackingMode::Faraday;
  if (text == "hwp" || text == "half_wave_plate") return TrackingMode::HalfWavePlate;
  if (text == "none") return TrackingMode::None;
  throw std::invalid_argument("unknown tracking mode '" + std::string(text) + "'");
}

std::string_view to_string(Placement placement) {
  return placement == Placement::Receiver ? "receiver" : "transmitter";
}

Placement parse_placement(std::string_view text) {
  if (text == "receiver") return Placement::Receiver;
  if (text == "transmitter") return Placement::Transmitter;
  throw std::invalid_argument("unknown compensator placement '" + std::string(text) + "'");
}

double normalize_angle(double angle) {
  constexpr double two_pi = 2 * std::numbers::pi;
  double wrapped = std::remainder(angle, two_pi);  // [-pi, pi]
  if (wrapped <= -std::numbers::pi) wrapped += two_pi;
  return wrapped;
}

double field_for_angle(double beta, const VerdetMedium& medium) {
  medium.validate();
  return beta / (medium.verdet * medium.length);
}

double angle_for_field(double field, const VerdetMedium& medium) {
  medium.validate();
  return medium.verdet * field * medium.length;
}

Compensation faraday_compensator(double theta, const VerdetMedium& medium) {
  medium.validate();
  const double beta = normalize_angle(-theta);
  CompensatorState state{TrackingMode::Faraday, theta, field_for_angle(beta, medium), std::nullopt};
  return {faraday_operator(beta), state};
}

Compensation hwp_compensator(double theta) {
  const double axis = theta / 2;
  CompensatorState state{TrackingMode::HalfWavePlate, theta, std::nullopt, axis};
  return {hwp_operator(axis), state};
}

Compensation make_compensator(TrackingMode mode, double theta_estimate, const std::optional<VerdetMedium>& medium,
                              Placement placement) {
  switch (mode) {
    case TrackingMode::Faraday:
      if (!medium) throw std::invalid_argument("Faraday tracking requires a Verdet medium");
      return faraday_compensator(theta_estimate, *medium);
    case TrackingMode::HalfWavePlate:
      if (placement == Placement::Transmitter) {
        Compensation c = hwp_compensator(-theta_estimate);
        c.state.theta_estimate = theta_estimate;
        return c;
      }
      return hwp_compensator(theta_estimate);
    case TrackingMode::None:
      return {JonesMatrixd::Identity(), CompensatorState{TrackingMode::None, theta_estimate, std::nullopt, std::nullopt}};
  }
  throw std::invalid_argument("unknown tracking mode");
}

JonesMatrixd composed_tracking_map(TrackingMode mode, double theta, const std::optional<VerdetMedium>& medium) {
  if (mode == TrackingMode::Faraday && !medium)
    throw std::invalid_argument("Faraday tracking requires a Verdet medium");
  return compose(make_compensator(mode, theta, medium).op, rotation_operator(theta));
}

JonesMatrixd hwp_residual_map() { return hwp_operator(0.0); }

}  // namespace polqkd
