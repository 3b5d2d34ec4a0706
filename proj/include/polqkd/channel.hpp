// Rotating satellite channel: every surviving photon sees D(theta(t) + jitter).
// The channel is a pure rotation; there is no retardance or depolarization.
#pragma once

#include "polqkd/polarization.hpp"
#include "polqkd/rng.hpp"

#include <filesystem>
#include <istream>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

namespace polqkd {

struct ConstantProfile {
  double theta0 = 0.0;
};

struct LinearRampProfile {
  double theta0 = 0.0;
  double rate = 0.01;  ///< rad/s
};

/// theta(t) = amplitude * sin(2 pi t / period + phase)
struct SinusoidProfile {
  double amplitude = 0.0;
  double period = 1.0;  ///< s
  double phase = 0.0;
};

/// Piecewise-linear interpolation over (t, theta) samples with strictly increasing t.
struct TableProfile {
  std::vector<std::pair<double, double>> samples;
};

using ThetaProfile = std::variant<ConstantProfile, LinearRampProfile, SinusoidProfile, TableProfile>;

void validate(const ThetaProfile& profile);

/// Channel angle at time t >= 0. Throws outside a table's span.
double theta_at(const ThetaProfile& profile, double t);

/// Two-column CSV (t_seconds, theta_radians); a non-numeric first line is taken as a header.
TableProfile read_theta_table(std::istream& in);
TableProfile read_theta_table(const std::filesystem::path& path);

struct ChannelConfig {
  ThetaProfile profile = ConstantProfile{};
  double pulse_rate = 1.0e6;       ///< Hz
  double loss_probability = 0.0;   ///< [0, 1]
  double angle_jitter_sigma = 0.0; ///< rad

  void validate() const;

  double time_of_pulse(std::size_t index) const { return static_cast<double>(index) / pulse_rate; }
};

/// Sends one photon through the channel. Draws one uniform (loss) and one
/// standard normal (jitter) from `rng` every call, so the draw sequence does
/// not depend on the channel parameters. Returns nullopt when the photon is lost.
std::optional<JonesVectord> transmit(const JonesVectord& state, double t, const ChannelConfig& cfg, Rng& rng);

/// Same as above with the channel angle already evaluated.
std::optional<JonesVectord> transmit_at_angle(const JonesVectord& state, double theta, const ChannelConfig& cfg,
                                              Rng& rng);

}  // namespace polqkd
