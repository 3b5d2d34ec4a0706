// End-to-end key distribution session: encoder -> channel -> compensator ->
// measurement -> sifting -> QBER.
#pragma once

#include "polqkd/channel.hpp"
#include "polqkd/qkd_protocol.hpp"
#include "polqkd/tracking.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace polqkd {

/// Which table the receiver decodes with.
enum class ReceiverTable {
  PaperRemap,        ///< the table matching the tracking mode
  TransmitterTable,  ///< the transmitter's own map (negative control)
};

std::string_view to_string(ReceiverTable table);
ReceiverTable parse_receiver_table(std::string_view text);

struct SessionConfig {
  Protocol protocol = Protocol::BB84;
  std::pair<Bb84Basis, Bb84Basis> bases{Bb84Basis::Rectilinear, Bb84Basis::Diagonal};
  B92Scheme scheme{};
  TrackingMode tracking = TrackingMode::HalfWavePlate;
  Placement placement = Placement::Receiver;
  std::optional<VerdetMedium> medium;
  double estimate_sigma = 0.0;  ///< rad, std-dev of the theta oracle's error
  ChannelConfig channel{};
  std::size_t pulses = 10000;
  std::uint64_t seed = 1;
  std::optional<ReceiverTable> receiver_table_override;
  double b92_projector_bias = 0.5;  ///< probability of picking the bit-1 projector
  std::optional<double> qber_threshold;  ///< run fails when QBER exceeds this
  unsigned workers = 1;

  /// Throws ConfigError when the configuration is inconsistent.
  void validate() const;
};

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Raised when a session sifts zero bits.
struct QberUndefined : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BasisStats {
  std::size_t sifted = 0;
  std::size_t errors = 0;
  double qber() const { return sifted ? static_cast<double>(errors) / static_cast<double>(sifted) : 0.0; }
};

struct SessionResult {
  SessionConfig config;
  BitString alice_sifted;
  BitString bob_sifted;
  double qber = 0.0;
  /// BB84: sifted / pulses. B92: conclusive / pulses.
  double sift_rate = 0.0;
  std::size_t lost = 0;
  /// BB84: keyed by the sifted pulse's basis. B92: keyed by the clicking projector target.
  std::map<std::string, BasisStats> per_basis;
  /// B92: pulses where the receiver picked the projector carrying the sent bit, and how many clicked.
  std::size_t b92_matching_trials = 0;
  std::size_t b92_matching_clicks = 0;
  std::vector<CodingTable> coding_tables;
  std::vector<PulseRecord> pulse_log;
};

/// Tables the receiver decodes with for `cfg`. Without tracking, or with the
/// transmitter-table override, these are the transmitter's untransformed maps.
std::vector<CodingTable> receiver_tables(const SessionConfig& cfg);

/// Simulates one pulse. Pure given (cfg, index).
PulseRecord simulate_pulse(const SessionConfig& cfg, std::size_t index);

/// Runs the whole session. Bit-exact for a given config, independent of
/// cfg.workers. Throws ConfigError or QberUndefined.
SessionResult run_session(const SessionConfig& cfg);

}  // namespace polqkd
