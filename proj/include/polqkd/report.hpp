// Session outputs (pulses.csv, summary.json) and the six-state transform table.
#pragma once

#include "polqkd/session.hpp"

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

namespace polqkd {

/// Column order of pulses.csv.
inline constexpr const char* kPulseCsvHeader =
    "index,t_seconds,theta_radians,alice_bit,alice_basis_or_scheme,sent_label,lost,bob_choice,outcome,sifted,bob_bit";

/// One row per pulse. bob_choice is the receiver's basis (BB84) or projector
/// target (B92); outcome is the measured state (BB84) or click flag 1/0 (B92),
/// empty for lost photons; bob_bit is empty unless sifted. Reals use 17
/// significant digits.
void write_pulse_csv(std::ostream& out, const SessionResult& result);

nlohmann::json coding_table_json(const CodingTable& table);

/// Config echo, rates, overall and per-basis QBER, coding tables and seed.
nlohmann::json summary_json(const SessionResult& result);

/// Writes pulses.csv and summary.json into `dir`, creating it if needed.
void write_session_outputs(const SessionResult& result, const std::filesystem::path& dir);

struct TransformRow {
  TrackingMode mode = TrackingMode::None;
  StateLabel input = StateLabel::Other;
  std::vector<StateLabel> outputs;  ///< one per sample angle
  std::vector<JonesVectord> images;
};

struct TransformTable {
  std::vector<double> thetas;
  std::vector<TransformRow> rows;
};

/// Classifies compensator * D(theta) applied to each canonical state, for every
/// tracking mode and each sample angle.
TransformTable transform_table(const std::vector<double>& thetas = {0.3, 1.7, 4.2},
                               const VerdetMedium& medium = VerdetMedium{1.0, 1.0});

/// Fixed-width text rendering of the transform table, optionally followed by
/// the output Jones vectors.
std::string format_transform_table(const TransformTable& table, bool with_vectors = false);

}  // namespace polqkd
