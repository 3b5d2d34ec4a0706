#include "polqkd/report.hpp"

#include "polqkd/config.hpp"

#include <fstream>
#include <stdexcept>

#include <fmt/format.h>

namespace polqkd {

namespace {

std::string num(double v) { return fmt::format("{:.17g}", v); }

}  // namespace

void write_pulse_csv(std::ostream& out, const SessionResult& result) {
  const SessionConfig& cfg = result.config;
  out << kPulseCsvHeader << '\n';
  for (const PulseRecord& r : result.pulse_log) {
    std::string choice, outcome;
    std::string prepared;
    if (cfg.protocol == Protocol::BB84) {
      prepared = to_string(*r.alice_basis);
      choice = to_string(*r.bob_basis);
      if (r.measured_label) outcome = to_string(*r.measured_label);
    } else {
      prepared = cfg.scheme.name();
      choice = to_string(r.bob_projector->target);
      if (r.click) outcome = *r.click ? "1" : "0";
    }
    out << fmt::format("{},{},{},{},{},{},{},{},{},{},{}\n", r.index, num(r.t_seconds), num(r.theta),
                       static_cast<int>(r.alice_bit), prepared, to_string(r.sent_label), r.lost ? 1 : 0, choice,
                       outcome, r.sifted ? 1 : 0, r.bob_bit ? std::to_string(*r.bob_bit) : std::string());
  }
}

nlohmann::json coding_table_json(const CodingTable& table) {
  nlohmann::json entries = nlohmann::json::array();
  for (const CodingEntry& e : table.entries)
    entries.push_back({{"label", std::string(to_string(e.label))}, {"bit", static_cast<int>(e.bit)}});
  return {{"protocol", std::string(to_string(table.protocol))},
          {"context", table.context},
          {"mode", std::string(to_string(table.mode))},
          {"kind", table.protocol == Protocol::BB84 ? "received_state" : "clicking_projector"},
          {"entries", entries}};
}

nlohmann::json summary_json(const SessionResult& result) {
  const SessionConfig& cfg = result.config;
  nlohmann::json config = nlohmann::json::object();
  for (const auto& [key, value] : to_key_values(cfg)) config[key] = value;

  nlohmann::json per_basis = nlohmann::json::object();
  for (const auto& [name, stats] : result.per_basis)
    per_basis[name] = {{"sifted", stats.sifted}, {"errors", stats.errors}, {"qber", stats.qber()}};

  nlohmann::json tables = nlohmann::json::array();
  for (const CodingTable& t : result.coding_tables) tables.push_back(coding_table_json(t));

  const std::size_t errors = hamming_distance(result.alice_sifted, result.bob_sifted);
  nlohmann::json summary = {
      {"config", config},
      {"seed", cfg.seed},
      {"protocol", std::string(to_string(cfg.protocol))},
      {"pulses", cfg.pulses},
      {"lost", result.lost},
      {"sifted_bits", result.alice_sifted.size()},
      {"bit_errors", errors},
      {"qber", result.qber},
      {"qber_per_basis", per_basis},
      {"coding_tables", tables},
  };
  if (cfg.protocol == Protocol::BB84) {
    summary["sift_rate"] = result.sift_rate;
  } else {
    summary["conclusive_rate"] = result.sift_rate;
    summary["matching_projector_trials"] = result.b92_matching_trials;
    summary["matching_projector_clicks"] = result.b92_matching_clicks;
  }
  return summary;
}

void write_session_outputs(const SessionResult& result, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::ofstream csv(dir / "pulses.csv", std::ios::binary);
  std::ofstream json(dir / "summary.json", std::ios::binary);
  if (!csv || !json) throw std::runtime_error("cannot write outputs into '" + dir.string() + "'");
  write_pulse_csv(csv, result);
  json << summary_json(result).dump(2) << '\n';
}

TransformTable transform_table(const std::vector<double>& thetas, const VerdetMedium& medium) {
  TransformTable table{thetas, {}};
  for (TrackingMode mode : {TrackingMode::Faraday, TrackingMode::HalfWavePlate, TrackingMode::None}) {
    const std::optional<VerdetMedium> m =
        mode == TrackingMode::Faraday ? std::optional<VerdetMedium>(medium) : std::nullopt;
    for (StateLabel input : kNamedStates) {
      TransformRow row{mode, input, {}, {}};
      for (double theta : thetas) {
        const JonesVectord image = polqkd::apply(composed_tracking_map(mode, theta, m), canonical_state<double>(input));
        row.outputs.push_back(classify_state(image));
        row.images.push_back(image);
      }
      table.rows.push_back(std::move(row));
    }
  }
  return table;
}

std::string format_transform_table(const TransformTable& table, bool with_vectors) {
  std::string out = fmt::format("{:<8} {:<6}", "mode", "input");
  for (double theta : table.thetas) out += fmt::format(" {:>12}", fmt::format("theta={:.4g}", theta));
  out += '\n';
  for (const TransformRow& row : table.rows) {
    out += fmt::format("{:<8} {:<6}", to_string(row.mode), to_string(row.input));
    for (StateLabel s : row.outputs) out += fmt::format(" {:>12}", to_string(s));
    out += '\n';
  }
  if (with_vectors) {
    out += '\n';
    for (const TransformRow& row : table.rows)
      for (std::size_t i = 0; i < row.images.size(); ++i)
        out += fmt::format("{:<8} {:<6} theta={:<8.4g} {}\n", to_string(row.mode), to_string(row.input),
                           table.thetas[i], format_jones(row.images[i]));
  }
  return out;
}

}  // namespace polqkd
