#include "polqkd/session.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace polqkd {

std::string_view to_string(ReceiverTable table) {
  return table == ReceiverTable::PaperRemap ? "paper_remap" : "transmitter_table";
}

ReceiverTable parse_receiver_table(std::string_view text) {
  if (text == "paper_remap") return ReceiverTable::PaperRemap;
  if (text == "transmitter_table") return ReceiverTable::TransmitterTable;
  throw std::invalid_argument("unknown receiver table '" + std::string(text) + "'");
}

void SessionConfig::validate() const {
  try {
    if (protocol == Protocol::BB84 && bases.first == bases.second)
      throw ConfigError("BB84 needs two distinct bases");
    if (protocol == Protocol::B92) scheme.validate();
    if (tracking == TrackingMode::Faraday && !medium) throw ConfigError("Faraday tracking requires a Verdet medium");
    if (tracking != TrackingMode::Faraday && medium)
      throw ConfigError("a Verdet medium is only meaningful with Faraday tracking");
    if (medium) medium->validate();
    if (!std::isfinite(estimate_sigma) || estimate_sigma < 0)
      throw ConfigError("estimate_sigma must be non-negative");
    channel.validate();
    if (pulses == 0) throw ConfigError("pulses must be positive");
    if (!(b92_projector_bias >= 0 && b92_projector_bias <= 1))
      throw ConfigError("b92 projector bias must lie in [0, 1]");
    if (qber_threshold && !(*qber_threshold >= 0 && *qber_threshold <= 1))
      throw ConfigError("qber_threshold must lie in [0, 1]");
    if (workers == 0) throw ConfigError("workers must be at least 1");
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

namespace {

bool uses_transmitter_maps(const SessionConfig& cfg) {
  return cfg.tracking == TrackingMode::None || cfg.receiver_table_override == ReceiverTable::TransmitterTable;
}

/// Per-session constants shared by every pulse.
struct Prepared {
  const SessionConfig& cfg;
  std::vector<CodingTable> tables;  // BB84: one per session basis, in bases order
  std::array<B92Projector, 2> projectors{};

  explicit Prepared(const SessionConfig& c) : cfg(c), tables(receiver_tables(c)) {
    if (cfg.protocol == Protocol::B92)
      projectors = {B92Projector{tables[0].entries[0].label, tables[0].entries[0].bit},
                    B92Projector{tables[0].entries[1].label, tables[0].entries[1].bit}};
  }

  const CodingTable& table_for(Bb84Basis basis) const { return basis == cfg.bases.first ? tables[0] : tables[1]; }

  PulseRecord simulate(std::size_t index) const {
    Rng rng = pulse_rng(cfg.seed, index);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    std::normal_distribution<double> normal(0.0, 1.0);

    PulseRecord r;
    r.index = index;
    r.t_seconds = cfg.channel.time_of_pulse(index);
    r.theta = theta_at(cfg.channel.profile, r.t_seconds);

    r.alice_bit = uniform(rng) < 0.5 ? 1 : 0;
    if (cfg.protocol == Protocol::BB84) {
      r.alice_basis = uniform(rng) < 0.5 ? cfg.bases.first : cfg.bases.second;
      r.sent_label = bb84_encode(r.alice_bit, *r.alice_basis);
    } else {
      r.sent_label = b92_encode(r.alice_bit, cfg.scheme);
    }

    const double theta_estimate = r.theta + cfg.estimate_sigma * normal(rng);
    const Compensation comp = make_compensator(cfg.tracking, theta_estimate, cfg.medium, cfg.placement);

    JonesVectord state = canonical_state<double>(r.sent_label);
    if (cfg.placement == Placement::Transmitter) state = polqkd::apply(comp.op, state);
    std::optional<JonesVectord> received = transmit_at_angle(state, r.theta, cfg.channel, rng);
    if (received && cfg.placement == Placement::Receiver) received = polqkd::apply(comp.op, *received);
    r.lost = !received.has_value();

    if (cfg.protocol == Protocol::BB84) {
      r.bob_basis = uniform(rng) < 0.5 ? cfg.bases.first : cfg.bases.second;
      if (received) {
        const auto [first, second] = basis_states(*r.bob_basis);
        const int outcome = measure_in_basis(canonical_basis<double>(first, second), *received, rng);
        r.measured_label = outcome == 0 ? first : second;
        r.decoded_bit = table_for(*r.bob_basis).decode(*r.measured_label);
      }
    } else {
      r.bob_projector = uniform(rng) < cfg.b92_projector_bias ? projectors[0] : projectors[1];
      if (received) {
        r.click = measure_projector(canonical_state<double>(r.bob_projector->target), *received, rng);
        r.decoded_bit = b92_decode(*r.click, *r.bob_projector);
      }
    }
    return r;
  }
};

}  // namespace

std::vector<CodingTable> receiver_tables(const SessionConfig& cfg) {
  const bool raw = uses_transmitter_maps(cfg);
  if (cfg.protocol == Protocol::BB84) {
    auto table = [&](Bb84Basis b) { return raw ? bb84_transmitter_table(b) : bb84_receiver_table(b, cfg.tracking); };
    return {table(cfg.bases.first), table(cfg.bases.second)};
  }
  // Without tracking the receiver uses the projectors of the untransformed frame.
  CodingTable t = b92_receiver_table(cfg.scheme, raw ? TrackingMode::Faraday : cfg.tracking);
  if (raw) t.mode = TrackingMode::None;
  return {t};
}

PulseRecord simulate_pulse(const SessionConfig& cfg, std::size_t index) {
  cfg.validate();
  return Prepared(cfg).simulate(index);
}

SessionResult run_session(const SessionConfig& cfg) {
  cfg.validate();
  const Prepared prepared(cfg);

  SessionResult result;
  result.config = cfg;
  result.coding_tables = prepared.tables;
  result.pulse_log.resize(cfg.pulses);

  const unsigned workers = std::min<std::size_t>(cfg.workers, cfg.pulses);
  auto run_range = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) result.pulse_log[i] = prepared.simulate(i);
  };
  if (workers <= 1) {
    run_range(0, cfg.pulses);
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (cfg.pulses + workers - 1) / workers;
    for (std::size_t begin = 0; begin < cfg.pulses; begin += chunk)
      pool.emplace_back(run_range, begin, std::min(cfg.pulses, begin + chunk));
  }

  const SiftedKeys keys = sift(result.pulse_log, cfg.protocol);
  result.alice_sifted = keys.alice;
  result.bob_sifted = keys.bob;

  for (const PulseRecord& r : result.pulse_log) {
    result.lost += r.lost;
    if (cfg.protocol == Protocol::B92 && !r.lost && r.bob_projector->bit == r.alice_bit) {
      ++result.b92_matching_trials;
      result.b92_matching_clicks += *r.click;
    }
    if (!r.sifted) continue;
    const std::string key = cfg.protocol == Protocol::BB84 ? std::string(to_string(*r.alice_basis))
                                                           : std::string(to_string(r.bob_projector->target));
    BasisStats& stats = result.per_basis[key];
    ++stats.sifted;
    stats.errors += *r.bob_bit != r.alice_bit;
  }

  result.sift_rate = static_cast<double>(keys.alice.size()) / static_cast<double>(cfg.pulses);
  if (keys.alice.empty()) throw QberUndefined("session sifted zero bits; QBER is undefined");
  result.qber = qber(keys.alice, keys.bob);
  return result;
}

}  // namespace polqkd
