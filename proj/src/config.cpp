#include "polqkd/config.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>

#include <fmt/format.h>

namespace polqkd {

namespace {

constexpr std::array kKeys{
    ConfigKey{"protocol", "BB84", "BB84 or B92"},
    ConfigKey{"bb84.bases", "rectilinear,diagonal", "two distinct bases from rectilinear, diagonal, circular"},
    ConfigKey{"b92.scheme", "H/D45", "B92 state pair (bit 1 / bit 0): H/D45, H/L or D45/L"},
    ConfigKey{"b92.projector_bias", "0.5", "probability that the receiver picks the bit-1 projector"},
    ConfigKey{"tracking.mode", "hwp", "faraday, hwp or none"},
    ConfigKey{"tracking.placement", "receiver", "receiver or transmitter"},
    ConfigKey{"tracking.verdet", "", "Verdet constant in rad/(T m), Faraday mode only"},
    ConfigKey{"tracking.length", "", "rotator medium length in m, Faraday mode only"},
    ConfigKey{"tracking.estimate_sigma", "0", "std-dev of the channel-angle estimate error, rad"},
    ConfigKey{"channel.profile", "linear_ramp", "constant, linear_ramp, sinusoid or table"},
    ConfigKey{"channel.theta0", "0", "initial / constant channel angle, rad"},
    ConfigKey{"channel.rate", "0.01", "linear ramp rate, rad/s (placeholder, not a physical pass)"},
    ConfigKey{"channel.amplitude", "0", "sinusoid amplitude, rad"},
    ConfigKey{"channel.period", "1", "sinusoid period, s"},
    ConfigKey{"channel.phase", "0", "sinusoid phase, rad"},
    ConfigKey{"channel.table", "", "CSV file of (t_seconds, theta_radians) rows"},
    ConfigKey{"channel.table_samples", "", "inline table 't:theta;t:theta;...' (alternative to channel.table)"},
    ConfigKey{"channel.pulse_rate", "1000000", "pulse rate, Hz; pulse n is sent at t = n / rate"},
    ConfigKey{"channel.loss", "0", "photon loss probability"},
    ConfigKey{"channel.jitter_sigma", "0", "std-dev of the per-pulse channel angle jitter, rad"},
    ConfigKey{"session.pulses", "10000", "number of transmitted pulses"},
    ConfigKey{"session.seed", "1", "64-bit master seed"},
    ConfigKey{"session.receiver_table", "paper_remap", "paper_remap or transmitter_table"},
    ConfigKey{"session.qber_threshold", "", "fail the run when QBER exceeds this value"},
    ConfigKey{"session.workers", "1", "worker threads for pulse simulation"},
};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

bool known_key(std::string_view key) {
  return std::any_of(kKeys.begin(), kKeys.end(), [&](const ConfigKey& k) { return k.key == key; });
}

class Reader {
 public:
  explicit Reader(const KeyValues& values) : values_(values) {}

  std::string text(std::string_view key) const {
    if (auto it = values_.find(std::string(key)); it != values_.end()) return it->second;
    for (const ConfigKey& k : kKeys)
      if (k.key == key) return std::string(k.default_value);
    throw ConfigError("unknown config key '" + std::string(key) + "'");
  }

  bool has(std::string_view key) const { return !text(key).empty(); }

  double real(std::string_view key) const {
    const std::string s = text(key);
    double v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
      throw ConfigError(fmt::format("{}: '{}' is not a number", key, s));
    return v;
  }

  std::uint64_t unsigned_integer(std::string_view key) const {
    const std::string s = text(key);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
      throw ConfigError(fmt::format("{}: '{}' is not a non-negative integer", key, s));
    return v;
  }

  template <typename F>
  auto parsed(std::string_view key, F parse) const {
    try {
      return parse(text(key));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(fmt::format("{}: {}", key, e.what()));
    }
  }

 private:
  const KeyValues& values_;
};

TableProfile parse_inline_table(std::string_view text) {
  TableProfile table;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = std::min(text.find(';', pos), text.size());
    const std::string item = trim(text.substr(pos, end - pos));
    pos = end + 1;
    if (item.empty()) continue;
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw ConfigError("table sample '" + item + "' must look like 't:theta'");
    double t = 0, theta = 0;
    const std::string ts = trim(item.substr(0, colon)), vs = trim(item.substr(colon + 1));
    auto r1 = std::from_chars(ts.data(), ts.data() + ts.size(), t);
    auto r2 = std::from_chars(vs.data(), vs.data() + vs.size(), theta);
    if (r1.ec != std::errc{} || r2.ec != std::errc{} || r1.ptr != ts.data() + ts.size() ||
        r2.ptr != vs.data() + vs.size())
      throw ConfigError("table sample '" + item + "' is not numeric");
    table.samples.emplace_back(t, theta);
  }
  return table;
}

std::string num(double v) { return fmt::format("{:.17g}", v); }

}  // namespace

std::span<const ConfigKey> config_keys() { return kKeys; }

KeyValues parse_key_values(std::istream& in) {
  KeyValues values;
  std::string section;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    if (stripped.front() == '[') {
      if (stripped.back() != ']') throw ConfigError(fmt::format("line {}: unterminated section header", line_no));
      section = trim(std::string_view(stripped).substr(1, stripped.size() - 2));
      continue;
    }
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) throw ConfigError(fmt::format("line {}: expected 'key = value'", line_no));
    std::string key = trim(std::string_view(stripped).substr(0, eq));
    if (!section.empty()) key = section + "." + key;
    if (!known_key(key)) throw ConfigError(fmt::format("line {}: unknown key '{}'", line_no, key));
    if (!values.emplace(key, trim(std::string_view(stripped).substr(eq + 1))).second)
      throw ConfigError(fmt::format("line {}: duplicate key '{}'", line_no, key));
  }
  return values;
}

KeyValues read_key_values(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  return parse_key_values(in);
}

SessionConfig session_config_from(const KeyValues& values, const std::filesystem::path& base_dir) {
  for (const auto& [key, value] : values)
    if (!known_key(key)) throw ConfigError("unknown config key '" + key + "'");
  const Reader in(values);
  SessionConfig cfg;

  cfg.protocol = in.parsed("protocol", parse_protocol);
  cfg.bases = in.parsed("bb84.bases", [](const std::string& s) {
    const auto comma = s.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("expected two comma-separated bases");
    return std::pair{parse_bb84_basis(trim(std::string_view(s).substr(0, comma))),
                     parse_bb84_basis(trim(std::string_view(s).substr(comma + 1)))};
  });
  cfg.scheme = in.parsed("b92.scheme", parse_b92_scheme);
  cfg.b92_projector_bias = in.real("b92.projector_bias");

  cfg.tracking = in.parsed("tracking.mode", parse_tracking_mode);
  cfg.placement = in.parsed("tracking.placement", parse_placement);
  if (in.has("tracking.verdet") || in.has("tracking.length")) {
    if (!in.has("tracking.verdet") || !in.has("tracking.length"))
      throw ConfigError("tracking.verdet and tracking.length must be given together");
    cfg.medium = VerdetMedium{in.real("tracking.verdet"), in.real("tracking.length")};
  }
  cfg.estimate_sigma = in.real("tracking.estimate_sigma");

  const std::string profile = in.text("channel.profile");
  if (profile == "constant") {
    cfg.channel.profile = ConstantProfile{in.real("channel.theta0")};
  } else if (profile == "linear_ramp") {
    cfg.channel.profile = LinearRampProfile{in.real("channel.theta0"), in.real("channel.rate")};
  } else if (profile == "sinusoid") {
    cfg.channel.profile =
        SinusoidProfile{in.real("channel.amplitude"), in.real("channel.period"), in.real("channel.phase")};
  } else if (profile == "table") {
    if (in.has("channel.table") == in.has("channel.table_samples"))
      throw ConfigError("table profile needs exactly one of channel.table or channel.table_samples");
    if (in.has("channel.table")) {
      std::filesystem::path p = in.text("channel.table");
      if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
      cfg.channel.profile = in.parsed("channel.table", [&](const std::string&) { return read_theta_table(p); });
    } else {
      cfg.channel.profile = parse_inline_table(in.text("channel.table_samples"));
    }
  } else {
    throw ConfigError("channel.profile: unknown profile '" + profile + "'");
  }
  cfg.channel.pulse_rate = in.real("channel.pulse_rate");
  cfg.channel.loss_probability = in.real("channel.loss");
  cfg.channel.angle_jitter_sigma = in.real("channel.jitter_sigma");

  cfg.pulses = in.unsigned_integer("session.pulses");
  cfg.seed = in.unsigned_integer("session.seed");
  cfg.receiver_table_override = in.parsed("session.receiver_table", parse_receiver_table);
  if (in.has("session.qber_threshold")) cfg.qber_threshold = in.real("session.qber_threshold");
  cfg.workers = static_cast<unsigned>(in.unsigned_integer("session.workers"));

  cfg.validate();
  return cfg;
}

KeyValues to_key_values(const SessionConfig& cfg) {
  KeyValues kv;
  kv["protocol"] = std::string(to_string(cfg.protocol));
  kv["bb84.bases"] = fmt::format("{},{}", to_string(cfg.bases.first), to_string(cfg.bases.second));
  kv["b92.scheme"] = cfg.scheme.name();
  kv["b92.projector_bias"] = num(cfg.b92_projector_bias);
  kv["tracking.mode"] = std::string(to_string(cfg.tracking));
  kv["tracking.placement"] = std::string(to_string(cfg.placement));
  kv["tracking.verdet"] = cfg.medium ? num(cfg.medium->verdet) : "";
  kv["tracking.length"] = cfg.medium ? num(cfg.medium->length) : "";
  kv["tracking.estimate_sigma"] = num(cfg.estimate_sigma);
  std::visit(
      [&](const auto& p) {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, ConstantProfile>) {
          kv["channel.profile"] = "constant";
          kv["channel.theta0"] = num(p.theta0);
        } else if constexpr (std::is_same_v<P, LinearRampProfile>) {
          kv["channel.profile"] = "linear_ramp";
          kv["channel.theta0"] = num(p.theta0);
          kv["channel.rate"] = num(p.rate);
        } else if constexpr (std::is_same_v<P, SinusoidProfile>) {
          kv["channel.profile"] = "sinusoid";
          kv["channel.amplitude"] = num(p.amplitude);
          kv["channel.period"] = num(p.period);
          kv["channel.phase"] = num(p.phase);
        } else {
          kv["channel.profile"] = "table";
          std::string samples;
          for (const auto& [t, theta] : p.samples)
            samples += fmt::format("{}{}:{}", samples.empty() ? "" : ";", num(t), num(theta));
          kv["channel.table_samples"] = samples;
        }
      },
      cfg.channel.profile);
  kv["channel.pulse_rate"] = num(cfg.channel.pulse_rate);
  kv["channel.loss"] = num(cfg.channel.loss_probability);
  kv["channel.jitter_sigma"] = num(cfg.channel.angle_jitter_sigma);
  kv["session.pulses"] = std::to_string(cfg.pulses);
  kv["session.seed"] = std::to_string(cfg.seed);
  kv["session.receiver_table"] =
      std::string(to_string(cfg.receiver_table_override.value_or(ReceiverTable::PaperRemap)));
  kv["session.qber_threshold"] = cfg.qber_threshold ? num(*cfg.qber_threshold) : "";
  kv["session.workers"] = std::to_string(cfg.workers);
  return kv;
}

}  // namespace polqkd
