#include "polqkd/config.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace polqkd;

namespace {

KeyValues parse(const std::string& text) {
  std::istringstream in(text);
  return parse_key_values(in);
}

}  // namespace

TEST_CASE("flat keys and section headers") {
  const KeyValues kv = parse(R"(
# BB84 over a ramping channel
protocol = BB84
bb84.bases = diagonal, circular

[tracking]
mode = faraday     # rotator at the receiver
verdet = 3.5
length = 0.02

[channel]
profile = constant
theta0 = 0.8
)");
  CHECK(kv.at("bb84.bases") == "diagonal, circular");
  CHECK(kv.at("tracking.mode") == "faraday");
  CHECK(kv.at("channel.theta0") == "0.8");

  const SessionConfig cfg = session_config_from(kv);
  CHECK(cfg.protocol == Protocol::BB84);
  CHECK(cfg.bases.first == Bb84Basis::Diagonal);
  CHECK(cfg.bases.second == Bb84Basis::Circular);
  CHECK(cfg.tracking == TrackingMode::Faraday);
  REQUIRE(cfg.medium);
  CHECK(cfg.medium->verdet == 3.5);
  CHECK(std::get<ConstantProfile>(cfg.channel.profile).theta0 == 0.8);
  CHECK(cfg.pulses == 10000);
  CHECK(cfg.seed == 1);
}

TEST_CASE("defaults build a valid half-wave plate BB84 session") {
  const SessionConfig cfg = session_config_from({});
  CHECK(cfg.tracking == TrackingMode::HalfWavePlate);
  CHECK(std::holds_alternative<LinearRampProfile>(cfg.channel.profile));
  CHECK(std::get<LinearRampProfile>(cfg.channel.profile).rate == 0.01);
}

TEST_CASE("malformed files are config errors") {
  CHECK_THROWS_AS(parse("protocol BB84\n"), ConfigError);
  CHECK_THROWS_AS(parse("[channel\nloss = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse("nonsense.key = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse("protocol = BB84\nprotocol = B92\n"), ConfigError);
}

TEST_CASE("bad values are config errors") {
  CHECK_THROWS_AS(session_config_from({{"protocol", "E91"}}), ConfigError);
  CHECK_THROWS_AS(session_config_from({{"session.pulses", "-5"}}), ConfigError);
  CHECK_THROWS_AS(session_config_from({{"session.pulses", "0"}}), ConfigError);
  CHECK_THROWS_AS(session_config_from({{"channel.loss", "lots"}}), ConfigError);
  CHECK_THROWS_AS(session_config_from({{"tracking.mode", "faraday"}}), ConfigError);
  CHECK_THROWS_AS(session_config_from({{"tracking.mode", "faraday"}, {"tracking.verdet", "1"}}), ConfigError);
  CHECK_THROWS_AS(session_config_from({{"bb84.bases", "diagonal"}}), ConfigError);
  CHECK_THROWS_AS(session_config_from({{"b92.scheme", "V/R"}, {"protocol", "B92"}}), ConfigError);
  CHECK_THROWS_AS(session_config_from({{"channel.profile", "spiral"}}), ConfigError);
  CHECK_THROWS_AS(session_config_from({{"channel.profile", "table"}}), ConfigError);
  CHECK_THROWS_AS(session_config_from({{"bogus", "1"}}), ConfigError);
}

TEST_CASE("table profiles from a CSV file relative to the config directory") {
  const auto dir = std::filesystem::temp_directory_path() / "polqkd_config_test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream(dir / "pass.csv") << "t_seconds,theta_radians\n0,0\n10,1\n";
  }
  const SessionConfig cfg =
      session_config_from({{"channel.profile", "table"}, {"channel.table", "pass.csv"}}, dir);
  const auto& table = std::get<TableProfile>(cfg.channel.profile);
  REQUIRE(table.samples.size() == 2);
  CHECK(theta_at(cfg.channel.profile, 5.0) == doctest::Approx(0.5));
  CHECK_THROWS_AS(session_config_from({{"channel.profile", "table"}, {"channel.table", "missing.csv"}}, dir),
                  ConfigError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("property: config echo round-trips through key/values") {
  const std::vector<KeyValues> inputs{
      {},
      {{"protocol", "B92"}, {"b92.scheme", "D45/L"}, {"tracking.mode", "faraday"}, {"tracking.verdet", "-2.5"},
       {"tracking.length", "0.125"}, {"channel.profile", "sinusoid"}, {"channel.amplitude", "0.7"},
       {"channel.period", "300"}, {"channel.phase", "0.1"}, {"session.seed", "18446744073709551615"}},
      {{"channel.profile", "table"}, {"channel.table_samples", "0:0; 1:0.25; 4:-1"},
       {"session.receiver_table", "transmitter_table"}, {"session.qber_threshold", "0.11"}},
  };
  for (const KeyValues& in : inputs) {
    const KeyValues echo = to_key_values(session_config_from(in));
    KeyValues nonempty;
    for (const auto& [k, v] : echo)
      if (!v.empty()) nonempty[k] = v;
    CHECK(to_key_values(session_config_from(nonempty)) == echo);
  }
}

TEST_CASE("every documented key is accepted") {
  for (const ConfigKey& key : config_keys()) {
    std::istringstream in(std::string(key.key) + " = " + std::string(key.default_value) + "\n");
    CHECK_NOTHROW(parse_key_values(in));
  }
}
