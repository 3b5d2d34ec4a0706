// polqkd: polarization-tracked QKD session simulator.
//
//   polqkd run --config session.cfg [--seed N] [--output-dir D] [--set key=value]... [--<key> value]...
//   polqkd table [--theta T]... [--vectors]
//   polqkd verify [--mutation hwp_sign_flip]
//
// Exit codes: 0 success, 1 invariant or QBER-contract failure, 2 config error.

#include "polqkd/config.hpp"
#include "polqkd/report.hpp"
#include "polqkd/session.hpp"
#include "polqkd/verify.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstdint>
#include <deque>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitConfigError = 2;

struct RunOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string output_dir = "polqkd_out";
  std::vector<std::string> sets;
  std::deque<std::pair<std::string, std::string>> key_flags;  // stable addresses for CLI11
};

int run_command(RunOptions& opts) {
  using namespace polqkd;
  SessionConfig cfg;
  try {
    KeyValues values;
    std::filesystem::path base_dir;
    if (!opts.config_path.empty()) {
      values = read_key_values(opts.config_path);
      base_dir = std::filesystem::path(opts.config_path).parent_path();
    }
    for (const std::string& assignment : opts.sets) {
      const auto eq = assignment.find('=');
      if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + assignment + "'");
      values[assignment.substr(0, eq)] = assignment.substr(eq + 1);
    }
    for (const auto& [key, value] : opts.key_flags)
      if (!value.empty()) values[key] = value;
    if (opts.seed) values["session.seed"] = std::to_string(*opts.seed);
    cfg = session_config_from(values, base_dir);
  } catch (const std::exception& e) {
    fmt::print(stderr, "config error: {}\n", e.what());
    return kExitConfigError;
  }

  try {
    const SessionResult result = run_session(cfg);
    write_session_outputs(result, opts.output_dir);
    fmt::print("protocol {} tracking {} pulses {} sifted {} qber {:.6g}\n", to_string(cfg.protocol),
               to_string(cfg.tracking), cfg.pulses, result.alice_sifted.size(), result.qber);
    for (const auto& [name, stats] : result.per_basis)
      fmt::print("  {:<12} sifted {:>8} qber {:.6g}\n", name, stats.sifted, stats.qber());
    fmt::print("outputs written to {}\n", opts.output_dir);
    if (cfg.qber_threshold && result.qber > *cfg.qber_threshold) {
      fmt::print(stderr, "qber {:.6g} exceeds threshold {:.6g}\n", result.qber, *cfg.qber_threshold);
      return kExitFailure;
    }
  } catch (const QberUndefined& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitFailure;
  } catch (const ConfigError& e) {
    fmt::print(stderr, "config error: {}\n", e.what());
    return kExitConfigError;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitFailure;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Polarization-tracked BB84/B92 session simulator"};
  app.require_subcommand(1);

  RunOptions run_opts;
  auto* run = app.add_subcommand("run", "Simulate one key-distribution session");
  run->add_option("--config", run_opts.config_path, "Session config file")->check(CLI::ExistingFile);
  run->add_option("--seed", run_opts.seed, "Master seed (overrides session.seed)");
  run->add_option("--output-dir", run_opts.output_dir, "Directory for pulses.csv and summary.json")
      ->capture_default_str();
  run->add_option("--set", run_opts.sets, "Override any config key: key=value");
  for (const polqkd::ConfigKey& key : polqkd::config_keys()) {
    auto& slot = run_opts.key_flags.emplace_back(std::string(key.key), std::string());
    run->add_option("--" + slot.first, slot.second, std::string(key.help))->group("Config overrides");
  }

  std::vector<double> thetas{0.3, 1.7, 4.2};
  bool vectors = false;
  auto* table = app.add_subcommand("table", "Print the six-state transform table for every tracking mode");
  table->add_option("--theta", thetas, "Sample channel angles in radians")->capture_default_str();
  table->add_flag("--vectors", vectors, "Also print the output Jones vectors");

  std::string mutation;
  std::uint64_t verify_seed = 2024;
  int samples = 100;
  auto* verify = app.add_subcommand("verify", "Run the invariant self-checks");
  verify->add_option("--mutation", mutation, "Negative control: hwp_sign_flip");
  verify->add_option("--seed", verify_seed, "Seed for the random sample angles")->capture_default_str();
  verify->add_option("--samples", samples, "Random samples per check")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfigError;
  }

  if (*run) return run_command(run_opts);

  if (*table) {
    try {
      std::cout << polqkd::format_transform_table(polqkd::transform_table(thetas), vectors);
    } catch (const std::exception& e) {
      fmt::print(stderr, "error: {}\n", e.what());
      return kExitConfigError;
    }
    return 0;
  }

  polqkd::OperatorSet ops;
  try {
    ops = polqkd::mutated_operators(polqkd::parse_mutation(mutation));
  } catch (const std::exception& e) {
    fmt::print(stderr, "config error: {}\n", e.what());
    return kExitConfigError;
  }
  const polqkd::VerifyReport report = polqkd::verify(ops, verify_seed, samples);
  std::cout << report.format();
  return report.passed() ? 0 : kExitFailure;
}
