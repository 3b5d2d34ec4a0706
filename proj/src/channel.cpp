#include "polqkd/channel.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>

namespace polqkd {

namespace {

void require_finite(double value, const char* what) {
  if (!std::isfinite(value)) throw std::invalid_argument(std::string(what) + " must be finite");
}

struct ProfileValidator {
  void operator()(const ConstantProfile& p) const { require_finite(p.theta0, "constant theta0"); }
  void operator()(const LinearRampProfile& p) const {
    require_finite(p.theta0, "ramp theta0");
    require_finite(p.rate, "ramp rate");
  }
  void operator()(const SinusoidProfile& p) const {
    require_finite(p.amplitude, "sinusoid amplitude");
    require_finite(p.phase, "sinusoid phase");
    if (!std::isfinite(p.period) || !(p.period > 0)) throw std::invalid_argument("sinusoid period must be positive");
  }
  void operator()(const TableProfile& p) const {
    if (p.samples.empty()) throw std::invalid_argument("theta table is empty");
    for (std::size_t i = 0; i < p.samples.size(); ++i) {
      require_finite(p.samples[i].first, "table time");
      require_finite(p.samples[i].second, "table angle");
      if (i > 0 && !(p.samples[i].first > p.samples[i - 1].first))
        throw std::invalid_argument("theta table times must be strictly increasing");
    }
  }
};

struct ProfileEvaluator {
  double t;

  double operator()(const ConstantProfile& p) const { return p.theta0; }
  double operator()(const LinearRampProfile& p) const { return p.theta0 + p.rate * t; }
  double operator()(const SinusoidProfile& p) const {
    return p.amplitude * std::sin(2 * std::numbers::pi * t / p.period + p.phase);
  }
  double operator()(const TableProfile& p) const {
    const auto& s = p.samples;
    if (s.empty() || t < s.front().first || t > s.back().first)
      throw std::out_of_range("time " + std::to_string(t) + " s lies outside the theta table");
    auto hi = std::lower_bound(s.begin(), s.end(), t, [](const auto& sample, double v) { return sample.first < v; });
    if (hi->first == t) return hi->second;
    auto lo = std::prev(hi);
    const double w = (t - lo->first) / (hi->first - lo->first);
    return lo->second + w * (hi->second - lo->second);
  }
};

std::optional<double> parse_number(std::string field) {
  field.erase(0, field.find_first_not_of(" \t\r"));
  field.erase(field.find_last_not_of(" \t\r") + 1);
  double value = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size() || field.empty()) return std::nullopt;
  return value;
}

}  // namespace

void validate(const ThetaProfile& profile) { std::visit(ProfileValidator{}, profile); }

double theta_at(const ThetaProfile& profile, double t) {
  if (!std::isfinite(t) || t < 0) throw std::invalid_argument("time must be finite and non-negative");
  return std::visit(ProfileEvaluator{t}, profile);
}

TableProfile read_theta_table(std::istream& in) {
  TableProfile table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto comma = line.find(',');
    std::optional<double> t, theta;
    if (comma != std::string::npos) {
      t = parse_number(line.substr(0, comma));
      theta = parse_number(line.substr(comma + 1));
    }
    if (!t || !theta) {
      if (table.samples.empty() && line_no == 1) continue;  // header
      throw std::invalid_argument("theta table line " + std::to_string(line_no) + ": expected 't,theta'");
    }
    table.samples.emplace_back(*t, *theta);
  }
  validate(ThetaProfile{table});
  return table;
}

TableProfile read_theta_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open theta table '" + path.string() + "'");
  return read_theta_table(in);
}

void ChannelConfig::validate() const {
  polqkd::validate(profile);
  if (!std::isfinite(pulse_rate) || !(pulse_rate > 0)) throw std::invalid_argument("pulse_rate must be positive");
  if (!(loss_probability >= 0 && loss_probability <= 1))
    throw std::invalid_argument("loss_probability must lie in [0, 1]");
  if (!std::isfinite(angle_jitter_sigma) || angle_jitter_sigma < 0)
    throw std::invalid_argument("angle_jitter_sigma must be non-negative");
}

std::optional<JonesVectord> transmit_at_angle(const JonesVectord& state, double theta, const ChannelConfig& cfg,
                                              Rng& rng) {
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  const bool lost = uniform(rng) < cfg.loss_probability;
  const double jitter = cfg.angle_jitter_sigma * normal(rng);
  if (lost) return std::nullopt;
  return polqkd::apply(rotation_operator(theta + jitter), state);
}

std::optional<JonesVectord> transmit(const JonesVectord& state, double t, const ChannelConfig& cfg, Rng& rng) {
  return transmit_at_angle(state, theta_at(cfg.profile, t), cfg, rng);
}

}  // namespace polqkd
