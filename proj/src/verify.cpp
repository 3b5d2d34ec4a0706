#include "polqkd/verify.hpp"

#include "polqkd/rng.hpp"
#include "polqkd/session.hpp"
#include "polqkd/tracking.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

namespace polqkd {

Mutation parse_mutation(const std::string& text) {
  if (text.empty() || text == "none") return Mutation::None;
  if (text == "hwp_sign_flip") return Mutation::HwpSignFlip;
  throw std::invalid_argument("unknown mutation '" + text + "'");
}

OperatorSet mutated_operators(Mutation mutation) {
  OperatorSet ops;
  if (mutation == Mutation::HwpSignFlip) {
    ops.hwp = [](double a) {
      JonesMatrixd m = hwp_operator(a);
      m(0, 1) = -m(0, 1);
      m(1, 0) = -m(1, 0);
      return m;
    };
  }
  return ops;
}

bool VerifyReport::passed() const {
  for (const CheckResult& c : checks)
    if (!c.passed) return false;
  return !checks.empty();
}

std::string VerifyReport::format() const {
  std::string out;
  std::size_t failures = 0;
  for (const CheckResult& c : checks) {
    failures += !c.passed;
    out += fmt::format("[{}] {}", c.passed ? "PASS" : "FAIL", c.name);
    if (!c.detail.empty()) out += " -- " + c.detail;
    out += '\n';
  }
  out += fmt::format("{} checks, {} failed\n", checks.size(), failures);
  return out;
}

namespace {

constexpr double kAlgebraTol = 1e-12;

class Checker {
 public:
  Checker(const OperatorSet& ops, std::uint64_t seed, int samples) : ops_(ops), rng_(seed), samples_(samples) {}

  double angle() { return std::uniform_real_distribution<double>(0.0, 2 * std::numbers::pi)(rng_); }

  /// Runs `body` over `samples_` random draws; body returns an error string on failure.
  template <typename Body>
  CheckResult sweep(std::string name, Body body) {
    for (int i = 0; i < samples_; ++i) {
      std::string error = body();
      if (!error.empty()) return {std::move(name), false, error};
    }
    return {std::move(name), true, fmt::format("{} samples", samples_)};
  }

  VerifyReport run() {
    VerifyReport report;
    auto& checks = report.checks;
    const PhaseTolerance tol{};

    checks.push_back(sweep("operators are unitary", [&]() -> std::string {
      const double a = angle();
      for (const auto& [name, m] : {std::pair{"rotation", ops_.rotation(a)}, std::pair{"faraday", ops_.faraday(a)},
                                    std::pair{"hwp", ops_.hwp(a)}})
        if (!is_unitary(m, kAlgebraTol)) return fmt::format("{}({}) is not unitary", name, a);
      return {};
    }));

    checks.push_back(sweep("rotation additivity D(a)D(b) = D(a+b)", [&]() -> std::string {
      const double a = angle(), b = angle();
      const double err = (ops_.rotation(a) * ops_.rotation(b) - ops_.rotation(a + b)).cwiseAbs().maxCoeff();
      return err <= kAlgebraTol ? "" : fmt::format("a={} b={} err={}", a, b, err);
    }));

    checks.push_back(sweep("rotation leaves L and R fixed", [&]() -> std::string {
      const double t = angle();
      for (StateLabel s : {StateLabel::L, StateLabel::R}) {
        const JonesVectord v = canonical_state<double>(s);
        const double overlap = std::abs(v.dot(ops_.rotation(t) * v));
        if (std::abs(overlap - 1) > kAlgebraTol) return fmt::format("theta={} |<{}|D {}>|={}", t, to_string(s), to_string(s), overlap);
      }
      return {};
    }));

    checks.push_back(sweep("half-wave plate is an involution", [&]() -> std::string {
      const double a = angle();
      const JonesMatrixd sq = ops_.hwp(a) * ops_.hwp(a);
      return matrices_equal_up_to_phase<double>(sq, JonesMatrixd::Identity(), kAlgebraTol) ? ""
                                                                                           : fmt::format("axis={}", a);
    }));

    checks.push_back(sweep("half-wave plate swaps L and R", [&]() -> std::string {
      const double a = angle();
      const JonesMatrixd m = ops_.hwp(a);
      const JonesVectord l = canonical_state<double>(StateLabel::L), r = canonical_state<double>(StateLabel::R);
      if (!equal_up_to_phase<double>(m * l, r, tol) || !equal_up_to_phase<double>(m * r, l, tol))
        return fmt::format("axis={}", a);
      return {};
    }));

    checks.push_back(sweep("mirror law hwp(theta/2) D(theta) |phi> = |-phi>", [&]() -> std::string {
      const double t = angle(), phi = angle();
      const JonesVectord out = ops_.hwp(t / 2) * ops_.rotation(t) * linear_state(phi);
      return equal_up_to_phase<double>(out, linear_state(-phi), tol) ? ""
                                                                     : fmt::format("theta={} phi={}", t, phi);
    }));

    checks.push_back(sweep("six-state table under half-wave plate tracking", [&]() -> std::string {
      const double t = angle();
      const JonesMatrixd m = ops_.hwp(t / 2) * ops_.rotation(t);
      const std::pair<StateLabel, StateLabel> expected[] = {
          {StateLabel::H, StateLabel::H},       {StateLabel::V, StateLabel::V}, {StateLabel::D45, StateLabel::D135},
          {StateLabel::D135, StateLabel::D45}, {StateLabel::L, StateLabel::R}, {StateLabel::R, StateLabel::L}};
      for (const auto& [in, out] : expected) {
        const StateLabel got = classify_state<double>(m * canonical_state<double>(in), tol);
        if (got != out)
          return fmt::format("theta={}: {} -> {}, expected {}", t, to_string(in), to_string(got), to_string(out));
      }
      return {};
    }));

    checks.push_back(sweep("Born completeness", [&]() -> std::string {
      const double t = angle(), phi = angle();
      const JonesMatrixd u = ops_.hwp(phi) * ops_.rotation(t);
      const Basis<double> basis{u.col(0), u.col(1)};
      const JonesVectord psi = ops_.rotation(angle()) * canonical_state<double>(StateLabel::L);
      const double total = std::norm(basis.first.dot(psi)) + std::norm(basis.second.dot(psi));
      return std::abs(total - 1) <= kAlgebraTol ? "" : fmt::format("sum={}", total);
    }));

    checks.push_back(sweep("Faraday tracking restores all six states", [&]() -> std::string {
      const double t = angle();
      const JonesMatrixd m = ops_.faraday(normalize_angle(-t)) * ops_.rotation(t);
      for (StateLabel s : kNamedStates) {
        const JonesVectord v = canonical_state<double>(s);
        if (!equal_up_to_phase<double>(m * v, v, tol)) return fmt::format("theta={} state {}", t, to_string(s));
      }
      return {};
    }));

    checks.push_back(sweep("Faraday residual under estimate error is D(-delta)", [&]() -> std::string {
      const double t = angle();
      const double delta = std::normal_distribution<double>(0.0, 0.1)(rng_);
      const JonesMatrixd m = ops_.faraday(normalize_angle(-(t + delta))) * ops_.rotation(t);
      return matrices_equal_up_to_phase<double>(m, ops_.rotation(-delta), 1e-9)
                 ? ""
                 : fmt::format("theta={} delta={}", t, delta);
    }));

    checks.push_back(sweep("Verdet relation round-trip", [&]() -> std::string {
      std::uniform_real_distribution<double> u(0.1, 100.0);
      const VerdetMedium medium{std::uniform_real_distribution<double>(-1.0, 1.0)(rng_) < 0 ? -u(rng_) : u(rng_),
                                u(rng_) * 1e-2};
      const double beta = std::uniform_real_distribution<double>(-std::numbers::pi, std::numbers::pi)(rng_);
      const double back = angle_for_field(field_for_angle(beta, medium), medium);
      return std::abs(back - beta) <= kAlgebraTol ? "" : fmt::format("beta={} back={}", beta, back);
    }));

    append_session_checks(checks);
    return report;
  }

 private:
  void append_session_checks(std::vector<CheckResult>& checks) {
    const std::pair<Bb84Basis, Bb84Basis> pairs[] = {{Bb84Basis::Rectilinear, Bb84Basis::Diagonal},
                                                     {Bb84Basis::Rectilinear, Bb84Basis::Circular},
                                                     {Bb84Basis::Diagonal, Bb84Basis::Circular}};
    auto base = [&](TrackingMode mode) {
      SessionConfig cfg;
      cfg.tracking = mode;
      if (mode == TrackingMode::Faraday) cfg.medium = VerdetMedium{3.0, 0.02};
      cfg.channel.profile = LinearRampProfile{0.2, 0.5};
      cfg.channel.pulse_rate = 1000;
      cfg.pulses = 2000;
      cfg.seed = rng_();
      return cfg;
    };

    CheckResult bb84{"noiseless BB84 sessions have zero QBER", true, {}};
    CheckResult control{"transmitter table under hwp tracking fails off the rectilinear basis", true, {}};
    for (TrackingMode mode : {TrackingMode::Faraday, TrackingMode::HalfWavePlate}) {
      for (const auto& bases : pairs) {
        SessionConfig cfg = base(mode);
        cfg.bases = bases;
        const SessionResult r = run_session(cfg);
        if (r.qber != 0.0 && bb84.passed)
          bb84 = {bb84.name, false, fmt::format("{} {}/{}: qber={}", to_string(mode), to_string(bases.first),
                                                to_string(bases.second), r.qber)};
        if (mode != TrackingMode::HalfWavePlate) continue;
        cfg.receiver_table_override = ReceiverTable::TransmitterTable;
        const SessionResult neg = run_session(cfg);
        for (const auto& [name, stats] : neg.per_basis) {
          const double expected = name == to_string(Bb84Basis::Rectilinear) ? 0.0 : 1.0;
          if (stats.qber() != expected && control.passed)
            control = {control.name, false, fmt::format("basis {} qber={}", name, stats.qber())};
        }
      }
    }
    checks.push_back(bb84);
    checks.push_back(control);

    CheckResult b92{"noiseless B92 clicks never decode the wrong bit", true, {}};
    for (TrackingMode mode : {TrackingMode::Faraday, TrackingMode::HalfWavePlate}) {
      for (const B92Scheme& scheme : kB92Schemes) {
        SessionConfig cfg = base(mode);
        cfg.protocol = Protocol::B92;
        cfg.scheme = scheme;
        const SessionResult r = run_session(cfg);
        if (r.qber != 0.0 && b92.passed)
          b92 = {b92.name, false, fmt::format("{} {}: error rate {}", to_string(mode), scheme.name(), r.qber)};
      }
    }
    checks.push_back(b92);
  }

  const OperatorSet& ops_;
  Rng rng_;
  int samples_;
};

}  // namespace

VerifyReport verify(const OperatorSet& ops, std::uint64_t seed, int samples) {
  return Checker(ops, seed, samples).run();
}

}  // namespace polqkd
