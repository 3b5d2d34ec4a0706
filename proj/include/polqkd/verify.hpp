// Self-check suite behind `polqkd verify`: the algebraic invariants of the
// Jones kernel and the trackers, plus short noiseless protocol sessions.
#pragma once

#include "polqkd/polarization.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace polqkd {

/// The operator constructors the algebraic checks exercise. Swapping one out
/// (see `mutated_operators`) must make at least one check fail.
struct OperatorSet {
  std::function<JonesMatrixd(double)> rotation = [](double t) { return rotation_operator(t); };
  std::function<JonesMatrixd(double)> faraday = [](double b) { return faraday_operator(b); };
  std::function<JonesMatrixd(double)> hwp = [](double a) { return hwp_operator(a); };
};

/// Documented negative controls for the suite.
enum class Mutation {
  None,
  HwpSignFlip,  ///< off-diagonal signs of the half-wave plate negated
};

Mutation parse_mutation(const std::string& text);
OperatorSet mutated_operators(Mutation mutation);

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerifyReport {
  std::vector<CheckResult> checks;

  bool passed() const;
  std::string format() const;
};

/// Runs every check. Angles are drawn from `seed`; `samples` random angles per check.
VerifyReport verify(const OperatorSet& ops = {}, std::uint64_t seed = 2024, int samples = 100);

}  // namespace polqkd
