// Jones-calculus kernel: pure polarization states, 2x2 optical operators,
// projection and Born-rule measurement.
//
// Conventions (fixed for the whole library):
//   H = (1, 0)            V = (0, 1)
//   D45 = (1, 1)/sqrt2    D135 = (-1, 1)/sqrt2
//   L = (1, i)/sqrt2      R = (1, -i)/sqrt2
//   rotation(t) = [[cos t, -sin t], [sin t, cos t]]
//   half-wave plate with fast axis at a:
//                 [[cos 2a,  sin 2a], [sin 2a, -cos 2a]]
//
// With this triple the rotation leaves L and R fixed up to a global phase, and
// every half-wave plate swaps L and R while mirroring linear states about its
// axis. State comparisons are always phase-insensitive.
#pragma once

#include <Eigen/Dense>

#include <cctype>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

#include <fmt/format.h>

namespace polqkd {

template <typename Scalar>
using JonesVector = Eigen::Matrix<std::complex<Scalar>, 2, 1>;

template <typename Scalar>
using JonesMatrix = Eigen::Matrix<std::complex<Scalar>, 2, 2>;

using JonesVectord = JonesVector<double>;
using JonesMatrixd = JonesMatrix<double>;

enum class StateLabel { H, V, D45, D135, L, R, Other };

inline constexpr StateLabel kNamedStates[] = {StateLabel::H,   StateLabel::V, StateLabel::D45,
                                              StateLabel::D135, StateLabel::L, StateLabel::R};

inline std::string_view to_string(StateLabel label) {
  switch (label) {
    case StateLabel::H: return "H";
    case StateLabel::V: return "V";
    case StateLabel::D45: return "D45";
    case StateLabel::D135: return "D135";
    case StateLabel::L: return "L";
    case StateLabel::R: return "R";
    case StateLabel::Other: return "Other";
  }
  return "Other";
}

/// Parses "H", "V", "D45", "D135", "L", "R" (case-insensitive). Throws on anything else.
inline StateLabel parse_state_label(std::string_view text) {
  std::string upper(text);
  for (char& ch : upper) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  for (StateLabel label : {StateLabel::H, StateLabel::V, StateLabel::D45, StateLabel::D135, StateLabel::L,
                           StateLabel::R})
    if (upper == to_string(label)) return label;
  throw std::invalid_argument("unknown polarization state '" + std::string(text) + "'");
}

/// Comparison tolerance for phase-insensitive state equality.
struct PhaseTolerance {
  double eps = 1e-9;

  explicit PhaseTolerance(double e = 1e-9) : eps(e) {
    if (!(eps > 0.0)) throw std::invalid_argument("PhaseTolerance: eps must be positive");
  }
};

/// Tolerance used to accept an operator as unitary or a basis as orthonormal.
inline constexpr double kStructureTolerance = 1e-9;

namespace detail {

template <typename Scalar>
void require_finite(Scalar value, const char* what) {
  if (!std::isfinite(value)) throw std::invalid_argument(std::string(what) + ": angle must be finite");
}

}  // namespace detail

template <typename Scalar = double>
JonesVector<Scalar> canonical_state(StateLabel label) {
  using C = std::complex<Scalar>;
  const Scalar s = Scalar(1) / std::sqrt(Scalar(2));
  JonesVector<Scalar> v;
  switch (label) {
    case StateLabel::H: v << C(1, 0), C(0, 0); break;
    case StateLabel::V: v << C(0, 0), C(1, 0); break;
    case StateLabel::D45: v << C(s, 0), C(s, 0); break;
    case StateLabel::D135: v << C(-s, 0), C(s, 0); break;
    case StateLabel::L: v << C(s, 0), C(0, s); break;
    case StateLabel::R: v << C(s, 0), C(0, -s); break;
    case StateLabel::Other: throw std::invalid_argument("canonical_state: 'Other' has no canonical vector");
  }
  return v;
}

/// Linear polarization at `angle` radians from horizontal: (cos, sin).
template <typename Scalar>
JonesVector<Scalar> linear_state(Scalar angle) {
  detail::require_finite(angle, "linear_state");
  JonesVector<Scalar> v;
  v << std::complex<Scalar>(std::cos(angle), 0), std::complex<Scalar>(std::sin(angle), 0);
  return v;
}

/// Channel rotation of the polarization frame by `theta`.
template <typename Scalar>
JonesMatrix<Scalar> rotation_operator(Scalar theta) {
  detail::require_finite(theta, "rotation_operator");
  const Scalar c = std::cos(theta);
  const Scalar s = std::sin(theta);
  JonesMatrix<Scalar> m;
  m << c, -s, s, c;
  return m;
}

/// Faraday rotator turning the polarization plane by `beta`. Same matrix form
/// as a rotation; the field that produces `beta` lives in tracking.
template <typename Scalar>
JonesMatrix<Scalar> faraday_operator(Scalar beta) {
  detail::require_finite(beta, "faraday_operator");
  return rotation_operator(beta);
}

/// Half-wave plate with its axis at `axis_angle`: linear(phi) -> linear(2a - phi), L <-> R.
template <typename Scalar>
JonesMatrix<Scalar> hwp_operator(Scalar axis_angle) {
  detail::require_finite(axis_angle, "hwp_operator");
  const Scalar c = std::cos(2 * axis_angle);
  const Scalar s = std::sin(2 * axis_angle);
  JonesMatrix<Scalar> m;
  m << c, s, s, -c;
  return m;
}

template <typename Derived>
bool is_unitary(const Eigen::MatrixBase<Derived>& m, double tol = kStructureTolerance) {
  using Matrix = typename Derived::PlainObject;
  return (m.adjoint() * m - Matrix::Identity()).cwiseAbs().maxCoeff() <= tol;
}

/// Operator product: `outer` acts after `inner`.
template <typename Scalar>
JonesMatrix<Scalar> compose(const JonesMatrix<Scalar>& outer, const JonesMatrix<Scalar>& inner) {
  return outer * inner;
}

/// Unitary evolution of a state. Projectors go through `project` instead.
template <typename Scalar>
JonesVector<Scalar> apply(const JonesMatrix<Scalar>& op, const JonesVector<Scalar>& state) {
  if (!is_unitary(op)) throw std::invalid_argument("apply: operator is not unitary");
  JonesVector<Scalar> out = op * state;
  const Scalar n = out.norm();
  if (std::abs(n - state.norm()) > kStructureTolerance)
    throw std::invalid_argument("apply: operator changed the state norm");
  return out / n;
}

template <typename Scalar>
struct Projection {
  std::complex<Scalar> amplitude;
  JonesVector<Scalar> outcome_state;

  Scalar probability() const { return std::norm(amplitude); }
};

/// <target|input> together with the post-click state.
template <typename Scalar>
Projection<Scalar> project(const JonesVector<Scalar>& target, const JonesVector<Scalar>& input) {
  if (std::abs(target.norm() - Scalar(1)) > kStructureTolerance)
    throw std::invalid_argument("project: target must be normalized");
  return {target.dot(input), target};
}

/// Projector |target><target| as a matrix.
template <typename Scalar>
JonesMatrix<Scalar> projector(const JonesVector<Scalar>& target) {
  return target * target.adjoint();
}

template <typename Scalar>
using Basis = std::pair<JonesVector<Scalar>, JonesVector<Scalar>>;

template <typename Scalar>
bool is_orthonormal(const Basis<Scalar>& basis, double tol = kStructureTolerance) {
  return std::abs(basis.first.norm() - 1) <= tol && std::abs(basis.second.norm() - 1) <= tol &&
         std::abs(basis.first.dot(basis.second)) <= tol;
}

template <typename Scalar>
Basis<Scalar> canonical_basis(StateLabel first, StateLabel second) {
  return {canonical_state<Scalar>(first), canonical_state<Scalar>(second)};
}

/// Born-rule measurement: 0 with probability |<b0|state>|^2, else 1.
/// Consumes exactly one uniform draw from `rng`.
template <typename Scalar, typename Urbg>
int measure_in_basis(const Basis<Scalar>& basis, const JonesVector<Scalar>& state, Urbg& rng) {
  if (!is_orthonormal(basis)) throw std::invalid_argument("measure_in_basis: basis is not orthonormal");
  const Scalar p0 = std::norm(basis.first.dot(state));
  std::uniform_real_distribution<Scalar> uniform(0, 1);
  return uniform(rng) < p0 ? 0 : 1;
}

/// Single projector click with probability |<target|state>|^2. Consumes one draw.
template <typename Scalar, typename Urbg>
bool measure_projector(const JonesVector<Scalar>& target, const JonesVector<Scalar>& state, Urbg& rng) {
  const Scalar p = project(target, state).probability();
  std::uniform_real_distribution<Scalar> uniform(0, 1);
  return uniform(rng) < p;
}

template <typename Scalar>
bool equal_up_to_phase(const JonesVector<Scalar>& a, const JonesVector<Scalar>& b,
                       PhaseTolerance tol = PhaseTolerance{}) {
  return std::abs(a.dot(b)) >= 1 - tol.eps;
}

/// Name of the canonical state matching `state` up to phase, or Other.
/// Linear states at phi and phi + pi get the same label.
template <typename Scalar>
StateLabel classify_state(const JonesVector<Scalar>& state, PhaseTolerance tol = PhaseTolerance{}) {
  for (StateLabel label : kNamedStates)
    if (equal_up_to_phase(canonical_state<Scalar>(label), state, tol)) return label;
  return StateLabel::Other;
}

/// True when a and b agree up to one global phase factor.
template <typename Scalar>
bool matrices_equal_up_to_phase(const JonesMatrix<Scalar>& a, const JonesMatrix<Scalar>& b, double tol) {
  Eigen::Index r = 0, c = 0;
  a.cwiseAbs().maxCoeff(&r, &c);
  if (std::abs(a(r, c)) <= tol) return b.cwiseAbs().maxCoeff() <= tol;
  if (std::abs(b(r, c)) <= tol) return false;
  const std::complex<Scalar> phase = b(r, c) / a(r, c);
  if (std::abs(std::abs(phase) - 1) > tol) return false;
  return (a * phase - b).cwiseAbs().maxCoeff() <= tol;
}

/// "(re+im·i, re+im·i)" with 17 significant digits, as written to logs.
template <typename Scalar>
std::string format_jones(const JonesVector<Scalar>& v) {
  auto component = [](const std::complex<Scalar>& z) {
    return fmt::format("{:.17g}{:+.17g}·i", z.real(), z.imag());
  };
  return fmt::format("({}, {})", component(v(0)), component(v(1)));
}

}  // namespace polqkd
