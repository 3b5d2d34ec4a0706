#include "polqkd/polarization.hpp"
#include "polqkd/rng.hpp"

#include "test_support.hpp"

#include <doctest.h>

#include <limits>

using namespace polqkd;
using polqkd::testing::random_angles;
using polqkd::testing::within_3_sigma;

namespace {

constexpr double kPi = std::numbers::pi;
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

JonesVectord state(StateLabel s) { return canonical_state<double>(s); }

double max_abs_diff(const JonesMatrixd& a, const JonesMatrixd& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("canonical states follow the documented convention") {
  const std::complex<double> i(0, 1);
  CHECK(state(StateLabel::H)(0) == std::complex<double>(1, 0));
  CHECK(state(StateLabel::H)(1) == std::complex<double>(0, 0));
  CHECK(std::abs(state(StateLabel::D45)(0) - kInvSqrt2) < 1e-15);
  CHECK(std::abs(state(StateLabel::D45)(1) - kInvSqrt2) < 1e-15);
  CHECK(std::abs(state(StateLabel::D135)(0) + kInvSqrt2) < 1e-15);
  CHECK(std::abs(state(StateLabel::L)(1) - i * kInvSqrt2) < 1e-15);
  CHECK(std::abs(state(StateLabel::R)(1) + i * kInvSqrt2) < 1e-15);
  CHECK(std::abs(state(StateLabel::D45).dot(state(StateLabel::H)) - kInvSqrt2) < 1e-15);
  CHECK_THROWS_AS(canonical_state<double>(StateLabel::Other), std::invalid_argument);
}

TEST_CASE("six named states: distinct, orthogonal pairs, conjugate bases") {
  const std::pair<StateLabel, StateLabel> pairs[] = {
      {StateLabel::H, StateLabel::V}, {StateLabel::D45, StateLabel::D135}, {StateLabel::L, StateLabel::R}};
  for (StateLabel a : kNamedStates) {
    CHECK(std::abs(state(a).norm() - 1) < 1e-12);
    for (StateLabel b : kNamedStates) {
      if (a == b) continue;
      const double p = std::norm(state(a).dot(state(b)));
      bool same_basis = false;
      for (const auto& [x, y] : pairs) same_basis |= (a == x && b == y) || (a == y && b == x);
      CHECK(p == doctest::Approx(same_basis ? 0.0 : 0.5).epsilon(1e-12));
    }
  }
}

TEST_CASE("linear_state") {
  CHECK(equal_up_to_phase(linear_state(0.0), state(StateLabel::H)));
  CHECK(std::abs(linear_state(0.0)(0) - 1.0) < 1e-15);
  CHECK(std::abs(linear_state(kPi / 2)(1) - 1.0) < 1e-15);
  CHECK(std::abs(linear_state(kPi / 2)(0)) < 1e-15);
  const JonesVectord v = linear_state(3 * kPi / 4);
  CHECK(v(0).real() == doctest::Approx(-kInvSqrt2).epsilon(1e-15));
  CHECK(v(1).real() == doctest::Approx(kInvSqrt2).epsilon(1e-15));
  CHECK_THROWS_AS(linear_state(std::numeric_limits<double>::quiet_NaN()), std::invalid_argument);
  CHECK_THROWS_AS(linear_state(std::numeric_limits<double>::infinity()), std::invalid_argument);
}

TEST_CASE("rotation_operator") {
  CHECK(max_abs_diff(rotation_operator(0.0), JonesMatrixd::Identity()) == 0.0);

  // Oracle: (cos, sin) evaluated directly, not through linear_state.
  const JonesVectord rotated = rotation_operator(kPi / 4) * state(StateLabel::H);
  CHECK(std::abs(rotated(0) - std::cos(kPi / 4)) < 1e-15);
  CHECK(std::abs(rotated(1) - std::sin(kPi / 4)) < 1e-15);

  for (double theta : random_angles(50, 1)) {
    CHECK(equal_up_to_phase<double>(rotation_operator(theta) * state(StateLabel::L), state(StateLabel::L)));
    CHECK(equal_up_to_phase<double>(rotation_operator(theta) * state(StateLabel::R), state(StateLabel::R)));
    const double phi = theta / 3;
    const JonesVectord moved = polqkd::apply(rotation_operator(theta), linear_state(phi));
    CHECK((moved - linear_state(phi + theta)).norm() < 1e-12);
  }
  CHECK_THROWS_AS(rotation_operator(std::numeric_limits<double>::infinity()), std::invalid_argument);
}

TEST_CASE("faraday_operator compensates the channel rotation") {
  CHECK(max_abs_diff(faraday_operator(0.0), JonesMatrixd::Identity()) == 0.0);
  for (double theta : random_angles(50, 2)) {
    const JonesMatrixd m = compose(faraday_operator(-theta), rotation_operator(theta));
    CHECK(matrices_equal_up_to_phase<double>(m, JonesMatrixd::Identity(), 1e-12));
    const double phi = 1.1;
    CHECK(equal_up_to_phase<double>(m * linear_state(phi), linear_state(phi)));
  }
  CHECK_THROWS_AS(faraday_operator(std::numeric_limits<double>::quiet_NaN()), std::invalid_argument);
}

TEST_CASE("hwp_operator mirrors linear states and flips handedness") {
  CHECK(equal_up_to_phase<double>(hwp_operator(0.0) * state(StateLabel::H), state(StateLabel::H)));
  for (double theta : random_angles(50, 3)) {
    const JonesMatrixd m = compose(hwp_operator(theta / 2), rotation_operator(theta));
    CHECK(equal_up_to_phase<double>(m * state(StateLabel::D45), state(StateLabel::D135)));
    CHECK(equal_up_to_phase<double>(m * state(StateLabel::L), state(StateLabel::R)));
    CHECK(equal_up_to_phase<double>(m * state(StateLabel::V), state(StateLabel::V)));
    const double alpha = theta / 5, phi = theta / 7;
    CHECK(equal_up_to_phase<double>(hwp_operator(alpha) * linear_state(phi), linear_state(2 * alpha - phi)));
  }
  CHECK_THROWS_AS(hwp_operator(std::numeric_limits<double>::infinity()), std::invalid_argument);
}

TEST_CASE("compose") {
  const JonesMatrixd m = hwp_operator(0.4) * rotation_operator(1.0);
  CHECK(max_abs_diff(compose<double>(JonesMatrixd::Identity(), m), m) == 0.0);

  // Oracle: the theta = 0 map is the plate at axis 0, diag(1, -1) by hand.
  JonesMatrixd mirror;
  mirror << 1, 0, 0, -1;
  for (double theta : {0.0, 0.3, 1.7}) {
    const JonesMatrixd c = compose(hwp_operator(theta / 2), rotation_operator(theta));
    CHECK(matrices_equal_up_to_phase<double>(c, mirror, 1e-12));
    CHECK(matrices_equal_up_to_phase<double>(c, compose(hwp_operator(0.0), rotation_operator(0.0)), 1e-12));
  }

  const JonesMatrixd a = rotation_operator(0.2), b = hwp_operator(0.9), c = rotation_operator(-1.3);
  CHECK(max_abs_diff(compose<double>(compose(a, b), c), compose<double>(a, compose(b, c))) < 1e-12);
}

TEST_CASE("apply") {
  // apply renormalizes, so states with irrational components may move by an ulp.
  for (StateLabel s : kNamedStates)
    CHECK((polqkd::apply<double>(JonesMatrixd::Identity(), state(s)) - state(s)).norm() < 1e-15);
  const double theta = 0.77;
  CHECK(equal_up_to_phase(polqkd::apply(compose(hwp_operator(theta / 2), rotation_operator(theta)),
                                        state(StateLabel::V)),
                          state(StateLabel::V)));
  const JonesVectord out = polqkd::apply(rotation_operator(2.1), linear_state(0.4));
  CHECK(std::abs(out.norm() - 1) < 1e-12);
  CHECK_THROWS_AS(polqkd::apply(projector(state(StateLabel::H)), state(StateLabel::D45)), std::invalid_argument);
  CHECK_THROWS_AS(polqkd::apply<double>(2.0 * JonesMatrixd::Identity(), state(StateLabel::H)),
                  std::invalid_argument);
}

TEST_CASE("project") {
  const auto p1 = project(state(StateLabel::D45), state(StateLabel::H));
  CHECK(std::abs(p1.amplitude - kInvSqrt2) < 1e-15);
  CHECK((p1.outcome_state - state(StateLabel::D45)).norm() == 0.0);

  const auto p2 = project(state(StateLabel::V), state(StateLabel::D135));
  CHECK(std::abs(p2.amplitude - kInvSqrt2) < 1e-15);
  CHECK(equal_up_to_phase(p2.outcome_state, state(StateLabel::V)));

  CHECK(std::abs(project(state(StateLabel::H), state(StateLabel::V)).amplitude) == 0.0);

  const JonesVectord unnormalized = 2.0 * state(StateLabel::H);
  CHECK_THROWS_AS(project(unnormalized, state(StateLabel::H)), std::invalid_argument);
}

TEST_CASE("projector matrices are idempotent and Hermitian") {
  for (StateLabel s : kNamedStates) {
    const JonesMatrixd p = projector(state(s));
    CHECK(max_abs_diff(p * p, p) < 1e-12);
    CHECK(max_abs_diff(p.adjoint(), p) < 1e-12);
  }
}

TEST_CASE("measure_in_basis") {
  Rng rng(7);
  const auto hv = canonical_basis<double>(StateLabel::H, StateLabel::V);
  for (int i = 0; i < 1000; ++i) CHECK(measure_in_basis(hv, state(StateLabel::H), rng) == 0);

  const auto diag = canonical_basis<double>(StateLabel::D45, StateLabel::D135);
  std::size_t zeros = 0;
  const std::size_t n = 100000;
  for (std::size_t i = 0; i < n; ++i) zeros += measure_in_basis(diag, state(StateLabel::H), rng) == 0;
  CHECK(within_3_sigma(zeros, n, 0.5));

  const auto lr = canonical_basis<double>(StateLabel::L, StateLabel::R);
  for (double theta : random_angles(200, 4)) {
    const JonesVectord in = compose(hwp_operator(theta / 2), rotation_operator(theta)) * state(StateLabel::L);
    CHECK(measure_in_basis(lr, in, rng) == 1);
  }

  const Basis<double> skew{state(StateLabel::H), state(StateLabel::D45)};
  CHECK_THROWS_AS(measure_in_basis(skew, state(StateLabel::H), rng), std::invalid_argument);
}

TEST_CASE("measure_in_basis frequency matches the linear-state overlap") {
  // Oracle: Malus' law cos^2(phi) for a linear state measured in {H, V}.
  Rng rng(11);
  const auto hv = canonical_basis<double>(StateLabel::H, StateLabel::V);
  for (double phi : {0.2, 0.9, 1.3}) {
    std::size_t zeros = 0;
    const std::size_t n = 40000;
    for (std::size_t i = 0; i < n; ++i) zeros += measure_in_basis(hv, linear_state(phi), rng) == 0;
    CHECK(within_3_sigma(zeros, n, std::cos(phi) * std::cos(phi)));
  }
}

TEST_CASE("measurement replays bit-exactly from the seed") {
  const auto diag = canonical_basis<double>(StateLabel::D45, StateLabel::D135);
  Rng a(99), b(99);
  for (int i = 0; i < 500; ++i)
    CHECK(measure_in_basis(diag, state(StateLabel::L), a) == measure_in_basis(diag, state(StateLabel::L), b));
}

TEST_CASE("measure_projector") {
  Rng rng(5);
  for (int i = 0; i < 1000; ++i) {
    CHECK_FALSE(measure_projector(state(StateLabel::D45), state(StateLabel::D135), rng));
    CHECK_FALSE(measure_projector(state(StateLabel::V), state(StateLabel::H), rng));
  }
  std::size_t clicks = 0;
  const std::size_t n = 100000;
  for (std::size_t i = 0; i < n; ++i) clicks += measure_projector(state(StateLabel::D45), state(StateLabel::H), rng);
  CHECK(within_3_sigma(clicks, n, 0.5));
}

TEST_CASE("equal_up_to_phase") {
  CHECK(equal_up_to_phase(state(StateLabel::R), state(StateLabel::R)));
  CHECK(equal_up_to_phase(linear_state(-kPi / 4), linear_state(3 * kPi / 4)));
  CHECK(equal_up_to_phase<double>(std::polar(1.0, 2.3) * state(StateLabel::L), state(StateLabel::L)));
  CHECK_FALSE(equal_up_to_phase(state(StateLabel::H), state(StateLabel::V)));
  CHECK_FALSE(equal_up_to_phase(state(StateLabel::H), state(StateLabel::D45)));
  CHECK_THROWS_AS(PhaseTolerance(0.0), std::invalid_argument);
  CHECK_THROWS_AS(PhaseTolerance(-1e-9), std::invalid_argument);
}

TEST_CASE("classify_state") {
  JonesVectord h;
  h << 1.0, 0.0;
  CHECK(classify_state(h) == StateLabel::H);
  const double theta = 2.2;
  CHECK(classify_state<double>(compose(hwp_operator(theta / 2), rotation_operator(theta)) * state(StateLabel::R)) ==
        StateLabel::L);
  CHECK(classify_state(linear_state(0.3)) == StateLabel::Other);
  // Orientation, not direction: phi and phi + pi share a label.
  CHECK(classify_state(linear_state(kPi / 4 + kPi)) == StateLabel::D45);
  CHECK(classify_state(linear_state(-kPi / 2)) == StateLabel::V);
}

TEST_CASE("format_jones renders 17 significant digits") {
  CHECK(format_jones(state(StateLabel::H)) == "(1+0·i, 0+0·i)");
  CHECK(format_jones(state(StateLabel::R)) == "(0.70710678118654746+0·i, 0-0.70710678118654746·i)");
}

TEST_CASE("parse_state_label") {
  CHECK(parse_state_label("d135") == StateLabel::D135);
  CHECK(parse_state_label("L") == StateLabel::L);
  CHECK_THROWS_AS(parse_state_label("X"), std::invalid_argument);
  CHECK_THROWS_AS(parse_state_label("Other"), std::invalid_argument);
}

TEST_CASE("templated on scalar: long double kernel agrees") {
  const long double theta = 0.9L;
  const JonesMatrix<long double> m = compose(hwp_operator(theta / 2), rotation_operator(theta));
  CHECK(classify_state<long double>(m * canonical_state<long double>(StateLabel::D45)) == StateLabel::D135);
}

// --- properties over random angles -------------------------------------------------------

TEST_CASE("property: operators are unitary") {
  for (double a : random_angles(100, 21)) {
    CHECK(is_unitary(rotation_operator(a), 1e-12));
    CHECK(is_unitary(faraday_operator(a), 1e-12));
    CHECK(is_unitary(hwp_operator(a), 1e-12));
  }
}

TEST_CASE("property: rotation additivity") {
  const auto as = random_angles(100, 22), bs = random_angles(100, 23);
  for (std::size_t i = 0; i < as.size(); ++i)
    CHECK(max_abs_diff(rotation_operator(as[i]) * rotation_operator(bs[i]), rotation_operator(as[i] + bs[i])) <
          1e-12);
}

TEST_CASE("property: half-wave plate involution and handedness swap") {
  for (double a : random_angles(100, 24)) {
    CHECK(matrices_equal_up_to_phase<double>(hwp_operator(a) * hwp_operator(a), JonesMatrixd::Identity(), 1e-12));
    CHECK(equal_up_to_phase<double>(hwp_operator(a) * state(StateLabel::L), state(StateLabel::R)));
    CHECK(equal_up_to_phase<double>(hwp_operator(a) * state(StateLabel::R), state(StateLabel::L)));
  }
}

TEST_CASE("property: mirror law and six-state table") {
  const auto thetas = random_angles(100, 25), phis = random_angles(100, 26);
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    const JonesMatrixd m = compose(hwp_operator(thetas[i] / 2), rotation_operator(thetas[i]));
    CHECK(equal_up_to_phase<double>(m * linear_state(phis[i]), linear_state(-phis[i])));
    CHECK(classify_state<double>(m * state(StateLabel::H)) == StateLabel::H);
    CHECK(classify_state<double>(m * state(StateLabel::V)) == StateLabel::V);
    CHECK(classify_state<double>(m * state(StateLabel::D45)) == StateLabel::D135);
    CHECK(classify_state<double>(m * state(StateLabel::D135)) == StateLabel::D45);
    CHECK(classify_state<double>(m * state(StateLabel::L)) == StateLabel::R);
    CHECK(classify_state<double>(m * state(StateLabel::R)) == StateLabel::L);
  }
}

TEST_CASE("property: Born completeness") {
  const auto thetas = random_angles(100, 27);
  for (double t : thetas) {
    const JonesMatrixd u = hwp_operator(t / 3) * rotation_operator(t);
    const JonesVectord psi = rotation_operator(t / 2) * state(StateLabel::L);
    CHECK(std::norm(u.col(0).dot(psi)) + std::norm(u.col(1).dot(psi)) == doctest::Approx(1.0).epsilon(1e-12));
  }
}
