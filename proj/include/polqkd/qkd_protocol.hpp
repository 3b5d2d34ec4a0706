// BB84 and B92 coding rules, receiver-side decoding under each tracking mode,
// sifting and QBER.
//
// Bit conventions: in every pair the state listed first carries bit 1
// (H/V, D45/D135, L/R for BB84; the scheme's one_state for B92).
#pragma once

#include "polqkd/polarization.hpp"
#include "polqkd/tracking.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace polqkd {

enum class Protocol { BB84, B92 };

std::string_view to_string(Protocol protocol);
Protocol parse_protocol(std::string_view text);

enum class Bb84Basis { Rectilinear, Diagonal, Circular };

inline constexpr Bb84Basis kBb84Bases[] = {Bb84Basis::Rectilinear, Bb84Basis::Diagonal, Bb84Basis::Circular};

std::string_view to_string(Bb84Basis basis);
Bb84Basis parse_bb84_basis(std::string_view text);

/// (bit-1 state, bit-0 state) of a BB84 basis.
std::pair<StateLabel, StateLabel> basis_states(Bb84Basis basis);

/// The basis that contains `label`; throws for Other.
Bb84Basis basis_of(StateLabel label);

/// B92 state pair. Only (H, D45), (H, L) and (D45, L) are supported.
struct B92Scheme {
  StateLabel one_state = StateLabel::H;
  StateLabel zero_state = StateLabel::D45;

  void validate() const;
  std::string name() const;  ///< e.g. "H/D45"
  bool operator==(const B92Scheme&) const = default;
};

B92Scheme parse_b92_scheme(std::string_view text);

inline constexpr B92Scheme kB92Schemes[] = {{StateLabel::H, StateLabel::D45},
                                            {StateLabel::H, StateLabel::L},
                                            {StateLabel::D45, StateLabel::L}};

using Bit = std::uint8_t;
using BitString = std::vector<Bit>;

/// One decoding rule: a received state (BB84) or a clicking projector (B92) and the bit it yields.
struct CodingEntry {
  StateLabel label = StateLabel::Other;
  Bit bit = 0;
};

struct CodingTable {
  Protocol protocol = Protocol::BB84;
  std::string context;  ///< basis or scheme name
  TrackingMode mode = TrackingMode::None;
  std::vector<CodingEntry> entries;

  std::optional<Bit> decode(StateLabel label) const;
};

StateLabel bb84_encode(Bit bit, Bb84Basis basis);

/// The transmitter's own map for `basis`.
CodingTable bb84_transmitter_table(Bb84Basis basis);

/// What the receiver must use after the composed tracking map. Identical to the
/// transmitter's table under Faraday tracking; swapped for the diagonal and
/// circular bases under half-wave plate tracking. Throws for TrackingMode::None.
CodingTable bb84_receiver_table(Bb84Basis basis, TrackingMode mode);

StateLabel b92_encode(Bit bit, const B92Scheme& scheme);

struct B92Projector {
  StateLabel target = StateLabel::Other;
  Bit bit = 0;
  bool operator==(const B92Projector&) const = default;
};

/// Receiver projectors for `scheme` under `mode`, bit-1 projector first. Each
/// projector is orthogonal to the tracked image of the opposite bit's state.
std::array<B92Projector, 2> b92_receiver_projectors(const B92Scheme& scheme, TrackingMode mode);

CodingTable b92_receiver_table(const B92Scheme& scheme, TrackingMode mode);

/// A click yields the projector's bit; no click is inconclusive.
std::optional<Bit> b92_decode(bool click, const B92Projector& projector);

struct PulseRecord {
  std::size_t index = 0;
  double t_seconds = 0.0;
  double theta = 0.0;
  Bit alice_bit = 0;
  std::optional<Bb84Basis> alice_basis;  ///< BB84 only
  StateLabel sent_label = StateLabel::Other;
  bool lost = false;
  std::optional<Bb84Basis> bob_basis;    ///< BB84 only
  std::optional<B92Projector> bob_projector;  ///< B92 only
  std::optional<StateLabel> measured_label;   ///< BB84 outcome state
  std::optional<bool> click;                  ///< B92 outcome
  std::optional<Bit> decoded_bit;             ///< Bob's bit before sifting
  bool sifted = false;
  std::optional<Bit> bob_bit;                 ///< present iff sifted
};

struct SiftedKeys {
  BitString alice;
  BitString bob;
  std::vector<std::size_t> indices;  ///< pulse indices, ascending
};

/// BB84 keeps pulses with matching bases, B92 keeps conclusive pulses.
/// Marks kept records as sifted and fills in bob_bit.
SiftedKeys sift(std::vector<PulseRecord>& records, Protocol protocol);

std::size_t hamming_distance(const BitString& a, const BitString& b);

/// Fraction of mismatched positions. Throws on unequal or zero length.
double qber(const BitString& alice_key, const BitString& bob_key);

}  // namespace polqkd
