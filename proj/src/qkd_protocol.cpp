#include "polqkd/qkd_protocol.hpp"

#include <algorithm>
#include <stdexcept>

namespace polqkd {

std::string_view to_string(Protocol protocol) { return protocol == Protocol::BB84 ? "BB84" : "B92"; }

Protocol parse_protocol(std::string_view text) {
  if (text == "BB84" || text == "bb84") return Protocol::BB84;
  if (text == "B92" || text == "b92") return Protocol::B92;
  throw std::invalid_argument("unknown protocol '" + std::string(text) + "'");
}

std::string_view to_string(Bb84Basis basis) {
  switch (basis) {
    case Bb84Basis::Rectilinear: return "rectilinear";
    case Bb84Basis::Diagonal: return "diagonal";
    case Bb84Basis::Circular: return "circular";
  }
  return "rectilinear";
}

Bb84Basis parse_bb84_basis(std::string_view text) {
  for (Bb84Basis b : kBb84Bases)
    if (text == to_string(b)) return b;
  throw std::invalid_argument("unknown BB84 basis '" + std::string(text) + "'");
}

std::pair<StateLabel, StateLabel> basis_states(Bb84Basis basis) {
  switch (basis) {
    case Bb84Basis::Rectilinear: return {StateLabel::H, StateLabel::V};
    case Bb84Basis::Diagonal: return {StateLabel::D45, StateLabel::D135};
    case Bb84Basis::Circular: return {StateLabel::L, StateLabel::R};
  }
  throw std::invalid_argument("unknown BB84 basis");
}

Bb84Basis basis_of(StateLabel label) {
  switch (label) {
    case StateLabel::H:
    case StateLabel::V: return Bb84Basis::Rectilinear;
    case StateLabel::D45:
    case StateLabel::D135: return Bb84Basis::Diagonal;
    case StateLabel::L:
    case StateLabel::R: return Bb84Basis::Circular;
    case StateLabel::Other: break;
  }
  throw std::invalid_argument("state 'Other' belongs to no basis");
}

void B92Scheme::validate() const {
  if (std::find(std::begin(kB92Schemes), std::end(kB92Schemes), *this) == std::end(kB92Schemes))
    throw std::invalid_argument("unsupported B92 scheme " + name());
}

std::string B92Scheme::name() const {
  return std::string(to_string(one_state)) + "/" + std::string(to_string(zero_state));
}

B92Scheme parse_b92_scheme(std::string_view text) {
  const auto sep = text.find_first_of("/,");
  if (sep == std::string_view::npos) throw std::invalid_argument("B92 scheme must look like 'H/D45'");
  B92Scheme scheme{parse_state_label(text.substr(0, sep)), parse_state_label(text.substr(sep + 1))};
  scheme.validate();
  return scheme;
}

std::optional<Bit> CodingTable::decode(StateLabel label) const {
  for (const CodingEntry& e : entries)
    if (e.label == label) return e.bit;
  return std::nullopt;
}

StateLabel bb84_encode(Bit bit, Bb84Basis basis) {
  if (bit > 1) throw std::invalid_argument("bit must be 0 or 1");
  const auto [one, zero] = basis_states(basis);
  return bit == 1 ? one : zero;
}

CodingTable bb84_transmitter_table(Bb84Basis basis) {
  const auto [one, zero] = basis_states(basis);
  return {Protocol::BB84, std::string(to_string(basis)), TrackingMode::None, {{one, 1}, {zero, 0}}};
}

CodingTable bb84_receiver_table(Bb84Basis basis, TrackingMode mode) {
  if (mode == TrackingMode::None)
    throw std::invalid_argument("no receiver table exists without polarization tracking");
  CodingTable table = bb84_transmitter_table(basis);
  table.mode = mode;
  // The half-wave plate leaves H and V alone but swaps D45/D135 and L/R.
  if (mode == TrackingMode::HalfWavePlate && basis != Bb84Basis::Rectilinear)
    std::swap(table.entries[0].label, table.entries[1].label);
  return table;
}

StateLabel b92_encode(Bit bit, const B92Scheme& scheme) {
  if (bit > 1) throw std::invalid_argument("bit must be 0 or 1");
  scheme.validate();
  return bit == 1 ? scheme.one_state : scheme.zero_state;
}

namespace {

StateLabel orthogonal_partner(StateLabel label) {
  const auto [first, second] = basis_states(basis_of(label));
  return label == first ? second : first;
}

StateLabel hwp_image(StateLabel label) {
  switch (label) {
    case StateLabel::D45: return StateLabel::D135;
    case StateLabel::D135: return StateLabel::D45;
    case StateLabel::L: return StateLabel::R;
    case StateLabel::R: return StateLabel::L;
    default: return label;
  }
}

}  // namespace

std::array<B92Projector, 2> b92_receiver_projectors(const B92Scheme& scheme, TrackingMode mode) {
  scheme.validate();
  if (mode == TrackingMode::None)
    throw std::invalid_argument("no B92 receiver projectors exist without polarization tracking");
  auto arrives_as = [mode](StateLabel sent) { return mode == TrackingMode::HalfWavePlate ? hwp_image(sent) : sent; };
  return {B92Projector{orthogonal_partner(arrives_as(scheme.zero_state)), 1},
          B92Projector{orthogonal_partner(arrives_as(scheme.one_state)), 0}};
}

CodingTable b92_receiver_table(const B92Scheme& scheme, TrackingMode mode) {
  const auto projectors = b92_receiver_projectors(scheme, mode);
  return {Protocol::B92, scheme.name(), mode,
          {{projectors[0].target, projectors[0].bit}, {projectors[1].target, projectors[1].bit}}};
}

std::optional<Bit> b92_decode(bool click, const B92Projector& projector) {
  if (!click) return std::nullopt;
  return projector.bit;
}

SiftedKeys sift(std::vector<PulseRecord>& records, Protocol protocol) {
  SiftedKeys keys;
  for (PulseRecord& r : records) {
    bool keep = !r.lost && r.decoded_bit.has_value();
    if (keep && protocol == Protocol::BB84) keep = r.alice_basis && r.bob_basis && *r.alice_basis == *r.bob_basis;
    r.sifted = keep;
    r.bob_bit = keep ? r.decoded_bit : std::nullopt;
    if (!keep) continue;
    keys.alice.push_back(r.alice_bit);
    keys.bob.push_back(*r.decoded_bit);
    keys.indices.push_back(r.index);
  }
  return keys;
}

std::size_t hamming_distance(const BitString& a, const BitString& b) {
  if (a.size() != b.size()) throw std::invalid_argument("keys differ in length");
  std::size_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
  return d;
}

double qber(const BitString& alice_key, const BitString& bob_key) {
  if (alice_key.empty() && bob_key.empty()) throw std::invalid_argument("QBER is undefined for empty keys");
  return static_cast<double>(hamming_distance(alice_key, bob_key)) / static_cast<double>(alice_key.size());
}

}  // namespace polqkd
