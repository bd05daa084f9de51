// Edge configurations on a TreeShape, stored in flat edge order.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "arboreal/tree.hpp"

namespace arboreal {

/// Open/closed flag per edge.
struct ForestConfig {
  TreeShape shape;
  std::vector<std::uint8_t> bits;

  explicit ForestConfig(const TreeShape& s) : shape(s), bits(s.edge_count(), 0) {}
  ForestConfig(const TreeShape& s, std::vector<std::uint8_t> b) : shape(s), bits(std::move(b)) {}

  bool is_open(const EdgeRef& e) const { return bits[flat_index(shape, e)] != 0; }
  std::uint64_t open_count() const;

  friend bool operator==(const ForestConfig&, const ForestConfig&) = default;
};

/// Hidden-chain state of an edge: closed (0'), open without a downward
/// connection to the boundary (1'), open and connected to the boundary
/// through its own subtree (2').
enum class EdgeState : std::uint8_t { closed = 0, open_extinct = 1, open_surviving = 2 };

struct StateConfig {
  TreeShape shape;
  std::vector<EdgeState> states;

  explicit StateConfig(const TreeShape& s) : shape(s), states(s.edge_count(), EdgeState::closed) {}
  StateConfig(const TreeShape& s, std::vector<EdgeState> v) : shape(s), states(std::move(v)) {}

  EdgeState at(const EdgeRef& e) const { return states[flat_index(shape, e)]; }

  friend bool operator==(const StateConfig&, const StateConfig&) = default;
};

/// "0'", "1'" or "2'".
const char* state_label(EdgeState s);

/// One '0'/'1' character per edge.
std::string to_bit_string(const ForestConfig& config);
ForestConfig forest_from_bit_string(const TreeShape& shape, const std::string& bits);

/// Structural invariants of a state configuration:
///   - no child of a 1' edge is 2';
///   - each vertex has at most one 2' child edge (the root included);
///   - a 2' edge whose head is an interior vertex has exactly one 2' child;
///   - in wired shapes, deepest-level edges are never 1'.
/// Window leaves impose no constraint on 2' edges (the spine leaves the window).
bool satisfies_invariants(const StateConfig& sc);

}  // namespace arboreal
