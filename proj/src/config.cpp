#include "arboreal/config.hpp"

#include <algorithm>
#include <stdexcept>

namespace arboreal {

std::uint64_t ForestConfig::open_count() const {
  return static_cast<std::uint64_t>(std::count_if(bits.begin(), bits.end(), [](auto b) { return b != 0; }));
}

const char* state_label(EdgeState s) {
  switch (s) {
    case EdgeState::closed: return "0'";
    case EdgeState::open_extinct: return "1'";
    case EdgeState::open_surviving: return "2'";
  }
  return "?";
}

std::string to_bit_string(const ForestConfig& config) {
  std::string out(config.bits.size(), '0');
  for (std::size_t i = 0; i < config.bits.size(); ++i) {
    if (config.bits[i] != 0) out[i] = '1';
  }
  return out;
}

ForestConfig forest_from_bit_string(const TreeShape& shape, const std::string& bits) {
  if (bits.size() != shape.edge_count()) throw std::invalid_argument("forest bit string has wrong length");
  ForestConfig config(shape);
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] != '0' && bits[i] != '1') throw std::invalid_argument("forest bit string must be 0/1");
    config.bits[i] = bits[i] == '1' ? 1 : 0;
  }
  return config;
}

bool satisfies_invariants(const StateConfig& sc) {
  const TreeShape& shape = sc.shape;
  if (sc.states.size() != shape.edge_count()) return false;
  const int depth = shape.depth();
  const auto d = static_cast<std::uint64_t>(shape.d());

  // Blocks: children of vertex (k, i) are flat [offset(k+1) + i*d, +d).
  for (int k = 0; k < depth; ++k) {
    const std::uint64_t width = shape.level_width(k);
    const std::uint64_t child_base = shape.level_offset(k + 1);
    const std::uint64_t parent_base = k == 0 ? 0 : shape.level_offset(k);
    for (std::uint64_t i = 0; i < width; ++i) {
      const EdgeState parent = k == 0 ? EdgeState::closed : sc.states[parent_base + i];
      int surviving = 0;
      int extinct = 0;
      for (std::uint64_t j = 0; j < d; ++j) {
        const EdgeState c = sc.states[child_base + i * d + j];
        if (static_cast<std::uint8_t>(c) > 2) return false;
        surviving += c == EdgeState::open_surviving;
        extinct += c == EdgeState::open_extinct;
      }
      if (surviving > 1) return false;
      if (parent == EdgeState::open_extinct && surviving != 0) return false;
      if (parent == EdgeState::open_surviving && surviving != 1) return false;
      if (shape.wired() && k + 1 == depth && extinct != 0) return false;
    }
  }
  return true;
}

}  // namespace arboreal
