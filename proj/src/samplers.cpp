#include "arboreal/samplers.hpp"

#include <cassert>

namespace arboreal {
namespace {

void check_table(const TreeShape& shape, const KernelTable<double>& table) {
  if (table.depth() != shape.depth() || table.d != shape.d()) {
    throw std::invalid_argument("kernel table does not match the shape");
  }
}

// Samples the blocks of vertices [begin, end) at level k.
void sample_level_range(const TreeShape& shape, const KernelTable<double>& table, const CounterRng& rng,
                        int k, std::uint64_t begin, std::uint64_t end, std::vector<EdgeState>& states) {
  const int d = shape.d();
  const auto du = static_cast<std::uint64_t>(d);
  const std::uint64_t child_base = shape.level_offset(k + 1);
  const std::uint64_t parent_base = k == 0 ? 0 : shape.level_offset(k);
  const std::uint64_t first_vertex = shape.vertices_above(k);
  const KernelParams<double>& kp = table.at(k);
  for (std::uint64_t i = begin; i < end; ++i) {
    const EdgeState parent = k == 0 ? EdgeState::closed : states[parent_base + i];
    sample_block(parent, kp, d, rng, first_vertex + i, states.data() + child_base + i * du);
  }
}

constexpr std::uint64_t kParallelLevelThreshold = 4096;

}  // namespace

KernelTable<double> kernel_table_for(const SamplerSpec& spec) {
  const GasParams<double> params = spec.params();
  return spec.shape.wired() ? finite_kernel_table(spec.shape.depth(), params)
                            : limit_kernel_table(spec.shape.depth(), params);
}

StateConfig sample_states(const TreeShape& shape, const KernelTable<double>& table, std::uint64_t seed) {
  check_table(shape, table);
  StateConfig sc(shape);
  const CounterRng rng(seed, shape.d());
  for (int k = 0; k < shape.depth(); ++k) {
    const std::uint64_t width = shape.level_width(k);
    if (width < kParallelLevelThreshold) {
      sample_level_range(shape, table, rng, k, 0, width, sc.states);
      continue;
    }
    const auto chunks = static_cast<std::int64_t>((width + 1023) / 1024);
#pragma omp parallel for schedule(static)
    for (std::int64_t c = 0; c < chunks; ++c) {
      const std::uint64_t begin = static_cast<std::uint64_t>(c) * 1024;
      sample_level_range(shape, table, rng, k, begin, std::min(width, begin + 1024), sc.states);
    }
  }
  assert(satisfies_invariants(sc));
  return sc;
}

StateConfig sample_states_serial(const TreeShape& shape, const KernelTable<double>& table,
                                 std::uint64_t seed) {
  check_table(shape, table);
  StateConfig sc(shape);
  const CounterRng rng(seed, shape.d());
  for (int k = 0; k < shape.depth(); ++k) {
    sample_level_range(shape, table, rng, k, 0, shape.level_width(k), sc.states);
  }
  assert(satisfies_invariants(sc));
  return sc;
}

StateConfig sample_states_finite(const SamplerSpec& spec, std::uint64_t replica) {
  if (!spec.shape.wired()) throw std::invalid_argument("finite sampler needs a wired shape");
  return sample_states(spec.shape, kernel_table_for(spec), spec.replica_seed(replica));
}

StateConfig sample_states_limit(const SamplerSpec& spec, std::uint64_t replica) {
  if (spec.shape.wired()) throw std::invalid_argument("limit sampler needs a window shape");
  return sample_states(spec.shape, kernel_table_for(spec), spec.replica_seed(replica));
}

ForestConfig phi_inverse(const StateConfig& sc) {
  if (!satisfies_invariants(sc)) throw std::invalid_argument("state configuration violates the chain invariants");
  ForestConfig config(sc.shape);
  for (std::size_t i = 0; i < sc.states.size(); ++i) {
    config.bits[i] = sc.states[i] == EdgeState::closed ? 0 : 1;
  }
  return config;
}

void for_each_valid_state_config(const TreeShape& shape, const std::function<void(const StateConfig&)>& fn) {
  const int d = shape.d();
  const auto du = static_cast<std::uint64_t>(d);
  // Admissible child patterns per parent state, as base-3 digits.
  std::vector<std::vector<EdgeState>> patterns;
  {
    std::vector<EdgeState> pattern(d);
    std::uint64_t total = 1;
    for (int j = 0; j < d; ++j) total *= 3;
    for (std::uint64_t code = 0; code < total; ++code) {
      std::uint64_t c = code;
      for (int j = 0; j < d; ++j, c /= 3) pattern[j] = static_cast<EdgeState>(c % 3);
      patterns.push_back(pattern);
    }
  }
  const std::uint64_t vertices = shape.vertices_above(shape.depth());
  StateConfig sc(shape);

  // Vertex v (level order) owns the child block at flat [v*d, v*d + d).
  std::function<void(std::uint64_t, int, std::uint64_t)> assign = [&](std::uint64_t v, int level,
                                                                       std::uint64_t level_end) {
    if (v == vertices) {
      if (satisfies_invariants(sc)) fn(sc);
      return;
    }
    if (v == level_end) {
      assign(v, level + 1, level_end + shape.level_width(level + 1));
      return;
    }
    const EdgeState parent = level == 0 ? EdgeState::closed : sc.states[v - 1];
    const bool deepest = level + 1 == shape.depth();
    for (const auto& pattern : patterns) {
      int surviving = 0;
      int extinct = 0;
      for (EdgeState s : pattern) {
        surviving += s == EdgeState::open_surviving;
        extinct += s == EdgeState::open_extinct;
      }
      if (surviving > 1) continue;
      if (parent == EdgeState::open_extinct && surviving != 0) continue;
      if (parent == EdgeState::open_surviving && surviving != 1) continue;
      if (shape.wired() && deepest && extinct != 0) continue;
      std::copy(pattern.begin(), pattern.end(), sc.states.begin() + static_cast<std::ptrdiff_t>(v * du));
      assign(v + 1, level, level_end);
    }
  };
  if (shape.depth() == 0) {
    fn(sc);
    return;
  }
  assign(0, 0, 1);
}

}  // namespace arboreal
