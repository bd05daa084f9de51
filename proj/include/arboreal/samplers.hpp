// Exact samplers of the hidden three-state chain.
//
// A wired tree of depth n is sampled with the depth-dependent kernels
// finite_kernel(n - k); a window of depth L of the infinite tree is sampled
// with the constant limiting kernel. Both run the same block rule top-down:
//
//   parent 0': with prob. theta one uniform child is 2' and the others are
//              1' w.p. alpha each; otherwise every child is 1' w.p. alpha.
//   parent 1': every child is 1' w.p. alpha.
//   parent 2': one uniform child is 2'; the others are 1' w.p. alpha.
//
// The root's children are drawn as if their parent edge were 0'.
#pragma once

#include <omp.h>

#include <array>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "arboreal/config.hpp"
#include "arboreal/recursion.hpp"
#include "arboreal/rng.hpp"

namespace arboreal {

/// A wired shape selects the finite sampler; a window the limiting one.
struct SamplerSpec {
  TreeShape shape;
  double p = 0.0;
  std::uint64_t master_seed = 0;
  std::uint64_t replicas = 1;

  GasParams<double> params() const { return {shape.d(), p}; }
  std::uint64_t replica_seed(std::uint64_t r) const { return derive_seed(master_seed, r); }
};

KernelTable<double> kernel_table_for(const SamplerSpec& spec);

/// Draws the d children of one vertex into out[0..d).
inline void sample_block(EdgeState parent, const KernelParams<double>& kp, int d,
                         const CounterRng& rng, std::uint64_t vertex, EdgeState* out) {
  int spine = -1;
  if (parent == EdgeState::open_surviving ||
      (parent == EdgeState::closed && rng.uniform(vertex, kSlotSpawn) < kp.theta)) {
    spine = static_cast<int>(static_cast<double>(d) * rng.uniform(vertex, kSlotPick));
    if (spine >= d) spine = d - 1;
  }
  for (int j = 0; j < d; ++j) {
    if (j == spine) {
      out[j] = EdgeState::open_surviving;
    } else {
      out[j] = rng.uniform(vertex, kSlotChild0 + static_cast<std::uint32_t>(j)) < kp.alpha
                   ? EdgeState::open_extinct
                   : EdgeState::closed;
    }
  }
}

/// Level-order sampler, parallel across the vertices of each level.
StateConfig sample_states(const TreeShape& shape, const KernelTable<double>& table, std::uint64_t seed);
/// Serial reference of sample_states; bit-identical output.
StateConfig sample_states_serial(const TreeShape& shape, const KernelTable<double>& table,
                                 std::uint64_t seed);

/// Replica r of a wired-tree spec. Throws std::invalid_argument on a window shape.
StateConfig sample_states_finite(const SamplerSpec& spec, std::uint64_t replica = 0);
/// Replica r of a window spec. Throws std::invalid_argument on a wired shape.
StateConfig sample_states_limit(const SamplerSpec& spec, std::uint64_t replica = 0);

/// 0' -> closed, 1'/2' -> open. Throws std::invalid_argument if the input
/// violates the state invariants.
ForestConfig phi_inverse(const StateConfig& sc);

/// Chain-rule product of block probabilities over every interior vertex.
/// Returns 0 for configurations violating the invariants.
template <class Scalar>
Scalar state_config_probability(const StateConfig& sc, const KernelTable<Scalar>& table) {
  const TreeShape& shape = sc.shape;
  if (table.depth() != shape.depth() || table.d != shape.d()) {
    throw std::invalid_argument("kernel table does not match the shape");
  }
  if (!satisfies_invariants(sc)) return Scalar(0);
  const auto d = static_cast<std::uint64_t>(shape.d());
  Scalar product(1);
  for (int k = 0; k < shape.depth(); ++k) {
    const std::uint64_t child_base = shape.level_offset(k + 1);
    const std::uint64_t parent_base = k == 0 ? 0 : shape.level_offset(k);
    for (std::uint64_t i = 0; i < shape.level_width(k); ++i) {
      const EdgeState parent = k == 0 ? EdgeState::closed : sc.states[parent_base + i];
      product *= kernel_block_probability<Scalar>(
          parent, std::span<const EdgeState>(sc.states.data() + child_base + i * d, d), table.at(k));
      if (product == 0) return product;
    }
  }
  return product;
}

/// Calls fn on every state configuration satisfying the invariants, built
/// block by block. Exponential in the edge count; meant for small shapes.
void for_each_valid_state_config(const TreeShape& shape, const std::function<void(const StateConfig&)>& fn);

/// Streaming visitors override any of these hooks:
///   enter(e, s)        -> whether to sample the block below e's head;
///   block(v, parent, children) after a vertex's children are drawn;
///   leave(e, s)        after e's subtree is finished (or skipped).
struct StreamVisitor {
  bool enter(const EdgeRef&, EdgeState) { return true; }
  void block(const VertexRef&, EdgeState, std::span<const EdgeState>) {}
  void leave(const EdgeRef&, EdgeState) {}
};

struct StreamStats {
  std::uint64_t edges_visited = 0;
  std::uint64_t blocks_sampled = 0;
  std::size_t max_stack = 0;
};

/// Depth-first generation of the same process without materializing it.
/// Memory is one frame of d states per level. Draws come from the same
/// counter-based streams as sample_states, so a full traversal visits
/// exactly the configuration sample_states would return.
template <class Visitor>
StreamStats stream_sample(const TreeShape& shape, const KernelTable<double>& table, std::uint64_t seed,
                          Visitor& visitor) {
  if (table.depth() != shape.depth() || table.d != shape.d()) {
    throw std::invalid_argument("kernel table does not match the shape");
  }
  StreamStats stats;
  const int depth = shape.depth();
  if (depth == 0) return stats;
  const int d = shape.d();
  const CounterRng rng(seed, d);

  std::vector<std::uint64_t> first_vertex(depth + 1);
  for (int k = 0; k <= depth; ++k) first_vertex[k] = shape.vertices_above(k);

  struct Frame {
    EdgeRef edge;  // level 0 marks the root frame
    EdgeState state;
    int next;
    std::array<EdgeState, 64> children;
  };
  if (d > 64) throw std::invalid_argument("streaming supports d <= 64");
  std::vector<Frame> stack;
  stack.reserve(depth);

  stack.push_back(Frame{EdgeRef{0, 0}, EdgeState::closed, 0, {}});
  sample_block(EdgeState::closed, table.at(0), d, rng, 0, stack.back().children.data());
  ++stats.blocks_sampled;
  visitor.block(VertexRef{0, 0}, EdgeState::closed,
                std::span<const EdgeState>(stack.back().children.data(), d));
  stats.max_stack = 1;

  while (!stack.empty()) {
    Frame& top = stack.back();
    if (top.next == d) {
      const Frame done = top;
      stack.pop_back();
      if (done.edge.level > 0) visitor.leave(done.edge, done.state);
      continue;
    }
    const int j = top.next++;
    const EdgeRef child{top.edge.level + 1, top.edge.index * static_cast<std::uint64_t>(d) + j};
    const EdgeState state = top.children[j];
    ++stats.edges_visited;
    if (visitor.enter(child, state) && child.level < depth) {
      Frame frame{child, state, 0, {}};
      const std::uint64_t vertex = first_vertex[child.level] + child.index;
      sample_block(state, table.at(child.level), d, rng, vertex, frame.children.data());
      ++stats.blocks_sampled;
      stack.push_back(frame);
      if (stack.size() > stats.max_stack) stats.max_stack = stack.size();
      visitor.block(VertexRef{child.level, child.index}, state,
                    std::span<const EdgeState>(stack.back().children.data(), d));
    } else {
      visitor.leave(child, state);
    }
  }
  return stats;
}

/// Runs body(replica, accumulator) over all replicas on an OpenMP team with
/// one accumulator per thread, then merges them in thread order. Acc needs
/// merge(const Acc&); integer-valued accumulators make the result
/// independent of the worker count.
template <class Acc, class Body>
Acc reduce_replicas(std::uint64_t replicas, int workers, const Acc& identity, Body&& body) {
  const int threads = workers > 0 ? workers : omp_get_max_threads();
  std::vector<Acc> partial(threads, identity);
#pragma omp parallel for num_threads(threads) schedule(dynamic, 64)
  for (std::int64_t r = 0; r < static_cast<std::int64_t>(replicas); ++r) {
    body(static_cast<std::uint64_t>(r), partial[omp_get_thread_num()]);
  }
  Acc total = identity;
  for (const Acc& part : partial) total.merge(part);
  return total;
}

template <class Acc, class Body>
Acc reduce_replicas_serial(std::uint64_t replicas, const Acc& identity, Body&& body) {
  Acc total = identity;
  for (std::uint64_t r = 0; r < replicas; ++r) body(r, total);
  return total;
}

}  // namespace arboreal
