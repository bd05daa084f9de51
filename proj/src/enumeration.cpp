#include "arboreal/enumeration.hpp"

#include <omp.h>

#include <algorithm>
#include <stdexcept>
#include <string>

#include "arboreal/union_find.hpp"

namespace arboreal {
namespace {

struct EdgeEnds {
  std::uint64_t tail;
  std::uint64_t head;
};

std::vector<EdgeEnds> wired_edge_ends(const TreeShape& shape) {
  std::vector<EdgeEnds> ends;
  ends.reserve(shape.edge_count());
  for (int k = 1; k <= shape.depth(); ++k) {
    for (std::uint64_t i = 0; i < shape.level_width(k); ++i) {
      const EdgeRef e{k, i};
      ends.push_back({vertex_id(shape, tail_vertex(e, shape.d())), vertex_id(shape, head_vertex(e))});
    }
  }
  return ends;
}

void require_enumerable(const TreeShape& shape, const EnumerationOptions& options) {
  if (!shape.wired()) throw std::invalid_argument("enumeration is defined on wired shapes only");
  if (options.cap > 63) throw std::invalid_argument("enumeration cap above 63 edges is not supported");
  if (shape.edge_count() > static_cast<std::uint64_t>(options.cap)) {
    throw std::length_error("wired tree has " + std::to_string(shape.edge_count()) +
                            " edges, above the enumeration cap of " + std::to_string(options.cap));
  }
}

// Depth-first walk over edges from the highest flat index down, closed
// before open, so leaves are reached in ascending mask order. Subtrees that
// close a cycle are pruned.
class ForestWalker {
 public:
  explicit ForestWalker(const TreeShape& shape)
      : ends_(wired_edge_ends(shape)),
        uf_(shape.vertex_count()),
        root_(vertex_id(shape, VertexRef{0, 0})),
        boundary_(boundary_id(shape)) {}

  int edges() const { return static_cast<int>(ends_.size()); }

  template <class Leaf>
  void run_task(std::uint64_t prefix, int split, Leaf&& leaf) {
    const int e = edges();
    std::uint64_t mask = 0;
    int open = 0;
    const std::size_t mark = uf_.checkpoint();
    bool ok = true;
    for (int b = 0; b < split && ok; ++b) {
      const int edge = e - 1 - b;
      if ((prefix >> (split - 1 - b)) & 1U) {
        ok = uf_.unite(ends_[edge].tail, ends_[edge].head);
        mask |= std::uint64_t{1} << edge;
        ++open;
      }
    }
    if (ok) walk(e - 1 - split, mask, open, leaf);
    uf_.rollback(mark);
  }

 private:
  template <class Leaf>
  void walk(int edge, std::uint64_t mask, int open, Leaf& leaf) {
    if (edge < 0) {
      leaf(mask, open, uf_.find(root_) == uf_.find(boundary_));
      return;
    }
    walk(edge - 1, mask, open, leaf);
    const std::size_t mark = uf_.checkpoint();
    if (uf_.unite(ends_[edge].tail, ends_[edge].head)) {
      walk(edge - 1, mask | (std::uint64_t{1} << edge), open + 1, leaf);
    }
    uf_.rollback(mark);
  }

  std::vector<EdgeEnds> ends_;
  UnionFind uf_;
  std::uint64_t root_;
  std::uint64_t boundary_;
};

ForestCounts empty_counts(std::size_t edges) {
  return {std::vector<std::uint64_t>(edges + 1, 0), std::vector<std::uint64_t>(edges + 1, 0)};
}

int effective_split(const TreeShape& shape, const EnumerationOptions& options) {
  const int e = static_cast<int>(shape.edge_count());
  return std::max(0, std::min(options.split_bits, e));
}

ForestCounts single_task_counts(const TreeShape& shape, std::uint64_t prefix, int split) {
  ForestCounts counts = empty_counts(shape.edge_count());
  ForestWalker walker(shape);
  walker.run_task(prefix, split, [&](std::uint64_t, int open, bool connected) {
    (connected ? counts.connected : counts.disconnected)[open] += 1;
  });
  return counts;
}

void accumulate(ForestCounts& into, const ForestCounts& from) {
  for (std::size_t k = 0; k < into.connected.size(); ++k) {
    into.connected[k] += from.connected[k];
    into.disconnected[k] += from.disconnected[k];
  }
}

}  // namespace

bool is_forest_wired(const ForestConfig& config) {
  const TreeShape& shape = config.shape;
  if (config.bits.size() != shape.edge_count()) {
    throw std::invalid_argument("configuration length does not match the edge count");
  }
  UnionFind uf(shape.vertex_count());
  std::uint64_t flat = 0;
  for (int k = 1; k <= shape.depth(); ++k) {
    for (std::uint64_t i = 0; i < shape.level_width(k); ++i, ++flat) {
      if (config.bits[flat] == 0) continue;
      const EdgeRef e{k, i};
      if (!uf.unite(vertex_id(shape, tail_vertex(e, shape.d())), vertex_id(shape, head_vertex(e)))) {
        return false;
      }
    }
  }
  return true;
}

Rational config_weight(const ForestConfig& config, const Rational& p) {
  require_probability_below_one(p);
  const std::uint64_t open = config.open_count();
  const std::uint64_t closed = config.bits.size() - open;
  return pow(p, open) * pow(Rational(1) - p, closed);
}

ForestCounts count_forests(const TreeShape& shape, const EnumerationOptions& options) {
  require_enumerable(shape, options);
  const int split = effective_split(shape, options);
  const auto tasks = static_cast<std::int64_t>(std::uint64_t{1} << split);
  std::vector<ForestCounts> partial(tasks);
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t t = 0; t < tasks; ++t) {
    partial[t] = single_task_counts(shape, static_cast<std::uint64_t>(t), split);
  }
  ForestCounts total = empty_counts(shape.edge_count());
  for (const auto& part : partial) accumulate(total, part);
  return total;
}

ForestCounts count_forests_serial(const TreeShape& shape, const EnumerationOptions& options) {
  require_enumerable(shape, options);
  return single_task_counts(shape, 0, 0);
}

std::vector<std::uint64_t> enumerate_forest_masks(const TreeShape& shape,
                                                  const EnumerationOptions& options) {
  require_enumerable(shape, options);
  const int split = effective_split(shape, options);
  const auto tasks = static_cast<std::int64_t>(std::uint64_t{1} << split);
  std::vector<std::vector<std::uint64_t>> partial(tasks);
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t t = 0; t < tasks; ++t) {
    ForestWalker walker(shape);
    auto& out = partial[t];
    walker.run_task(static_cast<std::uint64_t>(t), split,
                    [&](std::uint64_t mask, int, bool) { out.push_back(mask); });
  }
  std::vector<std::uint64_t> masks;
  for (auto& part : partial) masks.insert(masks.end(), part.begin(), part.end());
  return masks;
}

PartitionTriple enumerate_partitions(const TreeShape& shape, const Rational& p,
                                     const EnumerationOptions& options) {
  require_probability_below_one(p);
  const ForestCounts counts = count_forests(shape, options);
  const std::uint64_t edges = shape.edge_count();
  const Rational closed = Rational(1) - p;
  PartitionTriple triple;
  for (std::uint64_t k = 0; k <= edges; ++k) {
    if (counts.connected[k] == 0 && counts.disconnected[k] == 0) continue;
    const Rational w = pow(p, k) * pow(closed, edges - k);
    triple.Z_S += w * Rational(static_cast<unsigned long>(counts.connected[k]));
    triple.Z_X += w * Rational(static_cast<unsigned long>(counts.disconnected[k]));
  }
  triple.Z = triple.Z_S + triple.Z_X;
  return triple;
}

ExactMeasure exact_measure(const TreeShape& shape, const Rational& p,
                           const EnumerationOptions& options) {
  require_probability_below_one(p);
  const PartitionTriple triple = enumerate_partitions(shape, p, options);
  const std::vector<std::uint64_t> masks = enumerate_forest_masks(shape, options);
  const std::uint64_t edges = shape.edge_count();
  const Rational closed = Rational(1) - p;
  std::vector<Rational> by_open(edges + 1);
  for (std::uint64_t k = 0; k <= edges; ++k) by_open[k] = pow(p, k) * pow(closed, edges - k) / triple.Z;

  ExactMeasure measure;
  measure.reserve(masks.size());
  for (std::uint64_t mask : masks) {
    ForestConfig config(shape);
    for (std::uint64_t i = 0; i < edges; ++i) config.bits[i] = (mask >> i) & 1U;
    const auto open = static_cast<std::uint64_t>(__builtin_popcountll(mask));
    measure.push_back({std::move(config), by_open[open]});
  }
  return measure;
}

Rational root_connection_probability(const TreeShape& shape, const Rational& p,
                                     const EnumerationOptions& options) {
  const PartitionTriple triple = enumerate_partitions(shape, p, options);
  return triple.Z_S / triple.Z;
}

StateConfig apply_phi(const ForestConfig& config) {
  const TreeShape& shape = config.shape;
  if (!shape.wired()) throw std::invalid_argument("apply_phi is defined on wired shapes only");
  if (!is_forest_wired(config)) throw std::invalid_argument("apply_phi requires a forest");

  StateConfig sc(shape);
  const auto d = static_cast<std::uint64_t>(shape.d());
  // Bottom-up: an open edge survives if its head is the boundary or one of
  // its children is an open surviving edge.
  for (int k = shape.depth(); k >= 1; --k) {
    const std::uint64_t base = shape.level_offset(k);
    const std::uint64_t child_base = k < shape.depth() ? shape.level_offset(k + 1) : 0;
    for (std::uint64_t i = 0; i < shape.level_width(k); ++i) {
      if (config.bits[base + i] == 0) continue;
      bool reaches = k == shape.depth();
      for (std::uint64_t j = 0; j < d && !reaches; ++j) {
        reaches = sc.states[child_base + i * d + j] == EdgeState::open_surviving;
      }
      sc.states[base + i] = reaches ? EdgeState::open_surviving : EdgeState::open_extinct;
    }
  }
  return sc;
}

std::vector<std::pair<StateConfig, Rational>> exact_state_measure(
    const TreeShape& shape, const Rational& p, const EnumerationOptions& options) {
  ExactMeasure measure = exact_measure(shape, p, options);
  std::vector<std::pair<StateConfig, Rational>> out;
  out.reserve(measure.size());
  for (auto& entry : measure) out.emplace_back(apply_phi(entry.config), std::move(entry.probability));
  return out;
}

}  // namespace arboreal
