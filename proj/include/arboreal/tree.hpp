// Addressing for wired d-ary trees and finite windows of the infinite d-ary tree.
//
// Edges are addressed by (level, index): level k in [1, depth] holds d^k edges,
// and edge (k, i) joins vertex (k-1, i/d) to vertex (k, i). Every non-boundary
// vertex, the root included, has exactly d child edges. In a wired tree all
// level-depth vertices are identified into one boundary vertex.
//
// The flat index of (k, i) is offset(k) + i with offset(1) = 0 and
// offset(k+1) = offset(k) + d^k. All serialized configurations use this order.
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace arboreal {

struct EdgeRef {
  int level = 1;
  std::uint64_t index = 0;

  friend bool operator==(const EdgeRef&, const EdgeRef&) = default;
};

struct VertexRef {
  int level = 0;
  std::uint64_t index = 0;

  friend bool operator==(const VertexRef&, const VertexRef&) = default;
};

class TreeShape {
 public:
  /// Throws std::invalid_argument for d < 2, depth < 0, or trees whose edge
  /// count does not fit comfortably in 63 bits.
  TreeShape(int d, int depth, bool wired);

  static TreeShape wired_tree(int d, int depth) { return {d, depth, true}; }
  static TreeShape window(int d, int depth) { return {d, depth, false}; }

  int d() const { return d_; }
  int depth() const { return depth_; }
  bool wired() const { return wired_; }

  std::uint64_t edge_count() const { return level_offset(depth_ + 1); }
  /// d^k.
  std::uint64_t level_width(int k) const;
  /// Flat index of the first edge at level k, for k in [1, depth + 1].
  std::uint64_t level_offset(int k) const;

  /// Number of vertices in levels [0, k), i.e. the dense id of vertex (k, 0).
  std::uint64_t vertices_above(int k) const;
  /// Distinct vertices after wiring (wired) or of the whole window.
  std::uint64_t vertex_count() const;

  bool valid(const EdgeRef& e) const;
  bool valid(const VertexRef& v) const;

  friend bool operator==(const TreeShape&, const TreeShape&) = default;

 private:
  int d_;
  int depth_;
  bool wired_;
};

std::uint64_t edge_count(const TreeShape& shape);

std::uint64_t flat_index(const TreeShape& shape, const EdgeRef& e);
EdgeRef edge_at(const TreeShape& shape, std::uint64_t flat);

std::optional<EdgeRef> parent_edge(const TreeShape& shape, const EdgeRef& e);
std::vector<EdgeRef> children_edges(const TreeShape& shape, const EdgeRef& e);
/// The other d-1 edges sharing e's tail. Root edges are siblings of each other.
std::vector<EdgeRef> sibling_edges(const TreeShape& shape, const EdgeRef& e);
/// Only defined on wired shapes; throws std::logic_error otherwise.
bool head_is_boundary(const TreeShape& shape, const EdgeRef& e);

VertexRef tail_vertex(const EdgeRef& e, int d);
/// Head vertex before wiring (a level-depth vertex for deepest edges).
VertexRef head_vertex(const EdgeRef& e);

/// Dense vertex id used by union-find and the samplers' random streams.
/// Level-order; in wired shapes every level-depth vertex maps to the single
/// boundary id vertex_count() - 1 (which is also the root when depth = 0).
std::uint64_t vertex_id(const TreeShape& shape, const VertexRef& v);
std::uint64_t boundary_id(const TreeShape& shape);

/// Id of the head vertex ignoring wiring: vertices_above(k) + i. This is the
/// key of a vertex's random stream in both finite and window samplers.
inline std::uint64_t unwired_head_id(const TreeShape& shape, const EdgeRef& e) {
  return shape.vertices_above(e.level) + e.index;
}

}  // namespace arboreal
