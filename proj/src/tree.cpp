#include "arboreal/tree.hpp"

#include <limits>
#include <stdexcept>
#include <string>

namespace arboreal {
namespace {

constexpr std::uint64_t kMaxWidth = std::uint64_t{1} << 61;

std::uint64_t power(std::uint64_t base, int exponent) {
  std::uint64_t result = 1;
  for (int i = 0; i < exponent; ++i) result *= base;
  return result;
}

void require_valid(const TreeShape& shape, const EdgeRef& e) {
  if (!shape.valid(e)) {
    throw std::out_of_range("edge (" + std::to_string(e.level) + ", " +
                            std::to_string(e.index) + ") is not in the tree");
  }
}

}  // namespace

TreeShape::TreeShape(int d, int depth, bool wired) : d_(d), depth_(depth), wired_(wired) {
  if (d < 2) throw std::invalid_argument("branching factor must be at least 2");
  if (depth < 0) throw std::invalid_argument("depth must be nonnegative");
  // d^(depth+1) bounds both the edge and the vertex count.
  std::uint64_t width = 1;
  for (int k = 0; k <= depth; ++k) {
    if (width > kMaxWidth / static_cast<std::uint64_t>(d)) {
      throw std::invalid_argument("tree too large: d^(depth+1) exceeds 2^61");
    }
    width *= static_cast<std::uint64_t>(d);
  }
}

std::uint64_t TreeShape::level_width(int k) const { return power(d_, k); }

std::uint64_t TreeShape::level_offset(int k) const {
  // d + d^2 + ... + d^(k-1)
  return (power(d_, k) - d_) / (d_ - 1);
}

std::uint64_t TreeShape::vertices_above(int k) const {
  return (power(d_, k) - 1) / (d_ - 1);
}

std::uint64_t TreeShape::vertex_count() const {
  return wired_ ? vertices_above(depth_) + 1 : vertices_above(depth_ + 1);
}

bool TreeShape::valid(const EdgeRef& e) const {
  return e.level >= 1 && e.level <= depth_ && e.index < level_width(e.level);
}

bool TreeShape::valid(const VertexRef& v) const {
  return v.level >= 0 && v.level <= depth_ && v.index < level_width(v.level);
}

std::uint64_t edge_count(const TreeShape& shape) { return shape.edge_count(); }

std::uint64_t flat_index(const TreeShape& shape, const EdgeRef& e) {
  require_valid(shape, e);
  return shape.level_offset(e.level) + e.index;
}

EdgeRef edge_at(const TreeShape& shape, std::uint64_t flat) {
  if (flat >= shape.edge_count()) throw std::out_of_range("flat edge index out of range");
  int level = 1;
  while (shape.level_offset(level + 1) <= flat) ++level;
  return {level, flat - shape.level_offset(level)};
}

std::optional<EdgeRef> parent_edge(const TreeShape& shape, const EdgeRef& e) {
  require_valid(shape, e);
  if (e.level == 1) return std::nullopt;
  return EdgeRef{e.level - 1, e.index / static_cast<std::uint64_t>(shape.d())};
}

std::vector<EdgeRef> children_edges(const TreeShape& shape, const EdgeRef& e) {
  require_valid(shape, e);
  std::vector<EdgeRef> out;
  if (e.level == shape.depth()) return out;
  const auto d = static_cast<std::uint64_t>(shape.d());
  out.reserve(d);
  for (std::uint64_t j = 0; j < d; ++j) out.push_back({e.level + 1, e.index * d + j});
  return out;
}

std::vector<EdgeRef> sibling_edges(const TreeShape& shape, const EdgeRef& e) {
  require_valid(shape, e);
  const auto d = static_cast<std::uint64_t>(shape.d());
  const std::uint64_t first = (e.index / d) * d;
  std::vector<EdgeRef> out;
  out.reserve(d - 1);
  for (std::uint64_t i = first; i < first + d; ++i) {
    if (i != e.index) out.push_back({e.level, i});
  }
  return out;
}

bool head_is_boundary(const TreeShape& shape, const EdgeRef& e) {
  if (!shape.wired()) throw std::logic_error("head_is_boundary requires a wired shape");
  require_valid(shape, e);
  return e.level == shape.depth();
}

VertexRef tail_vertex(const EdgeRef& e, int d) {
  return {e.level - 1, e.index / static_cast<std::uint64_t>(d)};
}

VertexRef head_vertex(const EdgeRef& e) { return {e.level, e.index}; }

std::uint64_t vertex_id(const TreeShape& shape, const VertexRef& v) {
  if (!shape.valid(v)) throw std::out_of_range("vertex is not in the tree");
  if (shape.wired() && v.level == shape.depth()) return boundary_id(shape);
  return shape.vertices_above(v.level) + v.index;
}

std::uint64_t boundary_id(const TreeShape& shape) {
  if (!shape.wired()) throw std::logic_error("only wired shapes have a boundary vertex");
  return shape.vertex_count() - 1;
}

}  // namespace arboreal
