// Disjoint sets with union by size. Path compression is optional so that
// unions can be rolled back during depth-first enumeration.
#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

namespace arboreal {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), std::uint64_t{0});
  }

  std::uint64_t find(std::uint64_t x) const {
    while (parent_[x] != x) x = parent_[x];
    return x;
  }

  std::uint64_t find_compress(std::uint64_t x) {
    std::uint64_t root = find(x);
    while (parent_[x] != root) {
      const std::uint64_t next = parent_[x];
      parent_[x] = root;
      x = next;
    }
    return root;
  }

  /// Returns false (and changes nothing) if a and b are already joined.
  bool unite(std::uint64_t a, std::uint64_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    history_.push_back(b);
    return true;
  }

  std::size_t checkpoint() const { return history_.size(); }

  /// Undo unions back to a checkpoint. Invalid after find_compress.
  void rollback(std::size_t mark) {
    while (history_.size() > mark) {
      const std::uint64_t child = history_.back();
      history_.pop_back();
      const std::uint64_t root = parent_[child];
      size_[root] -= size_[child];
      parent_[child] = child;
    }
  }

  std::uint64_t component_size(std::uint64_t x) const { return size_[find(x)]; }
  std::size_t element_count() const { return parent_.size(); }

 private:
  std::vector<std::uint64_t> parent_;
  std::vector<std::uint64_t> size_;
  std::vector<std::uint64_t> history_;
};

}  // namespace arboreal
