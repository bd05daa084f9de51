#include <gtest/gtest.h>

#include <numeric>

#include "arboreal/enumeration.hpp"
#include "arboreal/recursion.hpp"

namespace arboreal {
namespace {

// Brute-force reference: every subset of edges, cycle test by a plain
// disjoint-set forest built from scratch.
struct Brute {
  Rational z, z_s;
};

Brute brute_force(int d, int n, const Rational& p) {
  const TreeShape shape = TreeShape::wired_tree(d, n);
  const std::uint64_t edges = shape.edge_count();
  const std::uint64_t vertices = shape.vertex_count();
  Brute out;
  for (std::uint64_t mask = 0; mask < (1ull << edges); ++mask) {
    std::vector<std::uint64_t> parent(vertices);
    std::iota(parent.begin(), parent.end(), 0);
    auto root = [&](std::uint64_t x) {
      while (parent[x] != x) x = parent[x];
      return x;
    };
    bool forest = true;
    int open = 0;
    for (std::uint64_t f = 0; f < edges && forest; ++f) {
      if (!(mask >> f & 1)) continue;
      ++open;
      const EdgeRef e = edge_at(shape, f);
      const auto a = root(vertex_id(shape, tail_vertex(e, d)));
      const auto b = root(vertex_id(shape, head_vertex(e)));
      if (a == b) forest = false;
      parent[a] = b;
    }
    if (!forest) continue;
    Rational w = pow(p, open) * pow(1 - p, edges - open);
    out.z += w;
    if (root(0) == root(vertices - 1)) out.z_s += w;
  }
  return out;
}

TEST(Enumeration, SmallExamples) {
  auto t = enumerate_partitions(TreeShape::wired_tree(2, 0), Rational(1, 3));
  EXPECT_EQ(t.Z, 1);
  EXPECT_EQ(t.Z_S, 1);
  EXPECT_EQ(t.Z_X, 0);

  t = enumerate_partitions(TreeShape::wired_tree(2, 1), Rational(1, 2));
  EXPECT_EQ(t.Z, Rational(3, 4));
  EXPECT_EQ(t.Z_S, Rational(1, 2));
  EXPECT_EQ(t.Z_X, Rational(1, 4));

  t = enumerate_partitions(TreeShape::wired_tree(2, 2), Rational(1, 2));
  EXPECT_EQ(t.Z_S, Rational(1, 4));
  EXPECT_EQ(t.Z_X, Rational(1, 4));
}

TEST(Enumeration, MatchesBruteForce) {
  for (auto [d, n] : std::vector<std::pair<int, int>>{{2, 1}, {2, 2}, {2, 3}, {3, 1}, {3, 2}, {4, 1}}) {
    for (const Rational& p : {Rational(1, 4), Rational(2, 3), Rational(0)}) {
      const Brute ref = brute_force(d, n, p);
      const PartitionTriple t = enumerate_partitions(TreeShape::wired_tree(d, n), p);
      EXPECT_EQ(t.Z, ref.z) << d << "," << n;
      EXPECT_EQ(t.Z_S, ref.z_s) << d << "," << n;
    }
  }
}

TEST(Enumeration, ZeroProbability) {
  const PartitionTriple t = enumerate_partitions(TreeShape::wired_tree(2, 3), Rational(0));
  EXPECT_EQ(t.Z_S, 0);
  EXPECT_EQ(t.Z_X, 1);
}

TEST(Enumeration, ParallelEqualsSerial) {
  for (int split : {0, 3, 6, 12}) {
    EnumerationOptions opt;
    opt.split_bits = split;
    const TreeShape shape = TreeShape::wired_tree(2, 3);
    const ForestCounts par = count_forests(shape, opt);
    const ForestCounts ser = count_forests_serial(shape, opt);
    EXPECT_EQ(par.connected, ser.connected);
    EXPECT_EQ(par.disconnected, ser.disconnected);
  }
}

TEST(Enumeration, ForestMasksAscendingAndValid) {
  const TreeShape shape = TreeShape::wired_tree(2, 2);
  const auto masks = enumerate_forest_masks(shape);
  EXPECT_TRUE(std::is_sorted(masks.begin(), masks.end()));
  std::uint64_t brute = 0;
  for (std::uint64_t mask = 0; mask < 64; ++mask) {
    ForestConfig c(shape);
    for (int f = 0; f < 6; ++f) c.bits[f] = mask >> f & 1;
    if (is_forest_wired(c)) ++brute;
  }
  EXPECT_EQ(masks.size(), brute);
}

TEST(Enumeration, ConfigWeight) {
  const TreeShape shape = TreeShape::wired_tree(2, 1);
  EXPECT_EQ(config_weight(forest_from_bit_string(shape, "00"), Rational(1, 2)), Rational(1, 4));
  EXPECT_EQ(config_weight(forest_from_bit_string(shape, "10"), Rational(1, 2)), Rational(1, 4));
  EXPECT_EQ(config_weight(forest_from_bit_string(shape, "11"), Rational(1, 3)), Rational(1, 9));
}

TEST(Enumeration, ExactMeasure) {
  const ExactMeasure m = exact_measure(TreeShape::wired_tree(2, 1), Rational(1, 2));
  ASSERT_EQ(m.size(), 3u);
  for (const auto& entry : m) EXPECT_EQ(entry.probability, Rational(1, 3));

  EXPECT_EQ(root_connection_probability(TreeShape::wired_tree(2, 1), Rational(1, 2)), Rational(2, 3));
  EXPECT_EQ(root_connection_probability(TreeShape::wired_tree(2, 2), Rational(1, 2)), Rational(1, 2));
}

TEST(Enumeration, StateMeasure) {
  const TreeShape one = TreeShape::wired_tree(2, 1);
  const StateConfig sc(one, {EdgeState::open_surviving, EdgeState::closed});
  bool found = false;
  for (const auto& [config, prob] : exact_state_measure(one, Rational(1, 2))) {
    if (config == sc) {
      EXPECT_EQ(prob, Rational(1, 3));
      found = true;
    }
  }
  EXPECT_TRUE(found);

  const TreeShape two = TreeShape::wired_tree(2, 2);
  Rational total;
  for (const auto& [config, prob] : exact_state_measure(two, Rational(1, 2))) {
    EXPECT_TRUE(satisfies_invariants(config));
    if (std::all_of(config.states.begin(), config.states.end(),
                    [](EdgeState s) { return s == EdgeState::closed; })) {
      EXPECT_EQ(prob, Rational(1, 32));
    }
    total += prob;
  }
  EXPECT_EQ(total, 1);
}

TEST(Enumeration, ApplyPhiReadsSubtrees) {
  const TreeShape shape = TreeShape::wired_tree(2, 2);
  // (1,0) open into u, (2,0) open from u to the boundary, (1,1) open into a
  // vertex whose children are closed.
  const StateConfig sc = apply_phi(forest_from_bit_string(shape, "111000"));
  EXPECT_EQ(sc.at(EdgeRef{1, 0}), EdgeState::open_surviving);
  EXPECT_EQ(sc.at(EdgeRef{2, 0}), EdgeState::open_surviving);
  EXPECT_EQ(sc.at(EdgeRef{1, 1}), EdgeState::open_extinct);
  EXPECT_EQ(sc.at(EdgeRef{2, 1}), EdgeState::closed);
}

TEST(Enumeration, Errors) {
  EXPECT_THROW(enumerate_partitions(TreeShape::wired_tree(3, 3), Rational(1, 2)), std::length_error);
  EXPECT_THROW(enumerate_partitions(TreeShape::window(2, 2), Rational(1, 2)), std::invalid_argument);
  EnumerationOptions small;
  small.cap = 5;
  EXPECT_THROW(enumerate_partitions(TreeShape::wired_tree(2, 2), Rational(1, 2), small), std::length_error);
}

TEST(Enumeration, AgreesWithRecursion) {
  for (auto [d, n] : std::vector<std::pair<int, int>>{{2, 3}, {3, 2}, {4, 1}, {5, 1}}) {
    for (const Rational& p : {Rational(1, 5), Rational(1, 2), Rational(4, 5)}) {
      const auto rec = partition_recursion(n, GasParams<Rational>{d, p});
      const PartitionTriple t = enumerate_partitions(TreeShape::wired_tree(d, n), p);
      EXPECT_EQ(rec[n].surviving, t.Z_S);
      EXPECT_EQ(rec[n].extinct, t.Z_X);
    }
  }
}

}  // namespace
}  // namespace arboreal
