// Brute-force ground truth on small wired trees: every edge subset is visited,
// cycles (after wiring the boundary) are rejected, and exact weights are summed.
#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "arboreal/config.hpp"
#include "arboreal/rational.hpp"

namespace arboreal {

inline constexpr int kDefaultEnumerationCap = 24;

struct EnumerationOptions {
  /// Largest admissible edge count.
  int cap = kDefaultEnumerationCap;
  /// The top split_bits edges are fixed per task; 2^split_bits independent
  /// tasks feed the OpenMP loop. Zero means a single task.
  int split_bits = 6;
};

struct PartitionTriple {
  Rational Z;
  Rational Z_S;
  Rational Z_X;
};

struct MeasureEntry {
  ForestConfig config;
  Rational probability;
};
using ExactMeasure = std::vector<MeasureEntry>;

/// Union-find check of acyclicity with level-depth heads merged into the
/// boundary vertex. Throws std::invalid_argument on a length mismatch.
bool is_forest_wired(const ForestConfig& config);

/// p^{#open} (1-p)^{#closed}. Throws std::domain_error unless 0 <= p < 1.
Rational config_weight(const ForestConfig& config, const Rational& p);

/// Forest counts by number of open edges, split by whether the root reaches
/// the boundary. Partition functions follow by weighting count[k] with
/// p^k (1-p)^{E-k}.
struct ForestCounts {
  std::vector<std::uint64_t> connected;
  std::vector<std::uint64_t> disconnected;
};

/// Parallel over subset-index ranges; the result does not depend on the split.
ForestCounts count_forests(const TreeShape& shape, const EnumerationOptions& options = {});
/// Single-threaded reference used to test the parallel path.
ForestCounts count_forests_serial(const TreeShape& shape, const EnumerationOptions& options = {});

/// Every forest as a subset mask (bit i = flat edge i), ascending.
std::vector<std::uint64_t> enumerate_forest_masks(const TreeShape& shape,
                                                  const EnumerationOptions& options = {});

/// Throws std::invalid_argument for non-wired shapes and std::length_error
/// past the cap. For depth 0 the root is the boundary: (1, 1, 0).
PartitionTriple enumerate_partitions(const TreeShape& shape, const Rational& p,
                                     const EnumerationOptions& options = {});

ExactMeasure exact_measure(const TreeShape& shape, const Rational& p,
                           const EnumerationOptions& options = {});

/// Z_S / Z.
Rational root_connection_probability(const TreeShape& shape, const Rational& p,
                                     const EnumerationOptions& options = {});

/// closed -> 0'; open -> 2' if the head reaches the boundary using open edges
/// of its own descendant subtree, else 1'. Throws std::invalid_argument if the
/// shape is not wired or the configuration has a cycle.
StateConfig apply_phi(const ForestConfig& config);

std::vector<std::pair<StateConfig, Rational>> exact_state_measure(
    const TreeShape& shape, const Rational& p, const EnumerationOptions& options = {});

}  // namespace arboreal
