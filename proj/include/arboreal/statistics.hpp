// Cluster decomposition and statistical checks on sampled configurations.
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "arboreal/config.hpp"
#include "arboreal/samplers.hpp"

namespace arboreal {

struct ClusterReport {
  std::vector<std::uint64_t> component_sizes;
  std::uint64_t root_cluster_size = 0;
  /// Wired shapes: root and boundary share a component.
  bool boundary_connected = false;
  /// Windows: component reaches the deepest level. Parallel to component_sizes.
  std::vector<bool> censored_flags;
  std::uint64_t vertex_count = 0;
  std::uint64_t open_edges = 0;
};

/// Union-find over open edges; in wired shapes level-depth heads are the
/// boundary vertex. Components are listed by smallest vertex id. Throws
/// std::invalid_argument for a wired configuration with a cycle.
ClusterReport components(const ForestConfig& config);

/// Total progeny law of a Galton-Watson tree with Bin(d, 1/d) offspring:
/// P(T = k) = C(dk, k-1) (1/d)^{k-1} ((d-1)/d)^{dk-k+1} / k.
struct GwPmf {
  int d = 2;
  /// pmf[k - 1] = P(T = k) for k = 1..k_max.
  std::vector<double> pmf;
  /// P(T > k_max).
  double tail = 0.0;
};
GwPmf gw_total_progeny_pmf(int d, int k_max);

struct ClusterSample {
  std::uint64_t size = 0;
  bool censored = false;
};

/// Finite clusters of a window sample. A site is the head of a 0' edge
/// whose block drew no 2' child; its cluster is the head plus every vertex
/// joined to it through 1' edges below it. Only heads at levels
/// [1, min(max_site_level, depth - 1)] qualify (deeper blocks are unknown).
/// Clusters touching the deepest level are marked censored. max_site_level
/// <= 0 means no extra limit.
std::vector<ClusterSample> finite_cluster_samples(const StateConfig& sc, int max_site_level = 0);

/// Fixed-bin histogram of finite cluster sizes; mergeable across replicas.
struct ClusterHistogram {
  int k_max = 50;
  /// counts[k - 1] for uncensored sizes k <= k_max.
  std::vector<std::uint64_t> counts;
  std::uint64_t tail = 0;
  /// Clipped by the window with observed size <= k_max: the bin is unknown.
  std::uint64_t censored = 0;
  /// Clipped with observed size > k_max: certainly in the tail bin.
  std::uint64_t clipped_in_tail = 0;

  explicit ClusterHistogram(int kmax = 50) : k_max(kmax), counts(kmax, 0) {}
  void add(const ClusterSample& s);
  void merge(const ClusterHistogram& other);
  std::uint64_t collected() const;
  std::uint64_t uncensored() const { return collected() - censored; }
  double censored_fraction() const;
  /// counts followed by the tail (clipped_in_tail included).
  std::vector<std::uint64_t> binned() const;
};

/// Streaming counterpart of finite_cluster_samples. With prune = true the
/// generator only descends where a collected cluster can still grow, so
/// the cost per replica is the top max_site_level levels plus the clusters.
class FiniteClusterCollector : public StreamVisitor {
 public:
  FiniteClusterCollector(int depth, int max_site_level, bool prune, int k_max = 50);

  bool enter(const EdgeRef& e, EdgeState s);
  void block(const VertexRef& v, EdgeState parent, std::span<const EdgeState> children);
  void leave(const EdgeRef& e, EdgeState s);

  const ClusterHistogram& histogram() const { return histogram_; }
  /// Resets per-replica state; the histogram is kept.
  void reset_path();

 private:
  int depth_;
  int max_site_level_;
  bool prune_;
  ClusterHistogram histogram_;
  // Per level on the current path: site level of the cluster holding the
  // vertex at that level, or -1.
  std::vector<int> cluster_of_level_;
  // Indexed by site level.
  std::vector<std::uint64_t> size_;
  std::vector<bool> clipped_;
};

/// Number of 2' edges with an interior head that do not have exactly one 2'
/// child. Window leaves and wired boundary heads are exempt.
std::uint64_t one_ended_violations(const StateConfig& sc);

struct GoodnessOfFit {
  double tv_distance = 0.0;
  double chi_square = 0.0;
  int degrees_of_freedom = 0;
  double p_value = 1.0;
};

/// Pearson test of observed counts against a reference law on the same bins
/// (the reference must sum to 1). Adjacent bins are pooled left to right until
/// each pooled bin expects at least min_expected counts; a short remainder
/// joins the last pooled bin. TV distance is taken on the unpooled bins.
/// Throws std::invalid_argument on an empty histogram or misaligned bins.
GoodnessOfFit goodness_of_fit(std::span<const std::uint64_t> observed, std::span<const double> reference,
                              double min_expected = 5.0);

struct SurvivalEstimate {
  double estimate = 0.0;
  double standard_error = 0.0;
  std::uint64_t samples = 0;
};

/// Mergeable counter of root-boundary connections.
struct SurvivalCounter {
  std::uint64_t connected = 0;
  std::uint64_t total = 0;
  void merge(const SurvivalCounter& o) {
    connected += o.connected;
    total += o.total;
  }
  /// Throws std::invalid_argument when empty.
  SurvivalEstimate estimate() const;
};

/// Fraction of wired samples with the root joined to the boundary, with
/// the binomial standard error. Throws std::invalid_argument on an empty batch.
SurvivalEstimate survival_frequency(std::span<const ForestConfig> batch);

/// Open-edge marginal and sibling-pair correlation counts, mergeable.
struct BernoulliDiagnostics {
  std::uint64_t edges = 0;
  std::uint64_t open = 0;
  std::uint64_t surviving = 0;
  // Over unordered sibling pairs (x, y).
  std::uint64_t pairs = 0;
  std::uint64_t x_open = 0;
  std::uint64_t y_open = 0;
  std::uint64_t both_open = 0;
  std::uint64_t spine_violations = 0;

  void add(const StateConfig& sc);
  void merge(const BernoulliDiagnostics& o);
  double open_frequency() const;
  double open_frequency_se(double p) const;
  double sibling_correlation() const;
  /// Standard error of the sample correlation under independence.
  double sibling_correlation_se() const;
};

/// Histogram over {0..d-1} of open siblings beside the 2' child of every
/// interior vertex entered by a 2' edge.
std::vector<std::uint64_t> spine_attachment_counts(const StateConfig& sc);

}  // namespace arboreal
