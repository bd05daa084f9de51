// Multi-replica sampling campaigns reduced into mergeable statistics.
//
// workers = 1 runs the serial reference loop; any other value runs an
// OpenMP team (0 = the OpenMP default). Results depend only on the spec,
// never on the worker count.
#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "arboreal/samplers.hpp"
#include "arboreal/statistics.hpp"

namespace arboreal {

struct GwCampaignConfig {
  int d = 2;
  double p = 0.75;
  int depth = 30;
  std::uint64_t target_clusters = 100000;
  std::uint64_t master_seed = 1234;
  /// Sites are heads at levels [1, site_depth].
  int site_depth = 4;
  int k_max = 50;
  /// Only descend where a collected cluster can grow.
  bool prune = true;
  /// Replicas per batch; batches run until target_clusters are collected.
  std::uint64_t batch = 1024;
  int workers = 0;
};

struct GwCampaignResult {
  ClusterHistogram histogram;
  std::uint64_t replicas = 0;
  std::uint64_t spine_violations = 0;
  std::uint64_t edges_visited = 0;
  std::size_t max_stack = 0;
};

GwCampaignResult run_gw_campaign(const GwCampaignConfig& config);

/// Streams every replica of spec through a full (unpruned) cluster collector.
GwCampaignResult run_cluster_stream(const SamplerSpec& spec, int k_max, int site_depth, int workers);

BernoulliDiagnostics run_bernoulli_campaign(const SamplerSpec& spec, int workers);

/// Wired specs only; counts replicas whose root block holds a 2' edge.
SurvivalCounter run_survival_campaign(const SamplerSpec& spec, int workers);

/// Empirical law of decoded forests of a wired spec, keyed by subset mask.
struct ForestTally {
  std::unordered_map<std::uint64_t, std::uint64_t> counts;
  std::uint64_t samples = 0;
  std::uint64_t non_forests = 0;
  std::uint64_t invariant_failures = 0;
  std::uint64_t one_ended_violations = 0;

  void merge(const ForestTally& o);
};

/// Shapes up to 63 edges.
ForestTally run_forest_tally(const SamplerSpec& spec, int workers);

}  // namespace arboreal
