#include "arboreal/campaigns.hpp"

#include <algorithm>
#include <stdexcept>

#include "arboreal/enumeration.hpp"

namespace arboreal {
namespace {

class ClusterSpineVisitor : public StreamVisitor {
 public:
  ClusterSpineVisitor(int depth, int site_depth, bool prune, int k_max)
      : clusters(depth, site_depth, prune, k_max) {}

  bool enter(const EdgeRef& e, EdgeState s) { return clusters.enter(e, s); }
  void block(const VertexRef& v, EdgeState parent, std::span<const EdgeState> children) {
    if (parent == EdgeState::open_surviving &&
        std::count(children.begin(), children.end(), EdgeState::open_surviving) != 1) {
      ++spine_violations;
    }
    clusters.block(v, parent, children);
  }
  void leave(const EdgeRef& e, EdgeState s) { clusters.leave(e, s); }

  FiniteClusterCollector clusters;
  std::uint64_t spine_violations = 0;
};

struct ClusterAcc {
  GwCampaignResult result;
  void merge(const ClusterAcc& o) {
    result.histogram.merge(o.result.histogram);
    result.replicas += o.result.replicas;
    result.spine_violations += o.result.spine_violations;
    result.edges_visited += o.result.edges_visited;
    result.max_stack = std::max(result.max_stack, o.result.max_stack);
  }
};

ClusterAcc stream_clusters(const TreeShape& shape, const KernelTable<double>& table, std::uint64_t seed,
                           int site_depth, bool prune, int k_max) {
  ClusterSpineVisitor visitor(shape.depth(), site_depth, prune, k_max);
  const StreamStats stats = stream_sample(shape, table, seed, visitor);
  ClusterAcc acc{GwCampaignResult{ClusterHistogram(k_max)}};
  acc.result.histogram.merge(visitor.clusters.histogram());
  acc.result.replicas = 1;
  acc.result.spine_violations = visitor.spine_violations;
  acc.result.edges_visited = stats.edges_visited;
  acc.result.max_stack = stats.max_stack;
  return acc;
}

template <class Acc, class Body>
Acc reduce(std::uint64_t replicas, int workers, const Acc& identity, Body&& body) {
  if (workers == 1) return reduce_replicas_serial(replicas, identity, body);
  return reduce_replicas(replicas, workers, identity, body);
}

}  // namespace

GwCampaignResult run_gw_campaign(const GwCampaignConfig& config) {
  if (config.depth < 2) throw std::invalid_argument("cluster campaign needs window depth >= 2");
  if (config.batch == 0) throw std::invalid_argument("batch size must be positive");
  const SamplerSpec spec{TreeShape::window(config.d, config.depth), config.p, config.master_seed, 0};
  const KernelTable<double> table = kernel_table_for(spec);
  const ClusterAcc identity{GwCampaignResult{ClusterHistogram(config.k_max)}};
  ClusterAcc total = identity;
  std::uint64_t next = 0;
  while (total.result.histogram.collected() < config.target_clusters) {
    const std::uint64_t first = next;
    ClusterAcc batch = reduce(config.batch, config.workers, identity, [&](std::uint64_t r, ClusterAcc& acc) {
      acc.merge(stream_clusters(spec.shape, table, spec.replica_seed(first + r), config.site_depth,
                                config.prune, config.k_max));
    });
    next += config.batch;
    total.merge(batch);
    if (batch.result.histogram.collected() == 0 && next > 64 * config.batch) {
      throw std::runtime_error("no finite clusters are being collected; check p and site depth");
    }
  }
  return total.result;
}

GwCampaignResult run_cluster_stream(const SamplerSpec& spec, int k_max, int site_depth, int workers) {
  if (spec.shape.wired()) throw std::invalid_argument("cluster statistics need a window shape");
  const KernelTable<double> table = kernel_table_for(spec);
  const ClusterAcc identity{GwCampaignResult{ClusterHistogram(k_max)}};
  return reduce(spec.replicas, workers, identity, [&](std::uint64_t r, ClusterAcc& acc) {
           acc.merge(stream_clusters(spec.shape, table, spec.replica_seed(r), site_depth, false, k_max));
         })
      .result;
}

BernoulliDiagnostics run_bernoulli_campaign(const SamplerSpec& spec, int workers) {
  const KernelTable<double> table = kernel_table_for(spec);
  return reduce(spec.replicas, workers, BernoulliDiagnostics{}, [&](std::uint64_t r, BernoulliDiagnostics& acc) {
    acc.add(sample_states_serial(spec.shape, table, spec.replica_seed(r)));
  });
}

SurvivalCounter run_survival_campaign(const SamplerSpec& spec, int workers) {
  if (!spec.shape.wired()) throw std::invalid_argument("survival needs a wired shape");
  if (spec.shape.depth() == 0) return {spec.replicas, spec.replicas};
  const KernelTable<double> table = kernel_table_for(spec);

  // Only the root block decides whether the root reaches the boundary.
  struct RootBlock : StreamVisitor {
    bool connected = false;
    bool enter(const EdgeRef&, EdgeState) { return false; }
    void block(const VertexRef& v, EdgeState, std::span<const EdgeState> children) {
      if (v.level == 0) {
        connected = std::find(children.begin(), children.end(), EdgeState::open_surviving) != children.end();
      }
    }
  };
  return reduce(spec.replicas, workers, SurvivalCounter{}, [&](std::uint64_t r, SurvivalCounter& acc) {
    RootBlock visitor;
    stream_sample(spec.shape, table, spec.replica_seed(r), visitor);
    ++acc.total;
    acc.connected += visitor.connected ? 1 : 0;
  });
}

void ForestTally::merge(const ForestTally& o) {
  for (const auto& [mask, count] : o.counts) counts[mask] += count;
  samples += o.samples;
  non_forests += o.non_forests;
  invariant_failures += o.invariant_failures;
  one_ended_violations += o.one_ended_violations;
}

ForestTally run_forest_tally(const SamplerSpec& spec, int workers) {
  if (spec.shape.edge_count() > 63) throw std::invalid_argument("forest tally supports at most 63 edges");
  const KernelTable<double> table = kernel_table_for(spec);
  return reduce(spec.replicas, workers, ForestTally{}, [&](std::uint64_t r, ForestTally& acc) {
    const StateConfig sc = sample_states_serial(spec.shape, table, spec.replica_seed(r));
    ++acc.samples;
    acc.one_ended_violations += one_ended_violations(sc);
    if (!satisfies_invariants(sc)) {
      ++acc.invariant_failures;
      return;
    }
    const ForestConfig forest = phi_inverse(sc);
    if (spec.shape.wired() && !is_forest_wired(forest)) ++acc.non_forests;
    std::uint64_t mask = 0;
    for (std::size_t i = 0; i < forest.bits.size(); ++i) mask |= std::uint64_t{forest.bits[i]} << i;
    ++acc.counts[mask];
  });
}

}  // namespace arboreal
