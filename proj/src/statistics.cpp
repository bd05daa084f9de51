#include "arboreal/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include <boost/math/special_functions/gamma.hpp>

#include "arboreal/union_find.hpp"

namespace arboreal {

ClusterReport components(const ForestConfig& config) {
  const TreeShape& shape = config.shape;
  if (config.bits.size() != shape.edge_count()) {
    throw std::invalid_argument("configuration length does not match the edge count");
  }
  const std::uint64_t n_vertices = shape.vertex_count();
  UnionFind uf(n_vertices);
  ClusterReport report;
  report.vertex_count = n_vertices;

  std::uint64_t flat = 0;
  for (int k = 1; k <= shape.depth(); ++k) {
    for (std::uint64_t i = 0; i < shape.level_width(k); ++i, ++flat) {
      if (config.bits[flat] == 0) continue;
      ++report.open_edges;
      const EdgeRef e{k, i};
      if (!uf.unite(vertex_id(shape, tail_vertex(e, shape.d())), vertex_id(shape, head_vertex(e)))) {
        throw std::invalid_argument("configuration is not a forest on the wired tree");
      }
    }
  }

  // Windows: vertex ids at or above this index sit on the deepest level.
  const std::uint64_t deepest_first = shape.wired() ? n_vertices : shape.vertices_above(shape.depth());
  std::unordered_map<std::uint64_t, std::size_t> slot_of_root;
  for (std::uint64_t v = 0; v < n_vertices; ++v) {
    const std::uint64_t root = uf.find(v);
    auto [it, inserted] = slot_of_root.try_emplace(root, report.component_sizes.size());
    if (inserted) {
      report.component_sizes.push_back(uf.component_size(v));
      report.censored_flags.push_back(false);
    }
    if (v >= deepest_first) report.censored_flags[it->second] = true;
  }
  report.root_cluster_size = uf.component_size(0);
  report.boundary_connected = shape.wired() && uf.find(0) == uf.find(boundary_id(shape));
  return report;
}

GwPmf gw_total_progeny_pmf(int d, int k_max) {
  if (d < 2) throw std::invalid_argument("branching factor must be at least 2");
  if (k_max < 1) throw std::invalid_argument("k_max must be at least 1");
  GwPmf out;
  out.d = d;
  out.pmf.reserve(k_max);
  const double log_success = -std::log(static_cast<double>(d));
  const double log_failure = std::log(static_cast<double>(d - 1) / d);
  double sum = 0.0;
  for (int k = 1; k <= k_max; ++k) {
    const double dk = static_cast<double>(d) * k;
    const double log_binom = std::lgamma(dk + 1) - std::lgamma(static_cast<double>(k)) -
                             std::lgamma(dk - k + 2);
    const double log_p = log_binom - std::log(static_cast<double>(k)) + (k - 1) * log_success +
                         (dk - k + 1) * log_failure;
    const double pk = std::exp(log_p);
    out.pmf.push_back(pk);
    sum += pk;
  }
  // Critical trees die out almost surely, so the law has total mass one.
  out.tail = std::max(0.0, 1.0 - sum);
  return out;
}

std::vector<ClusterSample> finite_cluster_samples(const StateConfig& sc, int max_site_level) {
  const TreeShape& shape = sc.shape;
  const int depth = shape.depth();
  int site_limit = depth - 1;
  if (max_site_level > 0) site_limit = std::min(site_limit, max_site_level);
  const auto d = static_cast<std::uint64_t>(shape.d());

  std::vector<ClusterSample> clusters;
  // Cluster index of each vertex on the previous level, -1 for none.
  std::vector<std::int64_t> previous(1, -1);
  for (int k = 1; k <= depth; ++k) {
    const std::uint64_t width = shape.level_width(k);
    const std::uint64_t base = shape.level_offset(k);
    const std::uint64_t child_base = k < depth ? shape.level_offset(k + 1) : 0;
    std::vector<std::int64_t> current(width, -1);
    for (std::uint64_t i = 0; i < width; ++i) {
      const EdgeState s = sc.states[base + i];
      const std::int64_t tail_cluster = previous[i / d];
      if (s == EdgeState::open_extinct && tail_cluster >= 0) {
        current[i] = tail_cluster;
        auto& c = clusters[static_cast<std::size_t>(tail_cluster)];
        ++c.size;
        if (k == depth) c.censored = true;
        continue;
      }
      if (s != EdgeState::closed || k > site_limit) continue;
      bool spawned = false;
      for (std::uint64_t j = 0; j < d; ++j) {
        spawned = spawned || sc.states[child_base + i * d + j] == EdgeState::open_surviving;
      }
      if (spawned) continue;
      current[i] = static_cast<std::int64_t>(clusters.size());
      clusters.push_back({1, false});
    }
    previous = std::move(current);
  }
  return clusters;
}

void ClusterHistogram::add(const ClusterSample& s) {
  const bool in_tail = s.size > static_cast<std::uint64_t>(k_max);
  if (s.censored) {
    ++(in_tail ? clipped_in_tail : censored);
  } else if (in_tail) {
    ++tail;
  } else {
    ++counts[s.size - 1];
  }
}

void ClusterHistogram::merge(const ClusterHistogram& other) {
  if (other.k_max != k_max) throw std::invalid_argument("histograms have different k_max");
  for (int k = 0; k < k_max; ++k) counts[k] += other.counts[k];
  tail += other.tail;
  censored += other.censored;
  clipped_in_tail += other.clipped_in_tail;
}

std::uint64_t ClusterHistogram::collected() const {
  return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0}) + tail + censored + clipped_in_tail;
}

double ClusterHistogram::censored_fraction() const {
  const std::uint64_t n = collected();
  return n == 0 ? 0.0 : static_cast<double>(censored) / static_cast<double>(n);
}

std::vector<std::uint64_t> ClusterHistogram::binned() const {
  std::vector<std::uint64_t> out(counts);
  out.push_back(tail + clipped_in_tail);
  return out;
}

FiniteClusterCollector::FiniteClusterCollector(int depth, int max_site_level, bool prune, int k_max)
    : depth_(depth),
      max_site_level_(max_site_level > 0 ? std::min(max_site_level, depth - 1) : depth - 1),
      prune_(prune),
      histogram_(k_max),
      cluster_of_level_(static_cast<std::size_t>(depth) + 1, -1),
      size_(static_cast<std::size_t>(depth) + 1, 0),
      clipped_(static_cast<std::size_t>(depth) + 1, false) {}

void FiniteClusterCollector::reset_path() {
  std::fill(cluster_of_level_.begin(), cluster_of_level_.end(), -1);
}

bool FiniteClusterCollector::enter(const EdgeRef& e, EdgeState s) {
  const int k = e.level;
  const int tail_cluster = cluster_of_level_[k - 1];
  if (s == EdgeState::open_extinct && tail_cluster >= 0) {
    cluster_of_level_[k] = tail_cluster;
    ++size_[tail_cluster];
    if (k == depth_) clipped_[tail_cluster] = true;
  } else {
    cluster_of_level_[k] = -1;
  }
  return !prune_ || k <= max_site_level_ || cluster_of_level_[k] >= 0;
}

void FiniteClusterCollector::block(const VertexRef& v, EdgeState parent, std::span<const EdgeState> children) {
  const int k = v.level;
  if (k < 1 || k > max_site_level_ || parent != EdgeState::closed) return;
  if (std::find(children.begin(), children.end(), EdgeState::open_surviving) != children.end()) return;
  cluster_of_level_[k] = k;
  size_[k] = 1;
  clipped_[k] = false;
}

void FiniteClusterCollector::leave(const EdgeRef& e, EdgeState) {
  const int k = e.level;
  if (cluster_of_level_[k] == k) {
    histogram_.add({size_[k], clipped_[k]});
  }
  cluster_of_level_[k] = -1;
}

std::uint64_t one_ended_violations(const StateConfig& sc) {
  const TreeShape& shape = sc.shape;
  const auto d = static_cast<std::uint64_t>(shape.d());
  std::uint64_t violations = 0;
  for (int k = 1; k < shape.depth(); ++k) {
    const std::uint64_t base = shape.level_offset(k);
    const std::uint64_t child_base = shape.level_offset(k + 1);
    for (std::uint64_t i = 0; i < shape.level_width(k); ++i) {
      if (sc.states[base + i] != EdgeState::open_surviving) continue;
      int surviving = 0;
      for (std::uint64_t j = 0; j < d; ++j) {
        surviving += sc.states[child_base + i * d + j] == EdgeState::open_surviving;
      }
      if (surviving != 1) ++violations;
    }
  }
  return violations;
}

GoodnessOfFit goodness_of_fit(std::span<const std::uint64_t> observed, std::span<const double> reference,
                              double min_expected) {
  if (observed.size() != reference.size()) throw std::invalid_argument("histogram and reference bins differ");
  const double n = static_cast<double>(std::accumulate(observed.begin(), observed.end(), std::uint64_t{0}));
  if (n == 0) throw std::invalid_argument("empty histogram");
  const double mass = std::accumulate(reference.begin(), reference.end(), 0.0);
  if (std::abs(mass - 1.0) > 1e-6) throw std::invalid_argument("reference law does not sum to one");

  GoodnessOfFit out;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    out.tv_distance += std::abs(static_cast<double>(observed[i]) / n - reference[i]);
  }
  out.tv_distance *= 0.5;

  std::vector<double> pooled_obs;
  std::vector<double> pooled_exp;
  double acc_obs = 0.0;
  double acc_exp = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    acc_obs += static_cast<double>(observed[i]);
    acc_exp += reference[i] * n;
    if (acc_exp >= min_expected) {
      pooled_obs.push_back(acc_obs);
      pooled_exp.push_back(acc_exp);
      acc_obs = acc_exp = 0.0;
    }
  }
  if (acc_obs > 0 || acc_exp > 0) {
    if (pooled_obs.empty()) {
      pooled_obs.push_back(0.0);
      pooled_exp.push_back(0.0);
    }
    pooled_obs.back() += acc_obs;
    pooled_exp.back() += acc_exp;
  }

  for (std::size_t i = 0; i < pooled_obs.size(); ++i) {
    const double diff = pooled_obs[i] - pooled_exp[i];
    if (pooled_exp[i] > 0) {
      out.chi_square += diff * diff / pooled_exp[i];
    } else if (pooled_obs[i] > 0) {
      out.chi_square = std::numeric_limits<double>::infinity();
    }
  }
  out.degrees_of_freedom = static_cast<int>(pooled_obs.size()) - 1;
  if (std::isinf(out.chi_square)) {
    out.p_value = 0.0;
  } else if (out.degrees_of_freedom <= 0) {
    out.p_value = out.chi_square > 0 ? 0.0 : 1.0;
  } else {
    out.p_value = boost::math::gamma_q(out.degrees_of_freedom / 2.0, out.chi_square / 2.0);
  }
  return out;
}

SurvivalEstimate SurvivalCounter::estimate() const {
  if (total == 0) throw std::invalid_argument("no samples");
  SurvivalEstimate e;
  e.samples = total;
  e.estimate = static_cast<double>(connected) / static_cast<double>(total);
  e.standard_error = std::sqrt(e.estimate * (1.0 - e.estimate) / static_cast<double>(total));
  return e;
}

SurvivalEstimate survival_frequency(std::span<const ForestConfig> batch) {
  if (batch.empty()) throw std::invalid_argument("empty batch");
  SurvivalCounter counter;
  for (const ForestConfig& f : batch) {
    if (!f.shape.wired()) throw std::invalid_argument("survival frequency needs wired samples");
    ++counter.total;
    counter.connected += components(f).boundary_connected ? 1 : 0;
  }
  return counter.estimate();
}

void BernoulliDiagnostics::add(const StateConfig& sc) {
  const TreeShape& shape = sc.shape;
  const auto d = static_cast<std::uint64_t>(shape.d());
  edges += sc.states.size();
  spine_violations += one_ended_violations(sc);
  for (EdgeState s : sc.states) {
    open += s != EdgeState::closed;
    surviving += s == EdgeState::open_surviving;
  }
  // Every block of d siblings is contiguous in flat order.
  for (std::uint64_t b = 0; b + d <= sc.states.size(); b += d) {
    for (std::uint64_t j = 0; j < d; ++j) {
      const bool x = sc.states[b + j] != EdgeState::closed;
      for (std::uint64_t l = j + 1; l < d; ++l) {
        const bool y = sc.states[b + l] != EdgeState::closed;
        ++pairs;
        x_open += x;
        y_open += y;
        both_open += x && y;
      }
    }
  }
}

void BernoulliDiagnostics::merge(const BernoulliDiagnostics& o) {
  edges += o.edges;
  open += o.open;
  surviving += o.surviving;
  pairs += o.pairs;
  x_open += o.x_open;
  y_open += o.y_open;
  both_open += o.both_open;
  spine_violations += o.spine_violations;
}

double BernoulliDiagnostics::open_frequency() const {
  return edges == 0 ? 0.0 : static_cast<double>(open) / static_cast<double>(edges);
}

double BernoulliDiagnostics::open_frequency_se(double p) const {
  return edges == 0 ? 0.0 : std::sqrt(p * (1.0 - p) / static_cast<double>(edges));
}

double BernoulliDiagnostics::sibling_correlation() const {
  if (pairs == 0) return 0.0;
  const double n = static_cast<double>(pairs);
  const double mx = static_cast<double>(x_open) / n;
  const double my = static_cast<double>(y_open) / n;
  const double cov = static_cast<double>(both_open) / n - mx * my;
  const double var = mx * (1 - mx) * my * (1 - my);
  return var > 0 ? cov / std::sqrt(var) : 0.0;
}

double BernoulliDiagnostics::sibling_correlation_se() const {
  return pairs == 0 ? 0.0 : 1.0 / std::sqrt(static_cast<double>(pairs));
}

std::vector<std::uint64_t> spine_attachment_counts(const StateConfig& sc) {
  const TreeShape& shape = sc.shape;
  const auto d = static_cast<std::uint64_t>(shape.d());
  std::vector<std::uint64_t> hist(d, 0);
  for (int k = 1; k < shape.depth(); ++k) {
    const std::uint64_t base = shape.level_offset(k);
    const std::uint64_t child_base = shape.level_offset(k + 1);
    for (std::uint64_t i = 0; i < shape.level_width(k); ++i) {
      if (sc.states[base + i] != EdgeState::open_surviving) continue;
      std::uint64_t extinct = 0;
      for (std::uint64_t j = 0; j < d; ++j) {
        extinct += sc.states[child_base + i * d + j] == EdgeState::open_extinct;
      }
      ++hist[std::min(extinct, d - 1)];
    }
  }
  return hist;
}

}  // namespace arboreal
