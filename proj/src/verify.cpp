#include "arboreal/verify.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <stdexcept>

#include "arboreal/campaigns.hpp"
#include "arboreal/codec.hpp"
#include "arboreal/recursion.hpp"
#include "arboreal/samplers.hpp"
#include "arboreal/statistics.hpp"

namespace arboreal {
namespace {

std::string fmt(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

bool looks_rational(const std::string& text) {
  return text.find_first_of(".eE") == std::string::npos;
}

Rational exact_p(const std::string& text) {
  if (!looks_rational(text)) throw std::invalid_argument("this suite needs p as an exact rational a/b");
  return parse_rational(text);
}

double float_p(const std::string& text) {
  if (looks_rational(text)) return parse_rational(text).get_d();
  std::size_t used = 0;
  const double value = std::stod(text, &used);
  if (used != text.size()) throw std::invalid_argument("malformed probability '" + text + "'");
  return value;
}

// p as an exact rational: parsed when given as a/b, else the exact binary value of the double.
Rational rational_of(const std::string& text) {
  return looks_rational(text) ? parse_rational(text) : Rational(float_p(text));
}

std::string key_of(const StateConfig& sc) { return base64_encode(pack_states(sc.states)); }

template <class Scalar>
void check_kernel_sums(VerificationReport& report, const std::string& label, const KernelParams<Scalar>& kp,
                       int d, double tol) {
  std::uint64_t patterns = 1;
  for (int j = 0; j < d; ++j) patterns *= 3;
  for (EdgeState parent : {EdgeState::closed, EdgeState::open_extinct, EdgeState::open_surviving}) {
    Scalar sum(0);
    std::vector<EdgeState> children(d);
    for (std::uint64_t code = 0; code < patterns; ++code) {
      std::uint64_t c = code;
      for (int j = 0; j < d; ++j, c /= 3) children[j] = static_cast<EdgeState>(c % 3);
      sum += kernel_block_probability<Scalar>(parent, children, kp);
    }
    std::string name = label + " parent " + state_label(parent) + " block mass";
    if constexpr (is_exact_v<Scalar>) {
      report.add(std::move(name), "1", to_string(sum), sum == 1);
    } else {
      report.add(std::move(name), "1", fmt(sum), std::abs(sum - 1.0) <= tol);
    }
  }
}

template <class Scalar>
void kernels_suite(VerificationReport& report, int d, int n, const Scalar& p) {
  const GasParams<Scalar> params{d, p};
  const SurvivalSequence<Scalar> survival = k_recursive(n, params);
  for (int m = 1; m <= n; ++m) {
    const KernelParams<Scalar> kp = finite_kernel(m, params, survival);
    check_kernel_sums(report, "m=" + std::to_string(m), kp, d, 1e-12);
    if constexpr (is_exact_v<Scalar>) {
      report.add("theta_" + std::to_string(m) + " == q_" + std::to_string(m), to_string(survival.q[m]),
                 to_string(kp.theta), kp.theta == survival.q[m]);
    } else {
      report.add("theta_" + std::to_string(m) + " == q_" + std::to_string(m), fmt(survival.q[m]),
                 fmt(kp.theta), std::abs(kp.theta - survival.q[m]) <= 1e-12);
    }
  }
  check_kernel_sums(report, "limit", limit_kernel(params), d, 1e-12);
}

}  // namespace

bool VerificationReport::passed() const {
  for (const Check& c : checks) {
    if (!c.passed) return false;
  }
  return true;
}

void VerificationReport::add(std::string name, std::string expected, std::string actual, bool ok) {
  checks.push_back({std::move(name), std::move(expected), std::move(actual), ok});
}

nlohmann::ordered_json VerificationReport::to_json() const {
  nlohmann::ordered_json out;
  out["suite"] = suite;
  out["passed"] = passed();
  out["checks"] = nlohmann::ordered_json::array();
  for (const Check& c : checks) {
    out["checks"].push_back(
        {{"name", c.name}, {"expected", c.expected}, {"actual", c.actual}, {"passed", c.passed}});
  }
  return out;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"recursion", "kernels", "pushforward",
                                              "sampler-gof", "gw", "bernoulli"};
  return names;
}

VerificationReport verify_recursion(const VerifyConfig& cfg) {
  const Rational p = exact_p(cfg.p);
  const GasParams<Rational> params{cfg.d, p};
  params.validate();
  VerificationReport report{"recursion", {}};
  const std::vector<PartitionPair> recursion = partition_recursion(cfg.n, params);
  const SurvivalSequence<Rational> survival = k_recursive(cfg.n, params);
  for (int m = 0; m <= cfg.n; ++m) {
    const PartitionTriple oracle =
        enumerate_partitions(TreeShape::wired_tree(cfg.d, m), p, EnumerationOptions{cfg.cap});
    const std::string suffix = "[" + std::to_string(m) + "]";
    report.add("Z_S" + suffix, to_string(oracle.Z_S), to_string(recursion[m].surviving),
               oracle.Z_S == recursion[m].surviving);
    report.add("Z_X" + suffix, to_string(oracle.Z_X), to_string(recursion[m].extinct),
               oracle.Z_X == recursion[m].extinct);
    const Rational q_oracle = oracle.Z_S / oracle.Z;
    report.add("q" + suffix, to_string(q_oracle), to_string(survival.q[m]), q_oracle == survival.q[m]);
  }
  return report;
}

VerificationReport verify_kernels(const VerifyConfig& cfg) {
  VerificationReport report{"kernels", {}};
  const int n = cfg.n > 0 ? cfg.n : 20;
  if (looks_rational(cfg.p)) {
    const Rational p = parse_rational(cfg.p);
    GasParams<Rational>{cfg.d, p}.validate();
    kernels_suite<Rational>(report, cfg.d, n, p);
  } else {
    const double p = float_p(cfg.p);
    GasParams<double>{cfg.d, p}.validate();
    kernels_suite<double>(report, cfg.d, n, p);
  }
  return report;
}

VerificationReport verify_pushforward(const VerifyConfig& cfg) {
  const Rational p = exact_p(cfg.p);
  const GasParams<Rational> params{cfg.d, p};
  params.validate();
  const TreeShape shape = TreeShape::wired_tree(cfg.d, cfg.n);
  VerificationReport report{"pushforward", {}};

  std::map<std::string, Rational> exact;
  Rational image_mass(0);
  std::uint64_t invalid_images = 0;
  for (auto& [sc, mass] : exact_state_measure(shape, p, EnumerationOptions{cfg.cap})) {
    if (!satisfies_invariants(sc)) ++invalid_images;
    image_mass += mass;
    exact.emplace(key_of(sc), std::move(mass));
  }

  const KernelTable<Rational> table = finite_kernel_table(cfg.n, params);
  std::uint64_t checked = 0;
  std::uint64_t mismatches = 0;
  std::uint64_t matched_images = 0;
  Rational kernel_mass(0);
  for_each_valid_state_config(shape, [&](const StateConfig& sc) {
    ++checked;
    const Rational prob = state_config_probability(sc, table);
    kernel_mass += prob;
    const auto it = exact.find(key_of(sc));
    const Rational expected = it == exact.end() ? Rational(0) : it->second;
    if (it != exact.end()) ++matched_images;
    if (prob != expected) ++mismatches;
  });

  report.add("valid state configurations checked", ">0", std::to_string(checked), checked > 0);
  report.add("kernel product == pushforward mass (mismatches)", "0", std::to_string(mismatches),
             mismatches == 0);
  report.add("every forest image is a valid state configuration", std::to_string(exact.size()),
             std::to_string(matched_images), invalid_images == 0 && matched_images == exact.size());
  report.add("kernel-product total mass", "1", to_string(kernel_mass), kernel_mass == 1);
  report.add("pushforward total mass", "1", to_string(image_mass), image_mass == 1);
  return report;
}

VerificationReport verify_sampler_gof(const VerifyConfig& cfg) {
  const double p = float_p(cfg.p);
  const Rational p_exact = rational_of(cfg.p);
  const TreeShape shape = TreeShape::wired_tree(cfg.d, cfg.n);
  const std::uint64_t replicas = cfg.replicas > 0 ? cfg.replicas : 200000;
  VerificationReport report{"sampler-gof", {}};

  const ExactMeasure measure = exact_measure(shape, p_exact, EnumerationOptions{cfg.cap});
  const SamplerSpec spec{shape, p, cfg.seed, replicas};
  const ForestTally tally = run_forest_tally(spec, cfg.workers);

  std::vector<std::uint64_t> observed;
  std::vector<double> reference;
  std::uint64_t matched = 0;
  for (const MeasureEntry& entry : measure) {
    std::uint64_t mask = 0;
    for (std::size_t i = 0; i < entry.config.bits.size(); ++i) mask |= std::uint64_t{entry.config.bits[i]} << i;
    const auto it = tally.counts.find(mask);
    const std::uint64_t count = it == tally.counts.end() ? 0 : it->second;
    matched += count;
    observed.push_back(count);
    reference.push_back(entry.probability.get_d());
  }
  const GoodnessOfFit gof = goodness_of_fit(observed, reference);

  report.add("samples", std::to_string(replicas), std::to_string(tally.samples), tally.samples == replicas);
  report.add("samples outside the forest support", "0", std::to_string(tally.samples - matched),
             tally.samples == matched);
  report.add("decoded samples that are not forests", "0", std::to_string(tally.non_forests),
             tally.non_forests == 0);
  report.add("state invariant failures", "0", std::to_string(tally.invariant_failures),
             tally.invariant_failures == 0);
  report.add("one-ended violations", "0", std::to_string(tally.one_ended_violations),
             tally.one_ended_violations == 0);
  report.add("total variation distance", "< 0.01", fmt(gof.tv_distance), gof.tv_distance < 0.01);
  report.add("chi-square p-value (df=" + std::to_string(gof.degrees_of_freedom) + ")", "> 0.001",
             fmt(gof.p_value), gof.p_value > 0.001);
  return report;
}

VerificationReport verify_gw(const VerifyConfig& cfg) {
  GwCampaignConfig gw;
  gw.d = cfg.d;
  gw.p = float_p(cfg.p);
  GasParams<double>{gw.d, gw.p}.validate();
  gw.depth = cfg.depth > 0 ? cfg.depth : 30;
  gw.target_clusters = cfg.clusters;
  gw.master_seed = cfg.seed;
  gw.site_depth = cfg.site_depth;
  gw.k_max = cfg.k_max;
  gw.workers = cfg.workers;
  VerificationReport report{"gw", {}};
  if (gw.d * gw.p <= 1.0) {
    report.add("supercritical p", "> 1/d", fmt(gw.p), false);
    return report;
  }

  const GwCampaignResult result = run_gw_campaign(gw);
  const ClusterHistogram& h = result.histogram;
  const GwPmf pmf = gw_total_progeny_pmf(gw.d, gw.k_max);
  std::vector<double> reference(pmf.pmf);
  reference.push_back(pmf.tail);
  const std::vector<std::uint64_t> observed = h.binned();
  const GoodnessOfFit gof = goodness_of_fit(observed, reference);

  const double n = static_cast<double>(h.collected());
  const double p1 = pmf.pmf[0];
  const double p1_hat = static_cast<double>(h.counts[0]) / n;
  const double p1_se = std::sqrt(p1 * (1 - p1) / n);

  report.add("collected finite clusters", ">= " + std::to_string(gw.target_clusters),
             std::to_string(h.collected()), h.collected() >= gw.target_clusters);
  report.add("censored fraction", "< 0.01", fmt(h.censored_fraction()), h.censored_fraction() < 0.01);
  report.add("chi-square p-value vs Bin(d,1/d) total progeny (df=" + std::to_string(gof.degrees_of_freedom) +
                 ")",
             "> 0.001", fmt(gof.p_value), gof.p_value > 0.001);
  report.add("P(size=1) within 3 sigma", fmt(p1) + " +- " + fmt(3 * p1_se), fmt(p1_hat),
             std::abs(p1_hat - p1) <= 3 * p1_se);
  report.add("one-ended violations", "0", std::to_string(result.spine_violations), result.spine_violations == 0);
  return report;
}

VerificationReport verify_bernoulli(const VerifyConfig& cfg) {
  const double p = float_p(cfg.p);
  GasParams<double>{cfg.d, p}.validate();
  const int depth = cfg.depth > 0 ? cfg.depth : 12;
  const std::uint64_t replicas = cfg.replicas > 0 ? cfg.replicas : 10000;
  VerificationReport report{"bernoulli", {}};
  if (cfg.d * p > 1.0) {
    report.add("subcritical or critical p", "<= 1/d", fmt(p), false);
    return report;
  }
  const SamplerSpec spec{TreeShape::window(cfg.d, depth), p, cfg.seed, replicas};
  const BernoulliDiagnostics diag = run_bernoulli_campaign(spec, cfg.workers);

  const double freq = diag.open_frequency();
  const double freq_se = diag.open_frequency_se(p);
  const double corr = diag.sibling_correlation();
  const double corr_se = diag.sibling_correlation_se();
  report.add("2' states observed", "0", std::to_string(diag.surviving), diag.surviving == 0);
  report.add("open-edge frequency within 3 sigma", fmt(p) + " +- " + fmt(3 * freq_se), fmt(freq),
             std::abs(freq - p) <= 3 * freq_se);
  report.add("sibling correlation within 3 sigma", "0 +- " + fmt(3 * corr_se), fmt(corr),
             std::abs(corr) <= 3 * corr_se);
  report.add("one-ended violations", "0", std::to_string(diag.spine_violations), diag.spine_violations == 0);
  return report;
}

VerificationReport run_suite(const std::string& suite, const VerifyConfig& config) {
  VerifyConfig cfg = config;
  if (cfg.p.empty()) cfg.p = suite == "gw" ? "3/4" : suite == "bernoulli" ? "2/5" : "1/2";
  if (suite == "recursion") return verify_recursion(cfg);
  if (suite == "kernels") return verify_kernels(cfg);
  if (suite == "pushforward") return verify_pushforward(cfg);
  if (suite == "sampler-gof") return verify_sampler_gof(cfg);
  if (suite == "gw") return verify_gw(cfg);
  if (suite == "bernoulli") return verify_bernoulli(cfg);
  throw std::invalid_argument("unknown suite '" + suite + "'");
}

}  // namespace arboreal
