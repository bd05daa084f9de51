#include "arboreal/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "arboreal/campaigns.hpp"
#include "arboreal/codec.hpp"
#include "arboreal/enumeration.hpp"
#include "arboreal/recursion.hpp"
#include "arboreal/samplers.hpp"
#include "arboreal/statistics.hpp"
#include "arboreal/verify.hpp"

namespace arboreal::cli {
namespace {

using ordered_json = nlohmann::ordered_json;

// Usage problems detected after parsing; mapped to exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Partition functions are printed only while d^m stays below this; beyond it
// the values have thousands of digits and the columns read NA.
constexpr double kMaxPrintedZGrowth = 4096.0;
constexpr std::uint64_t kSampleChunk = 256;

std::string fmt(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

bool is_rational_text(const std::string& text) { return text.find_first_of(".eE") == std::string::npos; }

Rational require_rational(const std::string& text) {
  if (!is_rational_text(text)) throw UsageError("exact mode needs p as a rational a/b, got '" + text + "'");
  try {
    return parse_rational(text);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

double parse_float_p(const std::string& text) {
  try {
    if (is_rational_text(text)) return parse_rational(text).get_d();
    std::size_t used = 0;
    const double value = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument("trailing characters");
    return value;
  } catch (const std::exception&) {
    throw UsageError("malformed probability '" + text + "'");
  }
}

void require_params(int d, double p) {
  if (d < 2) throw UsageError("--d must be at least 2");
  if (!(p >= 0.0 && p < 1.0)) throw UsageError("--p must lie in [0, 1)");
}

// Output sink: a file when --output is given, else the caller's stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw UsageError("cannot open output file '" + path + "'");
      stream_ = file_.get();
    }
  }
  std::ostream& operator*() { return *stream_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

void set_workers(int workers) {
  if (workers < 0) throw UsageError("--workers must be nonnegative");
  if (workers > 0) omp_set_num_threads(workers);
}

// ---------------------------------------------------------------- recursion

struct RecursionOptions {
  int d = 2;
  std::string p;
  int n = 0;
  std::string mode;
  std::string format = "csv";
  std::string output;
};

void write_rows(std::ostream& out, const std::string& format, const std::string& mode,
                const std::vector<std::string>& columns, const std::vector<std::vector<std::optional<std::string>>>& rows,
                bool numeric) {
  if (format == "json") {
    ordered_json doc;
    doc["mode"] = mode;
    doc["rows"] = ordered_json::array();
    for (const auto& row : rows) {
      ordered_json obj;
      for (std::size_t c = 0; c < columns.size(); ++c) {
        if (!row[c]) {
          obj[columns[c]] = nullptr;
        } else if (c == 0) {
          obj[columns[c]] = std::stoll(*row[c]);
        } else if (numeric) {
          obj[columns[c]] = std::stod(*row[c]);
        } else {
          obj[columns[c]] = *row[c];
        }
      }
      doc["rows"].push_back(std::move(obj));
    }
    out << doc.dump() << '\n';
    return;
  }
  for (std::size_t c = 0; c < columns.size(); ++c) out << (c ? "," : "") << columns[c];
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < columns.size(); ++c) out << (c ? "," : "") << (row[c] ? *row[c] : "NA");
    out << '\n';
  }
}

int run_recursion(const RecursionOptions& o, std::ostream& out) {
  if (o.n < 0) throw UsageError("--n must be nonnegative");
  const std::string mode = o.mode.empty() ? (is_rational_text(o.p) ? "exact" : "float") : o.mode;
  Sink sink(o.output, out);
  std::vector<std::vector<std::optional<std::string>>> rows;

  if (mode == "exact") {
    const Rational p = require_rational(o.p);
    if (o.d < 2 || p < 0 || p >= 1) throw UsageError("need d >= 2 and 0 <= p < 1");
    const GasParams<Rational> params{o.d, p};
    int z_levels = 0;
    for (double growth = o.d; z_levels < o.n && growth <= kMaxPrintedZGrowth; growth *= o.d) ++z_levels;
    const std::vector<PartitionPair> z = partition_recursion(std::min(o.n, z_levels), params);
    const SurvivalSequence<Rational> survival = k_recursive(o.n, params);
    for (int m = 0; m <= o.n; ++m) {
      std::vector<std::optional<std::string>> row(7);
      row[0] = std::to_string(m);
      if (m < static_cast<int>(z.size())) {
        row[1] = to_string(z[m].surviving);
        row[2] = to_string(z[m].extinct);
      }
      if (m < static_cast<int>(survival.K.size())) row[3] = to_string(survival.K[m]);
      row[4] = to_string(survival.q[m]);
      if (m >= 1) {
        const KernelParams<Rational> kp = finite_kernel(m, params, survival);
        row[5] = to_string(kp.theta);
        row[6] = to_string(kp.alpha);
      }
      rows.push_back(std::move(row));
    }
    write_rows(*sink, o.format, mode, {"m", "Z_S", "Z_X", "K", "q", "theta", "alpha"}, rows, false);
    return kExitOk;
  }
  if (mode != "float") throw UsageError("--mode must be exact or float");
  const double p = parse_float_p(o.p);
  require_params(o.d, p);
  const GasParams<double> params{o.d, p};
  const SurvivalSequence<double> survival = k_recursive(o.n, params);
  for (int m = 0; m <= o.n; ++m) {
    std::vector<std::optional<std::string>> row(5);
    row[0] = std::to_string(m);
    if (m < static_cast<int>(survival.K.size())) row[1] = fmt(survival.K[m]);
    row[2] = fmt(survival.q[m]);
    if (m >= 1) {
      const KernelParams<double> kp = finite_kernel(m, params, survival);
      row[3] = fmt(kp.theta);
      row[4] = fmt(kp.alpha);
    }
    rows.push_back(std::move(row));
  }
  write_rows(*sink, o.format, mode, {"m", "K", "q", "theta", "alpha"}, rows, true);
  return kExitOk;
}

// ---------------------------------------------------------------- enumerate

struct EnumerateOptions {
  int d = 2;
  int n = 0;
  std::string p;
  bool dump_measure = false;
  int cap = -1;
  std::string output;
};

int run_enumerate(const EnumerateOptions& o, std::ostream& out) {
  const Rational p = require_rational(o.p);
  if (o.d < 2 || o.n < 0 || p < 0 || p >= 1) throw UsageError("need d >= 2, n >= 0 and 0 <= p < 1");
  EnumerationOptions options;
  options.cap = o.cap >= 0 ? o.cap : enumeration_cap_from_env();
  const TreeShape shape = TreeShape::wired_tree(o.d, o.n);
  if (shape.edge_count() > static_cast<std::uint64_t>(options.cap)) {
    throw UsageError(std::to_string(shape.edge_count()) + " edges exceed the enumeration cap of " +
                     std::to_string(options.cap));
  }
  const PartitionTriple triple = enumerate_partitions(shape, p, options);
  ordered_json doc;
  doc["Z"] = to_string(triple.Z);
  doc["Z_S"] = to_string(triple.Z_S);
  doc["Z_X"] = to_string(triple.Z_X);
  if (o.dump_measure) {
    doc["measure"] = ordered_json::array();
    for (const MeasureEntry& entry : exact_measure(shape, p, options)) {
      doc["measure"].push_back({{"forest", to_bit_string(entry.config)}, {"probability", to_string(entry.probability)}});
    }
  }
  Sink sink(o.output, out);
  *sink << doc.dump() << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------- sample

struct SampleOptions {
  std::string kind;
  int d = 2;
  std::string p;
  int n = -1;
  int depth = -1;
  std::uint64_t replicas = 1;
  std::uint64_t seed = 0;
  std::string emit = "states";
  bool stream = false;
  std::string stats;
  int site_depth = 0;
  int k_max = 50;
  int workers = 0;
  std::string output;
};

SamplerSpec make_spec(const std::string& kind, int d, const std::string& p_text, int n, int depth,
                      std::uint64_t replicas, std::uint64_t seed) {
  const double p = parse_float_p(p_text);
  require_params(d, p);
  if (kind == "finite") {
    if (n < 0) throw UsageError("finite sampling needs --n");
    return {TreeShape::wired_tree(d, n), p, seed, replicas};
  }
  if (kind == "limit") {
    if (depth < 0) throw UsageError("limit sampling needs --depth");
    return {TreeShape::window(d, depth), p, seed, replicas};
  }
  throw UsageError("sampler kind must be finite or limit");
}

void write_cluster_histogram_csv(std::ostream& out, const ClusterHistogram& h, int d) {
  const GwPmf pmf = gw_total_progeny_pmf(d, h.k_max);
  const std::vector<std::uint64_t> binned = h.binned();
  std::uint64_t total = 0;
  for (auto c : binned) total += c;
  out << "bin,count,expected\n";
  for (int k = 1; k <= h.k_max; ++k) {
    out << k << ',' << binned[k - 1] << ',' << fmt(pmf.pmf[k - 1] * static_cast<double>(total)) << '\n';
  }
  out << "tail," << binned.back() << ',' << fmt(pmf.tail * static_cast<double>(total)) << '\n';
  out << "censored," << h.censored << ",NA\n";
}

ordered_json survival_json(const SurvivalEstimate& est, std::optional<double> q) {
  ordered_json doc;
  doc["estimate"] = est.estimate;
  doc["standard_error"] = est.standard_error;
  doc["samples"] = est.samples;
  if (q) {
    doc["q_n"] = *q;
    doc["within_3_sigma"] = std::abs(est.estimate - *q) <= 3 * est.standard_error + 1e-15;
  }
  return doc;
}

int run_sample(const SampleOptions& o, std::ostream& out) {
  set_workers(o.workers);
  const SamplerSpec spec = make_spec(o.kind, o.d, o.p, o.n, o.depth, o.replicas, o.seed);
  if (o.emit != "states" && o.emit != "forest") throw UsageError("--emit must be states or forest");
  Sink sink(o.output, out);

  if (o.stream) {
    if (o.emit == "forest") throw UsageError("--stream forbids per-edge output");
    const std::string stats = o.stats.empty() ? (spec.shape.wired() ? "survival" : "clusters") : o.stats;
    if (stats == "clusters") {
      if (spec.shape.wired()) throw UsageError("--stats clusters needs a limit window");
      const GwCampaignResult r = run_cluster_stream(spec, o.k_max, o.site_depth, o.workers);
      write_cluster_histogram_csv(*sink, r.histogram, o.d);
      return kExitOk;
    }
    if (stats == "survival") {
      if (!spec.shape.wired()) throw UsageError("--stats survival needs a finite wired tree");
      const SurvivalCounter counter = run_survival_campaign(spec, o.workers);
      const double q = k_recursive(spec.shape.depth(), spec.params()).q.back();
      *sink << survival_json(counter.estimate(), q).dump() << '\n';
      return kExitOk;
    }
    throw UsageError("--stats must be clusters or survival");
  }
  if (!o.stats.empty()) throw UsageError("--stats requires --stream");

  const KernelTable<double> table = kernel_table_for(spec);
  const bool emit_forest = o.emit == "forest";
  for (std::uint64_t first = 0; first < spec.replicas; first += kSampleChunk) {
    const std::uint64_t count = std::min(kSampleChunk, spec.replicas - first);
    std::vector<std::string> lines(count);
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t j = 0; j < static_cast<std::int64_t>(count); ++j) {
      const std::uint64_t r = first + static_cast<std::uint64_t>(j);
      const std::uint64_t seed = spec.replica_seed(r);
      const StateConfig sc = sample_states_serial(spec.shape, table, seed);
      ordered_json rec;
      rec["replica"] = r;
      rec["seed"] = seed;
      rec["states"] = base64_encode(pack_states(sc.states));
      if (emit_forest) rec["forest"] = to_bit_string(phi_inverse(sc));
      lines[j] = rec.dump();
    }
    for (const std::string& line : lines) *sink << line << '\n';
  }
  return kExitOk;
}

// ---------------------------------------------------------------- stats

struct StatsOptions {
  std::string kind;
  std::string input;
  int d = 2;
  std::string p;
  int n = -1;
  int depth = -1;
  std::uint64_t replicas = 0;
  std::uint64_t seed = 1234;
  std::uint64_t clusters = 100000;
  int site_depth = 0;
  int k_max = 50;
  int workers = 0;
  std::string format;
  std::string output;
};

std::vector<StateConfig> read_records(const std::string& path, const TreeShape& shape) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open input file '" + path + "'");
  std::vector<StateConfig> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto rec = nlohmann::json::parse(line);
      const auto bytes = base64_decode(rec.at("states").get<std::string>());
      StateConfig sc(shape, unpack_states(bytes, shape.edge_count()));
      if (!satisfies_invariants(sc)) throw std::invalid_argument("state invariants violated");
      out.push_back(std::move(sc));
    } catch (const std::exception& e) {
      throw UsageError("malformed record on line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (out.empty()) throw UsageError("input file '" + path + "' holds no records");
  return out;
}

ordered_json gw_verdict_json(const ClusterHistogram& h, int d) {
  const GwPmf pmf = gw_total_progeny_pmf(d, h.k_max);
  std::vector<double> reference(pmf.pmf);
  reference.push_back(pmf.tail);
  const GoodnessOfFit gof = goodness_of_fit(h.binned(), reference);
  const double n = static_cast<double>(h.collected());
  const double p1 = pmf.pmf[0];
  const double p1_hat = static_cast<double>(h.counts[0]) / n;
  const double p1_se = std::sqrt(p1 * (1 - p1) / n);
  ordered_json doc;
  doc["collected"] = h.collected();
  doc["censored"] = h.censored;
  doc["censored_fraction"] = h.censored_fraction();
  doc["tv_distance"] = gof.tv_distance;
  doc["chi_square"] = gof.chi_square;
  doc["degrees_of_freedom"] = gof.degrees_of_freedom;
  doc["p_value"] = gof.p_value;
  doc["p_size_1"] = p1_hat;
  doc["p_size_1_expected"] = p1;
  doc["p_size_1_se"] = p1_se;
  doc["passed"] = gof.p_value > 0.001 && std::abs(p1_hat - p1) <= 3 * p1_se && h.censored_fraction() < 0.01;
  return doc;
}

int run_stats(const StatsOptions& o, std::ostream& out) {
  set_workers(o.workers);
  if (o.d < 2) throw UsageError("--d must be at least 2");
  const bool inline_run = o.input.empty();
  if (inline_run && o.p.empty()) throw UsageError("give --input or --p for an inline run");
  const std::string seed_p = o.p.empty() ? "0" : o.p;

  if (o.kind == "survival") {
    if (o.n < 0) throw UsageError("survival needs --n");
    std::optional<double> q;
    SurvivalEstimate est;
    if (inline_run) {
      const SamplerSpec spec = make_spec("finite", o.d, o.p, o.n, -1, o.replicas ? o.replicas : 100000, o.seed);
      est = run_survival_campaign(spec, o.workers).estimate();
    } else {
      const auto records = read_records(o.input, TreeShape::wired_tree(o.d, o.n));
      std::vector<ForestConfig> forests;
      forests.reserve(records.size());
      for (const auto& sc : records) forests.push_back(phi_inverse(sc));
      est = survival_frequency(forests);
    }
    if (!o.p.empty()) {
      const double p = parse_float_p(o.p);
      require_params(o.d, p);
      q = k_recursive(o.n, GasParams<double>{o.d, p}).q.back();
    }
    Sink sink(o.output, out);
    if (o.format == "csv") {
      *sink << "estimate,standard_error,samples\n" << fmt(est.estimate) << ',' << fmt(est.standard_error) << ','
            << est.samples << '\n';
    } else {
      *sink << survival_json(est, q).dump() << '\n';
    }
    return kExitOk;
  }

  if (o.kind == "clusters" || o.kind == "gw") {
    if (o.depth < 2) throw UsageError(o.kind + " needs a window --depth >= 2");
    ClusterHistogram histogram(o.k_max);
    if (!inline_run) {
      for (const auto& sc : read_records(o.input, TreeShape::window(o.d, o.depth))) {
        for (const ClusterSample& c : finite_cluster_samples(sc, o.site_depth)) histogram.add(c);
      }
    } else if (o.kind == "gw") {
      GwCampaignConfig cfg;
      cfg.d = o.d;
      cfg.p = parse_float_p(o.p);
      require_params(o.d, cfg.p);
      cfg.depth = o.depth;
      cfg.target_clusters = o.clusters;
      cfg.master_seed = o.seed;
      cfg.site_depth = o.site_depth > 0 ? o.site_depth : 4;
      cfg.k_max = o.k_max;
      cfg.workers = o.workers;
      histogram = run_gw_campaign(cfg).histogram;
    } else {
      const SamplerSpec spec = make_spec("limit", o.d, o.p, -1, o.depth, o.replicas ? o.replicas : 100, o.seed);
      histogram = run_cluster_stream(spec, o.k_max, o.site_depth, o.workers).histogram;
    }
    if (histogram.collected() == 0) throw UsageError("no finite clusters were collected");
    Sink sink(o.output, out);
    const std::string format = o.format.empty() ? (o.kind == "gw" ? "json" : "csv") : o.format;
    if (format == "csv") {
      write_cluster_histogram_csv(*sink, histogram, o.d);
    } else {
      *sink << gw_verdict_json(histogram, o.d).dump() << '\n';
    }
    return kExitOk;
  }

  if (o.kind == "bernoulli") {
    if (o.depth < 1) throw UsageError("bernoulli needs a window --depth >= 1");
    BernoulliDiagnostics diag;
    double p = 0.0;
    if (inline_run) {
      const SamplerSpec spec = make_spec("limit", o.d, o.p, -1, o.depth, o.replicas ? o.replicas : 10000, o.seed);
      p = spec.p;
      diag = run_bernoulli_campaign(spec, o.workers);
    } else {
      for (const auto& sc : read_records(o.input, TreeShape::window(o.d, o.depth))) diag.add(sc);
      p = o.p.empty() ? diag.open_frequency() : parse_float_p(o.p);
    }
    ordered_json doc;
    doc["edges"] = diag.edges;
    doc["open_frequency"] = diag.open_frequency();
    doc["open_frequency_se"] = diag.open_frequency_se(p);
    doc["surviving_states"] = diag.surviving;
    doc["sibling_pairs"] = diag.pairs;
    doc["sibling_correlation"] = diag.sibling_correlation();
    doc["sibling_correlation_se"] = diag.sibling_correlation_se();
    doc["one_ended_violations"] = diag.spine_violations;
    Sink sink(o.output, out);
    *sink << doc.dump() << '\n';
    return kExitOk;
  }
  throw UsageError("stats kind must be survival, clusters, gw or bernoulli");
}

// ---------------------------------------------------------------- verify

struct VerifyOptions {
  std::string suite;
  VerifyConfig cfg;
  std::string output;
};

int run_verify(VerifyOptions o, std::ostream& out) {
  set_workers(o.cfg.workers);
  const auto& names = suite_names();
  if (std::find(names.begin(), names.end(), o.suite) == names.end()) {
    throw UsageError("unknown suite '" + o.suite + "'");
  }
  if (o.cfg.cap < 0) o.cfg.cap = enumeration_cap_from_env();
  VerificationReport report;
  try {
    report = run_suite(o.suite, o.cfg);
  } catch (const std::length_error& e) {
    throw UsageError(e.what());
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  } catch (const std::domain_error& e) {
    throw UsageError(e.what());
  }
  Sink sink(o.output, out);
  *sink << report.to_json().dump(2) << '\n';
  return report.passed() ? kExitOk : kExitVerificationFailed;
}

}  // namespace

int enumeration_cap_from_env() {
  const char* value = std::getenv(kEnumerationCapEnv);
  if (value == nullptr || *value == '\0') return kDefaultEnumerationCap;
  int cap = 0;
  const char* end = value + std::char_traits<char>::length(value);
  const auto res = std::from_chars(value, end, cap);
  if (res.ec != std::errc() || res.ptr != end || cap < 0 || cap > 63) {
    throw std::invalid_argument(std::string(kEnumerationCapEnv) + " must be an integer in [0, 63]");
  }
  return cap;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact computation and sampling for the arboreal gas on wired d-ary trees", "arboreal"};
  app.require_subcommand(1);

  RecursionOptions rec;
  auto* recursion = app.add_subcommand("recursion", "Partition functions, survival probabilities and kernels");
  recursion->add_option("--d", rec.d, "Branching factor")->required();
  recursion->add_option("--p", rec.p, "Edge parameter: a/b, or a decimal in float mode")->required();
  recursion->add_option("--n", rec.n, "Depth")->required();
  recursion->add_option("--mode", rec.mode, "exact | float (default: exact for a/b)")
      ->check(CLI::IsMember({"exact", "float"}));
  recursion->add_option("--format", rec.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  recursion->add_option("--output", rec.output, "Output file (default stdout)");

  EnumerateOptions en;
  auto* enumerate = app.add_subcommand("enumerate", "Brute-force partition functions on a small wired tree");
  enumerate->add_option("--d", en.d, "Branching factor")->required();
  enumerate->add_option("--n", en.n, "Depth")->required();
  enumerate->add_option("--p", en.p, "Edge parameter as a/b")->required();
  enumerate->add_flag("--dump-measure", en.dump_measure, "Add every forest with its probability");
  enumerate->add_option("--cap", en.cap, "Largest edge count to enumerate");
  enumerate->add_option("--output", en.output, "Output file (default stdout)");

  SampleOptions sa;
  auto* sample = app.add_subcommand("sample", "Sample configurations (NDJSON) or stream statistics");
  sample->add_option("kind", sa.kind, "finite | limit")->required()->check(CLI::IsMember({"finite", "limit"}));
  sample->add_option("--d", sa.d, "Branching factor")->required();
  sample->add_option("--p", sa.p, "Edge parameter")->required();
  sample->add_option("--n", sa.n, "Depth of the wired tree (finite)");
  sample->add_option("--depth", sa.depth, "Window depth (limit)");
  sample->add_option("--replicas", sa.replicas, "Number of replicas");
  sample->add_option("--seed", sa.seed, "Master seed");
  sample->add_option("--emit", sa.emit, "states | forest (forest adds the decoded bit string)");
  sample->add_flag("--stream", sa.stream, "Depth-first generation feeding a statistics visitor");
  sample->add_option("--stats", sa.stats, "clusters | survival (with --stream)");
  sample->add_option("--site-depth", sa.site_depth, "Deepest level of cluster sites (0 = depth - 1)");
  sample->add_option("--k-max", sa.k_max, "Largest histogram bin before the tail");
  sample->add_option("--workers", sa.workers, "OpenMP threads (0 = default)");
  sample->add_option("--output", sa.output, "Output file (default stdout)");

  StatsOptions st;
  auto* stats = app.add_subcommand("stats", "Statistics from an NDJSON file or an inline sampling run");
  stats->add_option("kind", st.kind, "survival | clusters | gw | bernoulli")
      ->required()
      ->check(CLI::IsMember({"survival", "clusters", "gw", "bernoulli"}));
  stats->add_option("--input", st.input, "NDJSON produced by the sample command");
  stats->add_option("--d", st.d, "Branching factor")->required();
  stats->add_option("--p", st.p, "Edge parameter (inline runs and reference values)");
  stats->add_option("--n", st.n, "Depth of the wired tree");
  stats->add_option("--depth", st.depth, "Window depth");
  stats->add_option("--replicas", st.replicas, "Replicas for inline runs");
  stats->add_option("--seed", st.seed, "Master seed for inline runs");
  stats->add_option("--clusters", st.clusters, "Finite clusters to collect (gw)");
  stats->add_option("--site-depth", st.site_depth, "Deepest level of cluster sites");
  stats->add_option("--k-max", st.k_max, "Largest histogram bin before the tail");
  stats->add_option("--workers", st.workers, "OpenMP threads (0 = default)");
  stats->add_option("--format", st.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  stats->add_option("--output", st.output, "Output file (default stdout)");

  VerifyOptions ve;
  ve.cfg.cap = -1;
  auto* verify = app.add_subcommand("verify", "Run a verification suite; exit 1 on failure");
  verify->add_option("--suite", ve.suite, "recursion | kernels | pushforward | sampler-gof | gw | bernoulli")
      ->required();
  verify->add_option("--d", ve.cfg.d, "Branching factor");
  verify->add_option("--n", ve.cfg.n, "Depth of the wired tree");
  verify->add_option("--p", ve.cfg.p, "Edge parameter");
  verify->add_option("--replicas", ve.cfg.replicas, "Replicas for sampling suites");
  verify->add_option("--seed", ve.cfg.seed, "Master seed");
  verify->add_option("--depth", ve.cfg.depth, "Window depth for sampling suites");
  verify->add_option("--clusters", ve.cfg.clusters, "Finite clusters to collect (gw)");
  verify->add_option("--site-depth", ve.cfg.site_depth, "Deepest level of cluster sites (gw)");
  verify->add_option("--k-max", ve.cfg.k_max, "Largest histogram bin before the tail (gw)");
  verify->add_option("--cap", ve.cfg.cap, "Enumeration cap");
  verify->add_option("--workers", ve.cfg.workers, "OpenMP threads (0 = default)");
  verify->add_option("--output", ve.output, "Output file (default stdout)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (recursion->parsed()) return run_recursion(rec, out);
    if (enumerate->parsed()) return run_enumerate(en, out);
    if (sample->parsed()) return run_sample(sa, out);
    if (stats->parsed()) return run_stats(st, out);
    if (verify->parsed()) return run_verify(ve, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::length_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace arboreal::cli
