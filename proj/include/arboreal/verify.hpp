// Cross-module verification suites with machine-readable verdicts.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "arboreal/enumeration.hpp"

namespace arboreal {

struct Check {
  std::string name;
  std::string expected;
  std::string actual;
  bool passed = false;
};

struct VerificationReport {
  std::string suite;
  std::vector<Check> checks;

  bool passed() const;
  void add(std::string name, std::string expected, std::string actual, bool ok);
  nlohmann::ordered_json to_json() const;
};

struct VerifyConfig {
  int d = 2;
  int n = 2;
  /// Rational "a/b" for exact suites; decimals allowed where sampling is involved.
  /// Empty selects the suite default: 3/4 for gw, 2/5 for bernoulli, else 1/2.
  std::string p;
  std::uint64_t replicas = 0;  // 0 selects the suite default
  std::uint64_t seed = 1234;
  int depth = 0;               // 0 selects the suite default
  std::uint64_t clusters = 100000;
  int site_depth = 4;
  int k_max = 50;
  int cap = kDefaultEnumerationCap;
  int workers = 0;
};

/// Suite names accepted by run_suite.
const std::vector<std::string>& suite_names();

/// partition_recursion == enumerate_partitions (and q_m == Z_S/Z) for depths 0..n.
VerificationReport verify_recursion(const VerifyConfig& cfg);
/// Block probabilities sum to one for every parent state at depths 1..n and
/// in the limit; theta_m == q_m. Exact for rational p, 1e-12 otherwise.
VerificationReport verify_kernels(const VerifyConfig& cfg);
/// Kernel-product probability equals the enumerated pushforward mass for every
/// valid state configuration; total mass is one.
VerificationReport verify_pushforward(const VerifyConfig& cfg);
/// Finite-sampler forests against the exact measure: TV < 0.01, chi-square
/// p-value > 0.001, no invariant or one-endedness violations.
VerificationReport verify_sampler_gof(const VerifyConfig& cfg);
/// Streamed finite clusters against the Bin(d, 1/d) total progeny law.
VerificationReport verify_gw(const VerifyConfig& cfg);
/// Limit windows at p <= 1/d: no 2' states, open marginal p, uncorrelated siblings.
VerificationReport verify_bernoulli(const VerifyConfig& cfg);

/// Throws std::invalid_argument for an unknown suite or bad parameters.
VerificationReport run_suite(const std::string& suite, const VerifyConfig& cfg);

}  // namespace arboreal
