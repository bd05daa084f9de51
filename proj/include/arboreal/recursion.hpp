// Partition-function recursions, survival probabilities and hidden-chain
// kernel parameters for the wired d-ary tree.
//
// Everything is templated on the scalar: Rational for exact verification at
// small depth, double for sampling-scale depth. The double path never forms
// partition functions or K directly (both overflow); it iterates on q.
#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <type_traits>
#include <vector>

#include "arboreal/config.hpp"
#include "arboreal/rational.hpp"

namespace arboreal {

template <class Scalar>
inline constexpr bool is_exact_v = std::is_same_v<Scalar, Rational>;

template <class Scalar>
struct GasParams {
  int d = 2;
  Scalar p = 0;

  /// Throws std::invalid_argument (d) or std::domain_error (p).
  void validate() const {
    if (d < 2) throw std::invalid_argument("branching factor must be at least 2");
    if (!(p >= 0 && p < 1)) throw std::domain_error("p must lie in [0, 1)");
  }
  Scalar dp() const { return Scalar(d) * p; }
};

template <class Scalar>
Scalar ipow(const Scalar& base, int exponent) {
  Scalar result = 1;
  for (int i = 0; i < exponent; ++i) result *= base;
  return result;
}

/// (Z^S_m, Z^x_m): weight of forests with the root joined to the boundary, and of the rest.
struct PartitionPair {
  Rational surviving;
  Rational extinct;
  Rational total() const { return surviving + extinct; }
};

/// Z^S_0 = 1, Z^x_0 = 0 and, with B = (1-p)Z^S + Z^x of the previous depth,
///   Z^S_m = d p Z^S_{m-1} B^{d-1},   Z^x_m = B^d.
/// Returns depths 0..n. Values grow doubly exponentially in n.
std::vector<PartitionPair> partition_recursion(int n, const GasParams<Rational>& params);

/// q_0..q_n and K_0..K_n with q_m = 1/(1 + K_m). When p = 0 the sequence is
/// degenerate: q_m = 0 for m >= 1 and K holds only K_0 = 0.
template <class Scalar>
struct SurvivalSequence {
  std::vector<Scalar> q;
  std::vector<Scalar> K;
  bool degenerate = false;
};

/// K_m = (1-p)/(dp) + K_{m-1}/(dp) from K_0 = 0. The double path instead runs
/// q_m = dp q_{m-1} / (dp q_{m-1} + 1 - p q_{m-1}) and reports K = 1/q - 1.
template <class Scalar>
SurvivalSequence<Scalar> k_recursive(int n, const GasParams<Scalar>& params) {
  params.validate();
  if (n < 0) throw std::invalid_argument("depth must be nonnegative");
  SurvivalSequence<Scalar> seq;
  seq.q.reserve(n + 1);
  seq.q.push_back(Scalar(1));
  seq.K.push_back(Scalar(0));
  if (params.p == 0) {
    seq.degenerate = true;
    for (int m = 1; m <= n; ++m) seq.q.push_back(Scalar(0));
    return seq;
  }
  const Scalar dp = params.dp();
  for (int m = 1; m <= n; ++m) {
    if constexpr (is_exact_v<Scalar>) {
      Scalar k = (Scalar(1) - params.p) / dp + seq.K.back() / dp;
      seq.q.push_back(Scalar(1) / (Scalar(1) + k));
      seq.K.push_back(std::move(k));
    } else {
      const Scalar prev = seq.q.back();
      const Scalar spawn = dp * prev;
      const Scalar q = spawn / (spawn + (Scalar(1) - params.p * prev));
      seq.q.push_back(q);
      seq.K.push_back(Scalar(1) / q - Scalar(1));
    }
  }
  return seq;
}

/// K_n = (1-p)/(dp-1) (1 - (dp)^{-n}) for p != 1/d and (1 - 1/d) n at p = 1/d.
/// Throws std::domain_error when p = 0. The double path selects the critical
/// branch when |dp - 1| <= 1e-12 and defers to k_recursive when |dp - 1| < 1e-6.
template <class Scalar>
Scalar k_closed_form(int n, const GasParams<Scalar>& params) {
  params.validate();
  if (n < 0) throw std::invalid_argument("depth must be nonnegative");
  if (params.p == 0) throw std::domain_error("K is undefined at p = 0");
  const Scalar dp = params.dp();
  const Scalar one(1);
  if constexpr (is_exact_v<Scalar>) {
    if (dp == one) return (one - Scalar(1, params.d)) * Scalar(n);
    return (one - params.p) / (dp - one) * (one - one / ipow<Scalar>(dp, n));
  } else {
    const double gap = dp - 1.0;
    if (std::abs(gap) <= 1e-12) return (1.0 - 1.0 / params.d) * n;
    if (std::abs(gap) < 1e-6) return k_recursive(n, params).K.back();
    return (1.0 - params.p) / gap * -std::expm1(-n * std::log1p(gap));
  }
}

/// q_{d,p} = (dp - 1) / (p (d - 1)) above p = 1/d, else 0.
template <class Scalar>
Scalar survival_prob_limit(const GasParams<Scalar>& params) {
  params.validate();
  const Scalar dp = params.dp();
  if (!(dp > Scalar(1))) return Scalar(0);
  return (dp - Scalar(1)) / (params.p * Scalar(params.d - 1));
}

/// Normalized block weights: theta is the probability that a closed edge's
/// head spawns a surviving child, alpha the per-child probability of an
/// extinct open edge.
template <class Scalar>
struct KernelParams {
  Scalar theta = 0;
  Scalar alpha = 0;

  friend bool operator==(const KernelParams&, const KernelParams&) = default;
};

/// Kernel for a vertex at remaining depth m >= 1, from q_{m-1}. With
/// A = 1 - p q_{m-1}:
///   theta_m = d p q A^{d-1} / (d p q A^{d-1} + A^d),   alpha_m = p (1 - q) / A.
template <class Scalar>
KernelParams<Scalar> finite_kernel(int m, const GasParams<Scalar>& params,
                                   const SurvivalSequence<Scalar>& survival) {
  params.validate();
  if (m < 1) throw std::invalid_argument("finite_kernel needs remaining depth m >= 1");
  if (static_cast<std::size_t>(m - 1) >= survival.q.size()) {
    throw std::out_of_range("survival sequence does not reach q_{m-1}");
  }
  const Scalar& q = survival.q[m - 1];
  const Scalar a = Scalar(1) - params.p * q;
  const Scalar spawn = params.dp() * q * ipow<Scalar>(a, params.d - 1);
  KernelParams<Scalar> kp;
  kp.theta = spawn / (spawn + ipow<Scalar>(a, params.d));
  kp.alpha = params.p * (Scalar(1) - q) / a;
  return kp;
}

/// (q_{d,p}, 1/d) above p = 1/d; (0, p) at or below it.
template <class Scalar>
KernelParams<Scalar> limit_kernel(const GasParams<Scalar>& params) {
  params.validate();
  if (params.dp() > Scalar(1)) {
    return {survival_prob_limit(params), Scalar(1) / Scalar(params.d)};
  }
  return {Scalar(0), params.p};
}

/// Probability of an exact child pattern given the parent edge's state.
/// Throws std::invalid_argument if the pattern is empty.
template <class Scalar>
Scalar kernel_block_probability(EdgeState parent, std::span<const EdgeState> children,
                                const KernelParams<Scalar>& kp) {
  if (children.empty()) throw std::invalid_argument("empty child pattern");
  const int d = static_cast<int>(children.size());
  int surviving = 0;
  int extinct = 0;
  for (EdgeState c : children) {
    switch (c) {
      case EdgeState::closed: break;
      case EdgeState::open_extinct: ++extinct; break;
      case EdgeState::open_surviving: ++surviving; break;
      default: throw std::invalid_argument("malformed edge state");
    }
  }
  if (surviving > 1) return Scalar(0);
  const Scalar one(1);
  const Scalar bernoulli =
      ipow<Scalar>(kp.alpha, extinct) * ipow<Scalar>(one - kp.alpha, d - surviving - extinct);
  switch (parent) {
    case EdgeState::closed:
      if (surviving == 1) return kp.theta / Scalar(d) * bernoulli;
      return (one - kp.theta) * bernoulli;
    case EdgeState::open_extinct:
      return surviving == 0 ? bernoulli : Scalar(0);
    case EdgeState::open_surviving:
      return surviving == 1 ? bernoulli / Scalar(d) : Scalar(0);
  }
  throw std::invalid_argument("malformed parent state");
}

/// Kernel parameters per vertex level k in [0, depth): the kernel used to
/// draw the children of every vertex at distance k from the root.
template <class Scalar>
struct KernelTable {
  int d = 2;
  std::vector<KernelParams<Scalar>> by_vertex_level;

  const KernelParams<Scalar>& at(int level) const { return by_vertex_level[level]; }
  int depth() const { return static_cast<int>(by_vertex_level.size()); }
};

/// Wired tree of depth n: level k uses finite_kernel(n - k).
template <class Scalar>
KernelTable<Scalar> finite_kernel_table(int n, const GasParams<Scalar>& params) {
  const SurvivalSequence<Scalar> survival = k_recursive(n > 0 ? n - 1 : 0, params);
  KernelTable<Scalar> table{params.d, {}};
  table.by_vertex_level.reserve(n);
  for (int k = 0; k < n; ++k) table.by_vertex_level.push_back(finite_kernel(n - k, params, survival));
  return table;
}

/// Window of depth L sampled with the limiting kernel at every level.
template <class Scalar>
KernelTable<Scalar> limit_kernel_table(int depth, const GasParams<Scalar>& params) {
  return {params.d, std::vector<KernelParams<Scalar>>(depth, limit_kernel(params))};
}

}  // namespace arboreal
