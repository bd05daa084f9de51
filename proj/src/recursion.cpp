#include "arboreal/recursion.hpp"

namespace arboreal {

std::vector<PartitionPair> partition_recursion(int n, const GasParams<Rational>& params) {
  params.validate();
  if (n < 0) throw std::invalid_argument("depth must be nonnegative");
  std::vector<PartitionPair> out;
  out.reserve(n + 1);
  out.push_back({Rational(1), Rational(0)});
  const Rational dp = params.dp();
  for (int m = 1; m <= n; ++m) {
    const PartitionPair& prev = out.back();
    const Rational b = (1 - params.p) * prev.surviving + prev.extinct;
    PartitionPair next;
    next.surviving = dp * prev.surviving * pow(b, params.d - 1);
    next.extinct = pow(b, params.d);
    out.push_back(std::move(next));
  }
  return out;
}

}  // namespace arboreal
