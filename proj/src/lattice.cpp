#include "edgepost/lattice.hpp"

#include <cmath>
#include <string>

#include "edgepost/errors.hpp"

namespace edgepost {

namespace {

__extension__ typedef unsigned __int128 Wide;

// Scatters the low bits of `packed` onto the set bits of `ground`, in order.
// Monotone in `packed`, so ascending packed values give ascending masks.
NodeSet::mask_type deposit(NodeSet::mask_type packed, NodeSet::mask_type ground) {
  NodeSet::mask_type out = 0;
  for (NodeSet::mask_type bit = 1; ground != 0; bit <<= 1) {
    const NodeSet::mask_type lowest = ground & -ground;
    if (packed & bit) out |= lowest;
    ground ^= lowest;
  }
  return out;
}

}  // namespace

std::vector<unsigned> NodeSet::members() const {
  std::vector<unsigned> out;
  out.reserve(size());
  for (mask_type rest = mask_; rest != 0; rest &= rest - 1) {
    out.push_back(static_cast<unsigned>(std::countr_zero(rest)));
  }
  return out;
}

void ProblemDims::validate(unsigned cap) const {
  if (n < 1) throw PreconditionError("at least one attribute is required");
  if (k > n - 1) {
    throw PreconditionError("maximum indegree " + std::to_string(k) + " exceeds n-1 = " +
                            std::to_string(n - 1));
  }
  if (n > cap) {
    throw CapExceeded(std::to_string(n) + " attributes exceed the node cap of " + std::to_string(cap));
  }
}

std::vector<NodeSet> enumerate_subsets(NodeSet ground, unsigned max_size) {
  const unsigned width = ground.size();
  if (max_size > width) {
    throw PreconditionError("max_size " + std::to_string(max_size) + " exceeds |ground| = " +
                            std::to_string(width));
  }
  if (width >= 64) throw PreconditionError("ground set must have fewer than 64 members");

  std::vector<NodeSet> out;
  out.reserve(static_cast<std::size_t>(binomial_tail(width, max_size)));
  out.emplace_back(0);
  const NodeSet::mask_type limit = NodeSet::mask_type{1} << width;
  for (unsigned c = 1; c <= max_size; ++c) {
    // Gosper's hack: successive packed masks of popcount c in ascending order.
    NodeSet::mask_type packed = (NodeSet::mask_type{1} << c) - 1;
    while (packed < limit) {
      out.emplace_back(deposit(packed, ground.mask()));
      const NodeSet::mask_type lowest = packed & -packed;
      const NodeSet::mask_type ripple = packed + lowest;
      packed = (((ripple ^ packed) >> 2) / lowest) | ripple;
    }
  }
  return out;
}

std::uint64_t binomial(unsigned n, unsigned j) {
  if (j > n) return 0;
  j = std::min(j, n - j);
  Wide c = 1;
  for (unsigned t = 0; t < j; ++t) {
    // c * (n - t) / (t + 1) stays exact: c * (n - t) is divisible by (t + 1).
    c = c * (n - t) / (t + 1);
    if (c > UINT64_MAX) throw OverflowError("C(" + std::to_string(n) + ", " + std::to_string(j) + ") overflows");
  }
  return static_cast<std::uint64_t>(c);
}

std::uint64_t binomial_tail(unsigned n, unsigned k) {
  if (k > n || n > 64) {
    throw PreconditionError("binomial_tail requires k <= n <= 64, got n=" + std::to_string(n) +
                            " k=" + std::to_string(k));
  }
  std::uint64_t sum = 0;
  for (unsigned j = 0; j <= k; ++j) {
    if (__builtin_add_overflow(sum, binomial(n, j), &sum)) {
      throw OverflowError("binomial tail B(" + std::to_string(n) + ", " + std::to_string(k) +
                          ") exceeds 64 bits");
    }
  }
  return sum;
}

double chernoff_tail_bound(unsigned n, unsigned k) {
  if (n <= 2 * k) {
    throw PreconditionError("chernoff_tail_bound requires n > 2k, got n=" + std::to_string(n) +
                            " k=" + std::to_string(k));
  }
  const double nn = n;
  const double kk = k;
  return std::ldexp(std::exp(-nn / 4.0 + kk - kk * kk / nn), static_cast<int>(n));
}

}  // namespace edgepost
