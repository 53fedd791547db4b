#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace edgepost {

/// Largest node count accepted without an override. The engine keeps about
/// n * 2^n log weights alive; 24 nodes is roughly 1.7 GB.
inline constexpr unsigned kDefaultMaxNodes = 24;
/// Ceiling reachable with the explicit override.
inline constexpr unsigned kExtendedMaxNodes = 26;

/// A subset of the attribute indices {0, ..., n-1}; bit i is attribute i.
class NodeSet {
 public:
  using mask_type = std::uint64_t;

  constexpr NodeSet() noexcept = default;
  constexpr explicit NodeSet(mask_type mask) noexcept : mask_(mask) {}

  static constexpr NodeSet single(unsigned i) noexcept { return NodeSet(mask_type{1} << i); }
  /// {0, ..., n-1}
  static constexpr NodeSet full(unsigned n) noexcept {
    return NodeSet(n >= 64 ? ~mask_type{0} : (mask_type{1} << n) - 1);
  }

  constexpr mask_type mask() const noexcept { return mask_; }
  constexpr unsigned size() const noexcept { return static_cast<unsigned>(std::popcount(mask_)); }
  constexpr bool empty() const noexcept { return mask_ == 0; }
  constexpr bool contains(unsigned i) const noexcept { return (mask_ >> i) & 1u; }
  constexpr bool is_subset_of(NodeSet other) const noexcept { return (mask_ & ~other.mask_) == 0; }

  constexpr NodeSet with(unsigned i) const noexcept { return NodeSet(mask_ | (mask_type{1} << i)); }
  constexpr NodeSet without(unsigned i) const noexcept { return NodeSet(mask_ & ~(mask_type{1} << i)); }

  friend constexpr NodeSet operator|(NodeSet a, NodeSet b) noexcept { return NodeSet(a.mask_ | b.mask_); }
  friend constexpr NodeSet operator&(NodeSet a, NodeSet b) noexcept { return NodeSet(a.mask_ & b.mask_); }
  /// Set difference.
  friend constexpr NodeSet operator-(NodeSet a, NodeSet b) noexcept { return NodeSet(a.mask_ & ~b.mask_); }
  friend constexpr bool operator==(NodeSet, NodeSet) noexcept = default;

  /// Members in ascending order.
  std::vector<unsigned> members() const;

 private:
  mask_type mask_ = 0;
};

/// Number of attributes and maximum indegree of a problem.
struct ProblemDims {
  unsigned n = 0;
  unsigned k = 0;

  /// Throws PreconditionError unless 1 <= n, k <= n-1; CapExceeded if n > cap.
  void validate(unsigned cap = kDefaultMaxNodes) const;
};

/// Index of `s` in the 2^(n-1) table over V - {node}: bit `node` deleted and
/// the bits above it shifted down by one. `node` must not be in `s`.
constexpr std::size_t compress(NodeSet::mask_type s, unsigned node) noexcept {
  const NodeSet::mask_type low = s & ((NodeSet::mask_type{1} << node) - 1);
  return static_cast<std::size_t>(low | ((s >> (node + 1)) << node));
}

/// Inverse of compress().
constexpr NodeSet::mask_type expand(std::size_t index, unsigned node) noexcept {
  const auto idx = static_cast<NodeSet::mask_type>(index);
  const NodeSet::mask_type low = idx & ((NodeSet::mask_type{1} << node) - 1);
  return low | ((idx >> node) << (node + 1));
}

/// Every subset of `ground` with at most `max_size` elements, ordered by
/// cardinality and then by mask value. Requires max_size <= |ground|.
std::vector<NodeSet> enumerate_subsets(NodeSet ground, unsigned max_size);

/// sum_{j=0}^{k} C(n, j) in exact arithmetic. Requires k <= n <= 64; throws
/// OverflowError when the sum does not fit in 64 bits.
std::uint64_t binomial_tail(unsigned n, unsigned k);

/// C(n, j) exactly; throws OverflowError past 64 bits.
std::uint64_t binomial(unsigned n, unsigned j);

/// 2^n exp(-n/4 + k - k^2/n), an upper bound on binomial_tail(n, k) when n > 2k.
double chernoff_tail_bound(unsigned n, unsigned k);

}  // namespace edgepost
