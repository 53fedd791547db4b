#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "edgepost/lattice.hpp"
#include "edgepost/logweight.hpp"

namespace edgepost {

/// Dense table of 2^n log weights indexed by subset mask.
class LatticeTable {
 public:
  /// Largest dimension a table may be allocated with.
  static constexpr unsigned kMaxDims = 30;

  LatticeTable() = default;
  explicit LatticeTable(unsigned n, LogWeight fill = LogWeight::zero());

  unsigned dims() const noexcept { return n_; }
  std::size_t size() const noexcept { return entries_.size(); }

  LogWeight& operator[](std::size_t mask) noexcept { return entries_[mask]; }
  LogWeight operator[](std::size_t mask) const noexcept { return entries_[mask]; }
  LogWeight& operator[](NodeSet s) noexcept { return entries_[s.mask()]; }
  LogWeight operator[](NodeSet s) const noexcept { return entries_[s.mask()]; }

  std::span<LogWeight> entries() noexcept { return entries_; }
  std::span<const LogWeight> entries() const noexcept { return entries_; }

  void fill(LogWeight value);

 private:
  unsigned n_ = 0;
  std::vector<LogWeight> entries_{LogWeight::zero()};
};

/// Work counters for the truncated sweeps.
struct TransformStats {
  /// Entries written across all sweeps; the A_1 + ... + A_n cost measure,
  /// which also counts entries whose one-term sum leaves them unchanged.
  std::uint64_t updates = 0;
  /// log_sum evaluations actually performed.
  std::uint64_t additions = 0;
};

/// k-truncated downward transform, t(T) = sum over supersets S of T of s(S).
///
/// Consumes `s` and sweeps it in place, bit 0 first. On return the entries
/// with |T| <= k hold t(T); the remaining entries hold partial sweep values
/// and must not be read.
LatticeTable downward_transform_truncated(LatticeTable s, unsigned k, TransformStats* stats = nullptr);

/// Upward transform t(T) = sum over subsets S of T of s(S), for inputs that
/// vanish above cardinality k. All 2^n outputs are exact.
///
/// Throws PreconditionError if some s(S) with |S| > k is nonzero.
LatticeTable upward_transform_truncated(LatticeTable s, unsigned k, TransformStats* stats = nullptr);

/// Largest dimension accepted by the O(3^n) reference transforms.
inline constexpr unsigned kNaiveTransformMaxDims = 14;

/// Reference transforms by direct summation in O(3^n). Throw CapExceeded above
/// kNaiveTransformMaxDims.
LatticeTable naive_downward(const LatticeTable& s);
LatticeTable naive_upward(const LatticeTable& s);

}  // namespace edgepost
