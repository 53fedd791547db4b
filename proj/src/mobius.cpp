#include "edgepost/mobius.hpp"

#include <algorithm>
#include <string>

#include "edgepost/errors.hpp"

namespace edgepost {

using Mask = NodeSet::mask_type;

LatticeTable::LatticeTable(unsigned n, LogWeight fill) : n_(n) {
  if (n > kMaxDims) {
    throw CapExceeded("lattice table of dimension " + std::to_string(n) + " exceeds " +
                      std::to_string(kMaxDims));
  }
  entries_.assign(std::size_t{1} << n, fill);
}

void LatticeTable::fill(LogWeight value) { std::fill(entries_.begin(), entries_.end(), value); }

namespace {

// Visits every mask over `width` bits whose popcount is at most `k`.
template <typename Fn>
void for_each_low_popcount(unsigned width, unsigned k, Fn&& fn) {
  if (k >= width) {
    const Mask end = Mask{1} << width;
    for (Mask x = 0; x < end; ++x) fn(x);
    return;
  }
  for (NodeSet s : enumerate_subsets(NodeSet::full(width), k)) fn(s.mask());
}

}  // namespace

LatticeTable downward_transform_truncated(LatticeTable s, unsigned k, TransformStats* stats) {
  const unsigned n = s.dims();
  std::uint64_t updates = 0;
  std::uint64_t additions = 0;
  auto entries = s.entries();

  for (unsigned i = 0; i < n; ++i) {
    const Mask bit = Mask{1} << i;
    const unsigned high_width = n - i - 1;
    const Mask high_count = Mask{1} << high_width;
    // Swept coordinates are bits 0..i. Only prefixes with popcount <= k are
    // updated; among them, bit i = 0 takes a sum and bit i = 1 keeps its value.
    for_each_low_popcount(i, k, [&](Mask low) {
      const bool room_for_bit = static_cast<unsigned>(std::popcount(low)) < k;
      for (Mask high = 0; high < high_count; ++high) {
        const Mask base = low | (high << (i + 1));
        entries[base] = entries[base] + entries[base | bit];
      }
      additions += high_count;
      updates += room_for_bit ? 2 * high_count : high_count;
    });
  }
  if (stats != nullptr) {
    stats->updates += updates;
    stats->additions += additions;
  }
  return s;
}

LatticeTable upward_transform_truncated(LatticeTable s, unsigned k, TransformStats* stats) {
  const unsigned n = s.dims();
  auto entries = s.entries();
  for (std::size_t x = 0; x < entries.size(); ++x) {
    if (static_cast<unsigned>(std::popcount(x)) > k && !entries[x].is_zero()) {
      throw PreconditionError("upward transform input is nonzero at a set of size " +
                              std::to_string(std::popcount(x)) + " > k = " + std::to_string(k));
    }
  }

  std::uint64_t updates = 0;
  for (unsigned i = 0; i < n; ++i) {
    const Mask bit = Mask{1} << i;
    const Mask low_count = bit;
    // Unswept coordinates are bits i+1..n-1. A source entry whose unswept part
    // already has more than k members is still identically zero.
    for_each_low_popcount(n - i - 1, k, [&](Mask high) {
      const Mask prefix = (high << (i + 1)) | bit;
      for (Mask low = 0; low < low_count; ++low) {
        const Mask target = prefix | low;
        entries[target] = entries[target] + entries[target ^ bit];
      }
      updates += low_count;
    });
  }
  if (stats != nullptr) {
    stats->updates += updates;
    stats->additions += updates;
  }
  return s;
}

namespace {

void check_naive_dims(const LatticeTable& s) {
  if (s.dims() > kNaiveTransformMaxDims) {
    throw CapExceeded("naive transform limited to " + std::to_string(kNaiveTransformMaxDims) +
                      " dimensions, got " + std::to_string(s.dims()));
  }
}

}  // namespace

LatticeTable naive_downward(const LatticeTable& s) {
  check_naive_dims(s);
  const unsigned n = s.dims();
  const Mask full = NodeSet::full(n).mask();
  LatticeTable t(n);
  for (Mask target = 0; target <= full; ++target) {
    // Supersets of target are target | c for c ranging over submasks of the complement.
    const Mask rest = full & ~target;
    LogWeight acc = LogWeight::zero();
    Mask c = rest;
    while (true) {
      acc = acc + s[target | c];
      if (c == 0) break;
      c = (c - 1) & rest;
    }
    t[target] = acc;
  }
  return t;
}

LatticeTable naive_upward(const LatticeTable& s) {
  check_naive_dims(s);
  const unsigned n = s.dims();
  const Mask full = NodeSet::full(n).mask();
  LatticeTable t(n);
  for (Mask target = 0; target <= full; ++target) {
    LogWeight acc = LogWeight::zero();
    Mask c = target;
    while (true) {
      acc = acc + s[c];
      if (c == 0) break;
      c = (c - 1) & target;
    }
    t[target] = acc;
  }
  return t;
}

}  // namespace edgepost
