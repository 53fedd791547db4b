#include "edgepost/engine.hpp"

#include <algorithm>
#include <chrono>
#include <string>

#include "edgepost/errors.hpp"
#include "parallel.hpp"

namespace edgepost {

using Mask = NodeSet::mask_type;

namespace {

void check_options(const EngineOptions& options) {
  if (options.max_nodes > kExtendedMaxNodes) {
    throw PreconditionError("node cap cannot exceed " + std::to_string(kExtendedMaxNodes));
  }
}

void check_scores(std::span<const FamilyScoreTable> beta, unsigned k) {
  const auto n = static_cast<unsigned>(beta.size());
  for (unsigned i = 0; i < n; ++i) {
    if (beta[i].node() != i) throw PreconditionError("family score tables must be ordered by node");
    for (const auto& [g, w] : beta[i].entries()) {
      if (g.contains(i) || g.size() > k || !g.is_subset_of(NodeSet::full(n))) {
        throw PreconditionError("inadmissible parent set in the scores of node " + std::to_string(i));
      }
    }
  }
}

}  // namespace

AlphaTables compute_alpha(std::span<const FamilyScoreTable> beta, const PriorSpec& spec, unsigned threads) {
  const auto n = static_cast<unsigned>(beta.size());
  ProblemDims{n, spec.k}.validate(LatticeTable::kMaxDims);
  check_scores(beta, spec.k);

  std::vector<LatticeTable> tables(n);
  detail::parallel_for(n, threads, [&](unsigned, unsigned i) {
    LatticeTable table(n - 1);
    for (const auto& [g, w] : beta[i].entries()) table[compress(g.mask(), i)] = w;
    table = upward_transform_truncated(std::move(table), spec.k);
    auto entries = table.entries();
    for (std::size_t c = 0; c < entries.size(); ++c) {
      entries[c] *= q(i, NodeSet(expand(c, i)), spec);
    }
    tables[i] = std::move(table);
  });
  return AlphaTables(std::move(tables));
}

LatticeTable forward(const AlphaTables& alpha) {
  const unsigned n = alpha.n();
  LatticeTable left(n);
  left[0] = LogWeight::one();
  // Ascending mask order visits every S after all of its subsets.
  const Mask full = NodeSet::full(n).mask();
  for (Mask s = 1; s <= full; ++s) {
    LogWeight acc = LogWeight::zero();
    for (Mask rest = s; rest != 0; rest &= rest - 1) {
      const auto i = static_cast<unsigned>(std::countr_zero(rest));
      const Mask without = s & ~(Mask{1} << i);
      acc += alpha.table(i)[compress(without, i)] * left[without];
    }
    left[s] = acc;
  }
  return left;
}

LatticeTable backward(const AlphaTables& alpha) {
  const unsigned n = alpha.n();
  LatticeTable right(n);
  right[0] = LogWeight::one();
  const Mask full = NodeSet::full(n).mask();
  for (Mask t = 1; t <= full; ++t) {
    const Mask before = full & ~t;
    LogWeight acc = LogWeight::zero();
    for (Mask rest = t; rest != 0; rest &= rest - 1) {
      const auto i = static_cast<unsigned>(std::countr_zero(rest));
      acc += alpha.table(i)[compress(before, i)] * right[t & ~(Mask{1} << i)];
    }
    right[t] = acc;
  }
  return right;
}

void compute_gamma_into(unsigned v, const PriorSpec& spec, const ForwardBackward& fb, unsigned k,
                        LatticeTable& buffer) {
  const unsigned n = fb.left.dims();
  if (fb.right.dims() != n || v >= n) throw PreconditionError("gamma requested for a node outside the tables");
  if (buffer.dims() != n - 1 || buffer.size() != (std::size_t{1} << (n - 1))) buffer = LatticeTable(n - 1);

  const Mask others = NodeSet::full(n).without(v).mask();
  auto h = buffer.entries();
  for (std::size_t c = 0; c < h.size(); ++c) {
    const Mask s = expand(c, v);
    h[c] = q(v, NodeSet(s), spec) * fb.left[s] * fb.right[others & ~s];
  }
  buffer = downward_transform_truncated(std::move(buffer), std::min(k, n - 1));
}

LatticeTable compute_gamma(unsigned v, const PriorSpec& spec, const ForwardBackward& fb, unsigned k) {
  LatticeTable buffer;
  compute_gamma_into(v, spec, fb, k, buffer);
  return buffer;
}

EdgePosteriors edge_posteriors_from_scores(std::span<const FamilyScoreTable> beta, const PriorSpec& spec,
                                           const EngineOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  check_options(options);
  spec.validate();
  const auto n = static_cast<unsigned>(beta.size());
  ProblemDims{n, spec.k}.validate(options.max_nodes);

  // Every term of every sum holds exactly one family score and one q factor
  // per node, so per-node constants cancel in the posteriors. Removing them
  // keeps the logs small, which keeps rounding small; they are added back to
  // the marginal only.
  std::vector<FamilyScoreTable> centered(beta.begin(), beta.end());
  LogWeight offset = LogWeight::from_log(static_cast<double>(n) * spec.q_log_scale);
  for (auto& table : centered) {
    LogWeight peak;
    for (const auto& entry : table.entries()) peak = std::max(peak, entry.second);
    if (peak.is_zero()) continue;
    for (auto& entry : table.entries()) entry.second = entry.second / peak;
    offset *= peak;
  }
  PriorSpec working = spec;
  working.q_log_scale = 0.0;  // uniform q: one constant per node

  const AlphaTables alpha = compute_alpha(centered, working, options.threads);
  const ForwardBackward fb{forward(alpha), backward(alpha)};
  const LogWeight marginal = fb.left[NodeSet::full(n)];

  EdgePosteriors out;
  out.n = n;
  out.prior = spec;
  out.log_marginal = marginal * offset;
  out.probabilities.assign(std::size_t{n} * n, 0.0);
  for (unsigned i = 0; i < n; ++i) out.names.push_back("x" + std::to_string(i));

  const unsigned workers = std::clamp(options.threads, 1u, n);
  std::vector<LatticeTable> buffers(workers);
  detail::parallel_for(n, workers, [&](unsigned worker, unsigned v) {
    LatticeTable& gamma = buffers[worker];
    compute_gamma_into(v, working, fb, spec.k, gamma);
    std::vector<LogWeight> joint(n, LogWeight::zero());
    for (const auto& [g, b] : centered[v].entries()) {
      const LogWeight w = b * gamma[compress(g.mask(), v)];
      for (Mask rest = g.mask(); rest != 0; rest &= rest - 1) {
        joint[static_cast<unsigned>(std::countr_zero(rest))] += w;
      }
    }
    for (unsigned u = 0; u < n; ++u) {
      if (u == v || joint[u].is_zero()) continue;
      out.probabilities[std::size_t{u} * n + v] = std::min(1.0, (joint[u] / marginal).value());
    }
  });

  out.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return out;
}

EdgePosteriors edge_posteriors(const Dataset& data, const PriorSpec& spec, const EngineOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  check_options(options);
  ProblemDims{data.n(), spec.k}.validate(options.max_nodes);
  const auto beta = compute_beta(data, spec, options.threads);
  EdgePosteriors out = edge_posteriors_from_scores(beta, spec, options);
  out.names = data.names();
  out.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace edgepost
