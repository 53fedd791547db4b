#include "edgepost/oracle.hpp"

#include <numeric>
#include <string>

#include "edgepost/errors.hpp"

namespace edgepost {

namespace {

struct OracleSums {
  LogWeight marginal;
  std::vector<LogWeight> joint;  // n x n, row-major (u, v)
};

OracleSums enumerate_orders(std::span<const FamilyScoreTable> beta, const PriorSpec& spec) {
  const auto n = static_cast<unsigned>(beta.size());
  if (n == 0) throw PreconditionError("oracle needs at least one node");
  if (n > kOracleMaxNodes) {
    throw CapExceeded("oracle is limited to " + std::to_string(kOracleMaxNodes) + " nodes, got " +
                      std::to_string(n));
  }

  OracleSums sums{LogWeight::zero(), std::vector<LogWeight>(std::size_t{n} * n, LogWeight::zero())};
  std::vector<unsigned> order(n);
  std::iota(order.begin(), order.end(), 0u);
  std::vector<LogWeight> local(n);
  std::vector<LogWeight> local_with(std::size_t{n} * n);  // (u, v): node v restricted to u in G_v

  do {
    NodeSet before;
    for (unsigned pos = 0; pos < n; ++pos) {
      const unsigned v = order[pos];
      LogWeight total = LogWeight::zero();
      std::vector<LogWeight> with(n, LogWeight::zero());
      for (const auto& [g, b] : beta[v].entries()) {
        if (!g.is_subset_of(before)) continue;
        total += b;
        for (unsigned u : g.members()) with[u] += b;
      }
      const LogWeight order_factor = q(v, before, spec);
      local[v] = order_factor * total;
      for (unsigned u = 0; u < n; ++u) local_with[std::size_t{u} * n + v] = order_factor * with[u];
      before = before.with(v);
    }

    LogWeight product = LogWeight::one();
    for (unsigned i = 0; i < n; ++i) product *= local[i];
    sums.marginal += product;

    for (unsigned v = 0; v < n; ++v) {
      LogWeight others = LogWeight::one();
      for (unsigned i = 0; i < n; ++i) {
        if (i != v) others *= local[i];
      }
      for (unsigned u = 0; u < n; ++u) {
        if (u == v) continue;
        sums.joint[std::size_t{u} * n + v] += others * local_with[std::size_t{u} * n + v];
      }
    }
  } while (std::next_permutation(order.begin(), order.end()));
  return sums;
}

void check_oracle_size(unsigned n) {
  if (n > kOracleMaxNodes) {
    throw CapExceeded("oracle is limited to " + std::to_string(kOracleMaxNodes) + " nodes, got " +
                      std::to_string(n));
  }
}

// Family scores by scanning every mask, without the shared subset enumerator.
std::vector<FamilyScoreTable> oracle_scores(const Dataset& data, const PriorSpec& spec) {
  spec.validate();
  const unsigned n = data.n();
  check_oracle_size(n);
  ProblemDims{n, spec.k}.validate(kOracleMaxNodes);
  std::vector<FamilyScoreTable> tables;
  for (unsigned v = 0; v < n; ++v) {
    std::vector<std::pair<NodeSet, LogWeight>> entries;
    for (NodeSet::mask_type mask = 0; mask < (NodeSet::mask_type{1} << n); ++mask) {
      const NodeSet g(mask);
      if (g.contains(v) || g.size() > spec.k) continue;
      entries.emplace_back(g, rho(v, g, spec, n) * local_marginal_likelihood(data, v, g, spec.score));
    }
    tables.emplace_back(v, std::move(entries));
  }
  return tables;
}

}  // namespace

EdgePosteriors brute_posteriors_from_scores(std::span<const FamilyScoreTable> beta, const PriorSpec& spec) {
  const auto n = static_cast<unsigned>(beta.size());
  const OracleSums sums = enumerate_orders(beta, spec);
  EdgePosteriors out;
  out.n = n;
  out.prior = spec;
  out.log_marginal = sums.marginal;
  out.probabilities.assign(std::size_t{n} * n, 0.0);
  for (unsigned i = 0; i < n; ++i) out.names.push_back("x" + std::to_string(i));
  for (std::size_t e = 0; e < sums.joint.size(); ++e) {
    out.probabilities[e] = (sums.joint[e] / sums.marginal).value();
  }
  return out;
}

EdgePosteriors brute_posteriors(const Dataset& data, const PriorSpec& spec) {
  const auto beta = oracle_scores(data, spec);
  EdgePosteriors out = brute_posteriors_from_scores(beta, spec);
  out.names = data.names();
  return out;
}

LogWeight brute_marginal_from_scores(std::span<const FamilyScoreTable> beta, const PriorSpec& spec) {
  return enumerate_orders(beta, spec).marginal;
}

LogWeight brute_marginal(const Dataset& data, const PriorSpec& spec) {
  return brute_marginal_from_scores(oracle_scores(data, spec), spec);
}

}  // namespace edgepost
