#include "edgepost/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "edgepost/errors.hpp"
#include "parallel.hpp"

namespace edgepost {

void PriorSpec::validate() const {
  if (score.family == ScoreFamily::bdeu && !(score.ess > 0.0 && std::isfinite(score.ess))) {
    throw PreconditionError("bdeu equivalent sample size must be positive and finite");
  }
  if (!std::isfinite(rho_log_scale) || !std::isfinite(q_log_scale)) {
    throw PreconditionError("prior log scales must be finite");
  }
}

std::string to_string(RhoFamily family) {
  return family == RhoFamily::flat ? "flat" : "cardinality_uniform";
}

std::string to_string(QFamily) { return "uniform"; }

std::string to_string(ScoreFamily family) {
  return family == ScoreFamily::bdeu ? "bdeu" : "dirichlet_all_ones";
}

RhoFamily parse_rho_family(const std::string& name) {
  if (name == "cardinality_uniform") return RhoFamily::cardinality_uniform;
  if (name == "flat") return RhoFamily::flat;
  throw PreconditionError("unknown structure prior '" + name + "'");
}

ScoreFamily parse_score_family(const std::string& name) {
  if (name == "dirichlet_all_ones" || name == "k2") return ScoreFamily::dirichlet_all_ones;
  if (name == "bdeu") return ScoreFamily::bdeu;
  throw PreconditionError("unknown score family '" + name + "'");
}

LogWeight local_marginal_likelihood(const Dataset& data, unsigned i, NodeSet parents, const ScoreSpec& score) {
  if (parents.contains(i)) throw PreconditionError("node " + std::to_string(i) + " listed among its own parents");
  const unsigned child_arity = data.arity(i);
  const auto members = parents.members();

  std::size_t configs = 1;
  std::vector<std::size_t> stride;
  stride.reserve(members.size());
  for (unsigned u : members) {
    stride.push_back(configs);
    configs *= data.arity(u);
    if (configs > kMaxCountingCells / child_arity) {
      throw CapExceeded("family of node " + std::to_string(i) + " needs more than " +
                        std::to_string(kMaxCountingCells) + " counting cells");
    }
  }

  const std::size_t m = data.m();
  if (m == 0) return LogWeight::one();

  std::vector<std::size_t> config_of(m, 0);
  for (std::size_t p = 0; p < members.size(); ++p) {
    const auto column = data.column(members[p]);
    for (std::size_t t = 0; t < m; ++t) config_of[t] += stride[p] * column[t];
  }
  std::vector<std::uint32_t> counts(configs * child_arity, 0);
  const auto child = data.column(i);
  for (std::size_t t = 0; t < m; ++t) ++counts[config_of[t] * child_arity + child[t]];

  const double cell_prior = score.family == ScoreFamily::bdeu
                                ? score.ess / (static_cast<double>(configs) * child_arity)
                                : 1.0;
  const double row_prior = cell_prior * child_arity;
  const double lg_cell = std::lgamma(cell_prior);
  const double lg_row = std::lgamma(row_prior);

  // Terms are summed in sorted order so the score does not depend on how
  // parent configurations are numbered.
  std::vector<double> terms;
  for (std::size_t j = 0; j < configs; ++j) {
    std::uint64_t row_total = 0;
    double row = 0.0;
    for (unsigned c = 0; c < child_arity; ++c) {
      const std::uint32_t count = counts[j * child_arity + c];
      if (count == 0) continue;
      row_total += count;
      row += std::lgamma(cell_prior + count) - lg_cell;
    }
    if (row_total == 0) continue;
    terms.push_back(lg_row - std::lgamma(row_prior + static_cast<double>(row_total)) + row);
  }
  std::sort(terms.begin(), terms.end());
  double log_score = 0.0;
  for (double t : terms) log_score += t;
  return LogWeight::from_log(log_score);
}

LogWeight rho(unsigned i, NodeSet parents, const PriorSpec& spec, unsigned n) {
  if (parents.contains(i)) throw PreconditionError("node " + std::to_string(i) + " listed among its own parents");
  const unsigned size = parents.size();
  if (size > spec.k) return LogWeight::zero();
  const LogWeight scale = LogWeight::from_log(spec.rho_log_scale);
  if (spec.rho == RhoFamily::flat) return scale;
  return scale / LogWeight::from_value(static_cast<double>(binomial(n - 1, size)));
}

LogWeight q(unsigned i, NodeSet predecessors, const PriorSpec& spec) {
  if (predecessors.contains(i)) throw PreconditionError("node " + std::to_string(i) + " listed among its predecessors");
  return LogWeight::from_log(spec.q_log_scale);
}

FamilyScoreTable::FamilyScoreTable(unsigned node, std::vector<std::pair<NodeSet, LogWeight>> entries)
    : node_(node), entries_(std::move(entries)) {}

std::optional<LogWeight> FamilyScoreTable::find(NodeSet parents) const {
  const auto it = std::find_if(entries_.begin(), entries_.end(), [&](const auto& e) { return e.first == parents; });
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

std::vector<FamilyScoreTable> compute_beta(const Dataset& data, const PriorSpec& spec, unsigned threads) {
  spec.validate();
  const unsigned n = data.n();
  ProblemDims{n, spec.k}.validate(64);

  std::vector<FamilyScoreTable> tables(n);
  auto score_node = [&](unsigned i) {
    const auto candidates = enumerate_subsets(NodeSet::full(n).without(i), spec.k);
    std::vector<std::pair<NodeSet, LogWeight>> entries;
    entries.reserve(candidates.size());
    for (NodeSet g : candidates) {
      entries.emplace_back(g, rho(i, g, spec, n) * local_marginal_likelihood(data, i, g, spec.score));
    }
    tables[i] = FamilyScoreTable(i, std::move(entries));
  };

  detail::parallel_for(n, threads, [&](unsigned, unsigned i) { score_node(i); });
  return tables;
}

}  // namespace edgepost
