#pragma once

#include <span>
#include <string>
#include <vector>

#include "edgepost/dataset.hpp"
#include "edgepost/lattice.hpp"
#include "edgepost/logweight.hpp"
#include "edgepost/mobius.hpp"
#include "edgepost/model.hpp"

namespace edgepost {

struct EngineOptions {
  /// Node cap; may be raised up to kExtendedMaxNodes.
  unsigned max_nodes = kDefaultMaxNodes;
  /// Worker threads for the per-node steps. Results do not depend on it.
  unsigned threads = 1;
};

/// alpha_i(U) = q_i(U) * sum_{G subset of U} beta_i(G), one 2^(n-1) table per
/// node indexed by compress(U, i).
class AlphaTables {
 public:
  AlphaTables() = default;
  explicit AlphaTables(std::vector<LatticeTable> tables) : tables_(std::move(tables)) {}

  unsigned n() const noexcept { return static_cast<unsigned>(tables_.size()); }
  const LatticeTable& table(unsigned i) const { return tables_.at(i); }
  LogWeight at(unsigned i, NodeSet predecessors) const {
    return tables_.at(i)[compress(predecessors.mask(), i)];
  }

 private:
  std::vector<LatticeTable> tables_;
};

/// Forward table L over all S subset of V and backward table R over all T.
/// L(V) = R(V) = p(x) up to the prior constants.
struct ForwardBackward {
  LatticeTable left;
  LatticeTable right;
};

AlphaTables compute_alpha(std::span<const FamilyScoreTable> beta, const PriorSpec& spec, unsigned threads = 1);

/// L(S) = sum_{i in S} alpha_i(S - {i}) L(S - {i}), L(empty) = 1.
LatticeTable forward(const AlphaTables& alpha);

/// R(T) = sum_{i in T} alpha_i(V - T - {i}) R(T - {i}), R(empty) = 1.
LatticeTable backward(const AlphaTables& alpha);

/// gamma_v(G) = sum over G subset S subset V-{v} of q_v(S) L(S) R(V - {v} - S),
/// indexed by compress(G, v). Only entries with |G| <= k are meaningful.
LatticeTable compute_gamma(unsigned v, const PriorSpec& spec, const ForwardBackward& fb, unsigned k);

/// Same as compute_gamma, reusing `buffer` (resized to 2^(n-1) if needed).
void compute_gamma_into(unsigned v, const PriorSpec& spec, const ForwardBackward& fb, unsigned k,
                        LatticeTable& buffer);

/// Posterior probability of every directed edge.
struct EdgePosteriors {
  unsigned n = 0;
  std::vector<std::string> names;
  /// Row-major; entry (u, v) is p(u -> v | x).
  std::vector<double> probabilities;
  /// log L(V).
  LogWeight log_marginal;
  PriorSpec prior;
  double elapsed_ms = 0.0;
  std::string seed_info;

  double operator()(unsigned u, unsigned v) const { return probabilities.at(std::size_t{u} * n + v); }
};

/// All n(n-1) edge posteriors in O(n 2^n) time. Throws CapExceeded past
/// options.max_nodes.
EdgePosteriors edge_posteriors(const Dataset& data, const PriorSpec& spec, const EngineOptions& options = {});

/// As edge_posteriors, starting from precomputed family scores.
EdgePosteriors edge_posteriors_from_scores(std::span<const FamilyScoreTable> beta, const PriorSpec& spec,
                                           const EngineOptions& options = {});

}  // namespace edgepost
