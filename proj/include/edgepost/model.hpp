#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "edgepost/dataset.hpp"
#include "edgepost/lattice.hpp"
#include "edgepost/logweight.hpp"

namespace edgepost {

enum class RhoFamily { cardinality_uniform, flat };
enum class QFamily { uniform };
enum class ScoreFamily { dirichlet_all_ones, bdeu };

/// Parameter prior of the local Dirichlet-multinomial score.
struct ScoreSpec {
  ScoreFamily family = ScoreFamily::dirichlet_all_ones;
  /// Equivalent sample size; read only for bdeu.
  double ess = 1.0;
};

/// Order-modular prior p(order, G) = prod_i q_i(U_i) rho_i(G_i), up to constants.
struct PriorSpec {
  unsigned k = 0;
  RhoFamily rho = RhoFamily::cardinality_uniform;
  QFamily q = QFamily::uniform;
  ScoreSpec score;
  /// Constant log factors folded into every rho and q value. They cancel in
  /// every posterior.
  double rho_log_scale = 0.0;
  double q_log_scale = 0.0;

  /// Throws PreconditionError on a nonpositive bdeu ess or nonfinite scales.
  void validate() const;
};

std::string to_string(RhoFamily family);
std::string to_string(QFamily family);
std::string to_string(ScoreFamily family);
RhoFamily parse_rho_family(const std::string& name);
ScoreFamily parse_score_family(const std::string& name);

/// Largest contingency table (parent configurations times child states) a
/// single family score may allocate.
inline constexpr std::size_t kMaxCountingCells = std::size_t{1} << 26;

/// log p(x_i | x_G) with the parameters integrated out under a Dirichlet prior.
///
/// Parent configurations are mixed-radix indices over G in ascending node
/// order, lowest node least significant. Throws PreconditionError if i is in G
/// and CapExceeded when the counting table would exceed kMaxCountingCells.
LogWeight local_marginal_likelihood(const Dataset& data, unsigned i, NodeSet parents, const ScoreSpec& score);

/// Structure prior factor rho_i(G); zero above the indegree bound.
LogWeight rho(unsigned i, NodeSet parents, const PriorSpec& spec, unsigned n);
/// Order prior factor q_i(U).
LogWeight q(unsigned i, NodeSet predecessors, const PriorSpec& spec);

/// beta_i(G) for every G subset of V - {i} with |G| <= k, in canonical
/// (cardinality, mask) order.
class FamilyScoreTable {
 public:
  FamilyScoreTable() = default;
  FamilyScoreTable(unsigned node, std::vector<std::pair<NodeSet, LogWeight>> entries);

  unsigned node() const noexcept { return node_; }
  std::size_t size() const noexcept { return entries_.size(); }
  const std::vector<std::pair<NodeSet, LogWeight>>& entries() const noexcept { return entries_; }
  std::vector<std::pair<NodeSet, LogWeight>>& entries() noexcept { return entries_; }

  /// Score of an admissible parent set; nullopt if `parents` is not a key.
  std::optional<LogWeight> find(NodeSet parents) const;

 private:
  unsigned node_ = 0;
  std::vector<std::pair<NodeSet, LogWeight>> entries_;
};

/// beta_i(G) = rho_i(G) * p(x_i | x_G) for all nodes and admissible parent sets.
std::vector<FamilyScoreTable> compute_beta(const Dataset& data, const PriorSpec& spec, unsigned threads = 1);

}  // namespace edgepost
