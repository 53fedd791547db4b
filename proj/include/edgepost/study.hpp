#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "edgepost/dataset.hpp"
#include "edgepost/engine.hpp"
#include "edgepost/lattice.hpp"

namespace edgepost {

/// Random engine used everywhere a seed is accepted.
using Rng = std::mt19937_64;

/// Child seed for stream `stream` of `master` (SplitMix64 finalizer over both).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

/// A random network with its conditional probability tables.
///
/// cpts[i] has one row per parent configuration; the configuration index is
/// mixed radix over parents[i] in ascending node order, lowest node least
/// significant, matching the family scores.
struct GroundTruthNetwork {
  unsigned n = 0;
  unsigned k = 0;
  unsigned r = 2;
  std::vector<unsigned> order;
  std::vector<NodeSet> parents;
  std::vector<std::vector<std::vector<double>>> cpts;
  std::uint64_t seed = 0;

  /// Number of directed edges.
  std::size_t edge_count() const;
  /// Throws PreconditionError unless acyclic under `order`, within the
  /// indegree bound, and every CPT row is a distribution.
  void validate() const;
};

/// Uniform order; per node (in index order) a parent count uniform on
/// {0..k}, redrawn on {0..min(k, #predecessors)} if there are too few
/// predecessors; parents uniform among predecessors; Dirichlet(1,...,1) rows.
GroundTruthNetwork generate_network(unsigned n, unsigned k, unsigned r, std::uint64_t seed);

/// m records by ancestral sampling along net.order.
Dataset sample_data(const GroundTruthNetwork& net, std::size_t m, std::uint64_t seed);

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
  double threshold = 0.0;
};

struct RocCurve {
  std::vector<RocPoint> points;
  double auc = 0.5;
};

/// ROC of scores against binary labels: a pair is claimed when its score
/// exceeds the threshold, swept over +inf, every distinct score in descending
/// order, then -inf. AUC by the trapezoidal rule. With no positive or no
/// negative labels the curve is the diagonal and the AUC is 0.5.
RocCurve roc_from_scores(std::span<const double> scores, std::span<const bool> labels);

/// Undirected edge recovery: each pair {u, v} scores p(u->v) + p(v->u) and is
/// positive iff either orientation is in the network. Throws DimensionMismatch.
RocCurve roc(const GroundTruthNetwork& truth, const EdgePosteriors& posteriors);

/// Off-diagonal entries drawn uniformly from [0, 0.5); a null predictor.
EdgePosteriors uniform_noise_posteriors(unsigned n, std::uint64_t seed);

struct StudyGridPoint {
  unsigned n = 5;
  unsigned k = 2;
  unsigned r = 2;
};

struct StudyConfig {
  std::vector<StudyGridPoint> grid;
  /// Nested prefix sizes; one dataset of the largest size is drawn per replicate.
  std::vector<std::size_t> sample_sizes{20, 100, 500, 2000, 10000};
  unsigned replicates = 10;
  std::uint64_t seed = 1;
  /// When false, elapsed_ms is reported as 0 so reports are reproducible byte for byte.
  bool record_timings = true;
  /// Per-curve point files are written here when set.
  std::optional<std::filesystem::path> curve_dir;
  EngineOptions engine;
};

struct StudyRow {
  unsigned n = 0;
  unsigned k = 0;
  unsigned r = 0;
  unsigned replicate = 0;
  std::uint64_t seed = 0;
  std::size_t m = 0;
  double auc = 0.0;
  std::size_t true_edges = 0;
  double elapsed_ms = 0.0;
};

/// Seed of the network for one (grid point, replicate); its dataset uses
/// derive_seed(network seed, 1).
std::uint64_t replicate_seed(std::uint64_t master, std::size_t grid_index, unsigned replicate);

/// One row per (grid point, replicate, m), in that nesting order. The
/// analysis prior has the grid point's k and the model defaults.
std::vector<StudyRow> run_study(const StudyConfig& config,
                                const std::function<void(const StudyRow&, const RocCurve&)>& on_row = {});

struct BenchRow {
  unsigned n = 0;
  unsigned k = 0;
  double wall_ms = 0.0;
  double peak_rss_mb = 0.0;
};

/// Engine wall time on m = 0 binary datasets for n in [n_from, n_to]; the
/// fastest of `repeats` runs is reported.
std::vector<BenchRow> bench(unsigned n_from, unsigned n_to, unsigned k, unsigned repeats = 1,
                            const EngineOptions& options = {});

/// Process peak resident set size in megabytes.
double peak_rss_mb();

}  // namespace edgepost
