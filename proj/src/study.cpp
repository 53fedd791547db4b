#include "edgepost/study.hpp"

#include <sys/resource.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <memory>
#include <numeric>
#include <string>

#include "edgepost/errors.hpp"
#include "edgepost/io.hpp"

namespace edgepost {

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(master) ^ (stream + 0x632be59bd9b4e019ULL));
}

std::size_t GroundTruthNetwork::edge_count() const {
  std::size_t total = 0;
  for (NodeSet p : parents) total += p.size();
  return total;
}

void GroundTruthNetwork::validate() const {
  if (order.size() != n || parents.size() != n || cpts.size() != n) {
    throw PreconditionError("network fields disagree with n = " + std::to_string(n));
  }
  std::vector<unsigned> position(n, n);
  for (unsigned p = 0; p < n; ++p) {
    if (order[p] >= n || position[order[p]] != n) throw PreconditionError("order is not a permutation");
    position[order[p]] = p;
  }
  for (unsigned i = 0; i < n; ++i) {
    if (parents[i].size() > k) throw PreconditionError("node " + std::to_string(i) + " exceeds the indegree bound");
    for (unsigned u : parents[i].members()) {
      if (u >= n || position[u] >= position[i]) {
        throw PreconditionError("parent " + std::to_string(u) + " of node " + std::to_string(i) +
                                " does not precede it");
      }
    }
    std::size_t rows = 1;
    for (unsigned j = 0; j < parents[i].size(); ++j) rows *= r;
    if (cpts[i].size() != rows) throw PreconditionError("CPT of node " + std::to_string(i) + " has wrong row count");
    for (const auto& row : cpts[i]) {
      if (row.size() != r) throw PreconditionError("CPT row of node " + std::to_string(i) + " has wrong width");
      const double sum = std::accumulate(row.begin(), row.end(), 0.0);
      if (std::abs(sum - 1.0) > 1e-12 || std::any_of(row.begin(), row.end(), [](double p) { return p < 0; })) {
        throw PreconditionError("CPT row of node " + std::to_string(i) + " is not a distribution");
      }
    }
  }
}

GroundTruthNetwork generate_network(unsigned n, unsigned k, unsigned r, std::uint64_t seed) {
  if (n < 1 || k > n - 1 || r < 2 || n > 63) {
    throw PreconditionError("generate_network requires 1 <= n <= 63, k <= n-1, r >= 2");
  }
  Rng rng(seed);
  GroundTruthNetwork net;
  net.n = n;
  net.k = k;
  net.r = r;
  net.seed = seed;
  net.order.resize(n);
  std::iota(net.order.begin(), net.order.end(), 0u);
  std::shuffle(net.order.begin(), net.order.end(), rng);

  std::vector<unsigned> position(n);
  for (unsigned p = 0; p < n; ++p) position[net.order[p]] = p;

  std::exponential_distribution<double> unit_exponential(1.0);
  net.parents.resize(n);
  net.cpts.resize(n);
  for (unsigned i = 0; i < n; ++i) {
    const unsigned available = position[i];
    unsigned count = std::uniform_int_distribution<unsigned>(0, k)(rng);
    if (count > available) count = std::uniform_int_distribution<unsigned>(0, std::min(k, available))(rng);

    std::vector<unsigned> predecessors(net.order.begin(), net.order.begin() + available);
    std::sort(predecessors.begin(), predecessors.end());
    std::vector<unsigned> chosen;
    std::sample(predecessors.begin(), predecessors.end(), std::back_inserter(chosen), count, rng);
    NodeSet parents;
    for (unsigned u : chosen) parents = parents.with(u);
    net.parents[i] = parents;

    std::size_t rows = 1;
    for (unsigned j = 0; j < count; ++j) rows *= r;
    auto& cpt = net.cpts[i];
    cpt.assign(rows, std::vector<double>(r));
    for (auto& row : cpt) {
      double total = 0.0;
      for (double& p : row) total += (p = unit_exponential(rng));
      for (double& p : row) p /= total;
    }
  }
  return net;
}

Dataset sample_data(const GroundTruthNetwork& net, std::size_t m, std::uint64_t seed) {
  net.validate();
  Rng rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::vector<std::vector<unsigned>> parent_lists(net.n);
  for (unsigned i = 0; i < net.n; ++i) parent_lists[i] = net.parents[i].members();

  std::vector<std::vector<Dataset::value_type>> columns(net.n, std::vector<Dataset::value_type>(m));
  for (std::size_t t = 0; t < m; ++t) {
    for (unsigned i : net.order) {
      std::size_t config = 0;
      std::size_t stride = 1;
      for (unsigned u : parent_lists[i]) {
        config += stride * columns[u][t];
        stride *= net.r;
      }
      const auto& row = net.cpts[i][config];
      const double draw = uniform(rng);
      double cumulative = 0.0;
      unsigned state = net.r - 1;
      for (unsigned c = 0; c + 1 < net.r; ++c) {
        cumulative += row[c];
        if (draw < cumulative) {
          state = c;
          break;
        }
      }
      columns[i][t] = state;
    }
  }
  std::vector<std::string> names;
  for (unsigned i = 0; i < net.n; ++i) names.push_back("x" + std::to_string(i));
  return Dataset(std::move(names), std::vector<unsigned>(net.n, net.r), std::move(columns));
}

RocCurve roc_from_scores(std::span<const double> scores, std::span<const bool> labels) {
  if (scores.size() != labels.size()) throw DimensionMismatch("scores and labels differ in length");
  constexpr double inf = std::numeric_limits<double>::infinity();
  const auto positives = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), true));
  const std::size_t negatives = labels.size() - positives;

  RocCurve curve;
  curve.points.push_back({0.0, 0.0, inf});
  if (positives == 0 || negatives == 0) {
    curve.points.push_back({1.0, 1.0, -inf});
    curve.auc = 0.5;
    return curve;
  }

  std::vector<std::size_t> rank(scores.size());
  std::iota(rank.begin(), rank.end(), std::size_t{0});
  std::stable_sort(rank.begin(), rank.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  // At threshold s, the claimed pairs are exactly those ranked before the first score equal to s.
  std::size_t tp = 0;
  std::size_t fp = 0;
  for (std::size_t j = 0; j < rank.size();) {
    const double tau = scores[rank[j]];
    curve.points.push_back({static_cast<double>(fp) / negatives, static_cast<double>(tp) / positives, tau});
    for (; j < rank.size() && scores[rank[j]] == tau; ++j) (labels[rank[j]] ? tp : fp) += 1;
  }
  curve.points.push_back({1.0, 1.0, -inf});

  double area = 0.0;
  for (std::size_t p = 1; p < curve.points.size(); ++p) {
    const auto& a = curve.points[p - 1];
    const auto& b = curve.points[p];
    area += (b.fpr - a.fpr) * (a.tpr + b.tpr) / 2.0;
  }
  curve.auc = std::clamp(area, 0.0, 1.0);
  return curve;
}

RocCurve roc(const GroundTruthNetwork& truth, const EdgePosteriors& posteriors) {
  if (truth.n != posteriors.n || posteriors.probabilities.size() != std::size_t{truth.n} * truth.n ||
      truth.parents.size() != truth.n) {
    throw DimensionMismatch("network has " + std::to_string(truth.n) + " nodes, posteriors have " +
                            std::to_string(posteriors.n));
  }
  const std::size_t pairs = std::size_t{truth.n} * (truth.n - 1) / 2;
  std::vector<double> scores;
  scores.reserve(pairs);
  const auto labels = std::make_unique<bool[]>(pairs);
  for (unsigned u = 0; u < truth.n; ++u) {
    for (unsigned v = u + 1; v < truth.n; ++v) {
      labels[scores.size()] = truth.parents[v].contains(u) || truth.parents[u].contains(v);
      scores.push_back(posteriors(u, v) + posteriors(v, u));
    }
  }
  return roc_from_scores(scores, std::span<const bool>(labels.get(), pairs));
}

EdgePosteriors uniform_noise_posteriors(unsigned n, std::uint64_t seed) {
  Rng rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 0.5);
  EdgePosteriors out;
  out.n = n;
  out.probabilities.assign(std::size_t{n} * n, 0.0);
  for (unsigned u = 0; u < n; ++u) {
    out.names.push_back("x" + std::to_string(u));
    for (unsigned v = 0; v < n; ++v) {
      if (u != v) out.probabilities[std::size_t{u} * n + v] = uniform(rng);
    }
  }
  out.log_marginal = LogWeight::one();
  out.seed_info = "uniform_noise:" + std::to_string(seed);
  return out;
}

std::uint64_t replicate_seed(std::uint64_t master, std::size_t grid_index, unsigned replicate) {
  return derive_seed(derive_seed(master, grid_index), replicate);
}

std::vector<StudyRow> run_study(const StudyConfig& config,
                                const std::function<void(const StudyRow&, const RocCurve&)>& on_row) {
  if (config.sample_sizes.empty()) throw PreconditionError("study needs at least one sample size");
  for (const auto& g : config.grid) {
    ProblemDims{g.n, g.k}.validate(config.engine.max_nodes);
    if (g.r < 2) throw PreconditionError("study arity must be at least 2");
  }
  const std::size_t largest = *std::max_element(config.sample_sizes.begin(), config.sample_sizes.end());
  if (config.curve_dir) std::filesystem::create_directories(*config.curve_dir);

  std::vector<StudyRow> rows;
  for (std::size_t g = 0; g < config.grid.size(); ++g) {
    const StudyGridPoint point = config.grid[g];
    PriorSpec prior;
    prior.k = point.k;
    for (unsigned rep = 0; rep < config.replicates; ++rep) {
      const std::uint64_t seed = replicate_seed(config.seed, g, rep);
      const GroundTruthNetwork net = generate_network(point.n, point.k, point.r, seed);
      const Dataset full = sample_data(net, largest, derive_seed(seed, 1));
      for (std::size_t m : config.sample_sizes) {
        const EdgePosteriors post = edge_posteriors(full.prefix(m), prior, config.engine);
        const RocCurve curve = roc(net, post);
        StudyRow row{point.n, point.k, point.r, rep, seed, m, curve.auc, net.edge_count(),
                     config.record_timings ? post.elapsed_ms : 0.0};
        if (config.curve_dir) {
          const auto path = *config.curve_dir / ("roc_n" + std::to_string(point.n) + "_k" + std::to_string(point.k) +
                                                 "_r" + std::to_string(point.r) + "_rep" + std::to_string(rep) +
                                                 "_m" + std::to_string(m) + ".csv");
          save_roc_csv(path, curve);
        }
        if (on_row) on_row(row, curve);
        rows.push_back(row);
      }
    }
  }
  return rows;
}

double peak_rss_mb() {
  rusage usage{};
  getrusage(RUSAGE_SELF, &usage);
  return static_cast<double>(usage.ru_maxrss) / 1024.0;  // ru_maxrss is in kilobytes on Linux
}

std::vector<BenchRow> bench(unsigned n_from, unsigned n_to, unsigned k, unsigned repeats, const EngineOptions& options) {
  if (n_from > n_to || repeats == 0) throw PreconditionError("bench needs n_from <= n_to and repeats >= 1");
  std::vector<BenchRow> rows;
  for (unsigned n = n_from; n <= n_to; ++n) {
    PriorSpec prior;
    prior.k = std::min(k, n - 1);
    const Dataset shell = Dataset::empty(n);
    double best = std::numeric_limits<double>::infinity();
    for (unsigned rep = 0; rep < repeats; ++rep) {
      const auto start = std::chrono::steady_clock::now();
      const EdgePosteriors post = edge_posteriors(shell, prior, options);
      best = std::min(best, std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count());
    }
    rows.push_back({n, prior.k, best, peak_rss_mb()});
  }
  return rows;
}

}  // namespace edgepost
