#include <edgepost/edgepost.hpp>

#include <CLI11.hpp>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace edgepost;

enum Exit : int {
  kOk = 0,
  kDisagreement = 1,
  kParse = 2,
  kCap = 3,
  kIo = 4,
  kMismatch = 5,
};

struct ModelFlags {
  unsigned k = 0;
  std::string prior = "cardinality_uniform";
  std::string score = "k2";
  double ess = 1.0;

  void attach(CLI::App& app) {
    app.add_option("--k", k, "Maximum indegree")->required();
    app.add_option("--prior", prior, "Parent-set prior: cardinality_uniform | flat")->capture_default_str();
    app.add_option("--score", score, "Family score: k2 | bdeu")->capture_default_str();
    app.add_option("--ess", ess, "Equivalent sample size for bdeu")->capture_default_str();
  }

  PriorSpec spec() const {
    PriorSpec s;
    s.k = k;
    s.rho = parse_rho_family(prior);
    s.score.family = parse_score_family(score);
    s.score.ess = ess;
    s.validate();
    return s;
  }
};

struct EngineFlags {
  bool allow_large_n = false;
  unsigned threads = 1;

  void attach(CLI::App& app) {
    app.add_flag("--allow-large-n", allow_large_n, "Raise the node cap to 26");
    app.add_option("--threads", threads, "Worker threads")->check(CLI::Range(1u, 256u))->capture_default_str();
  }

  EngineOptions options() const {
    EngineOptions o;
    o.max_nodes = allow_large_n ? kExtendedMaxNodes : kDefaultMaxNodes;
    o.threads = threads;
    return o;
  }
};

std::vector<StudyGridPoint> parse_grid(const std::vector<std::string>& items) {
  std::vector<StudyGridPoint> grid;
  for (const auto& item : items) {
    StudyGridPoint p;
    unsigned* fields[] = {&p.n, &p.k, &p.r};
    std::size_t pos = 0;
    for (std::size_t f = 0; f < 3; ++f) {
      const std::size_t end = f < 2 ? item.find(':', pos) : item.size();
      if (end == std::string::npos) throw CLI::ValidationError("--grid", "expected n:k:r, got '" + item + "'");
      const char* first = item.data() + pos;
      const char* last = item.data() + end;
      auto [ptr, ec] = std::from_chars(first, last, *fields[f]);
      if (ec != std::errc{} || ptr != last || first == last)
        throw CLI::ValidationError("--grid", "expected n:k:r, got '" + item + "'");
      pos = end + 1;
    }
    grid.push_back(p);
  }
  return grid;
}

int cmd_posteriors(const std::string& data_path, const std::vector<unsigned>& arities, const ModelFlags& model,
                   const EngineFlags& engine, const std::string& out, bool no_timings) {
  const PriorSpec spec = model.spec();
  const Dataset data =
      load_dataset(data_path, arities.empty() ? std::nullopt : std::optional<std::vector<unsigned>>(arities));
  EdgePosteriors post = edge_posteriors(data, spec, engine.options());
  std::fprintf(stderr, "log_marginal %s\n", format_double(post.log_marginal.log()).c_str());
  std::fprintf(stderr, "elapsed_ms %.3f\n", post.elapsed_ms);
  if (no_timings) post.elapsed_ms = 0.0;
  if (out.empty()) {
    write_posteriors_csv(std::cout, post);
  } else {
    save_posteriors(out, post);
  }
  return kOk;
}

int cmd_simulate(unsigned n, unsigned k, unsigned r, std::size_t m, std::uint64_t seed,
                 const std::string& network_out, const std::string& data_out) {
  const GroundTruthNetwork net = generate_network(n, k, r, seed);
  const Dataset data = sample_data(net, m, derive_seed(seed, 1));
  save_network(network_out, net);
  save_dataset(data_out, data);
  std::fprintf(stderr, "edges %zu\n", net.edge_count());
  return kOk;
}

int cmd_roc(const std::string& network_path, const std::string& posteriors_path,
            std::optional<std::uint64_t> noise_seed, const std::string& out) {
  const GroundTruthNetwork net = load_network(network_path);
  const EdgePosteriors post =
      noise_seed ? uniform_noise_posteriors(net.n, *noise_seed) : load_posteriors(posteriors_path);
  const RocCurve curve = roc(net, post);
  if (!out.empty()) save_roc_csv(out, curve);
  std::printf("auc %s\n", format_double(curve.auc).c_str());
  return kOk;
}

int cmd_study(StudyConfig config, const std::string& out) {
  std::ostringstream report;
  const auto rows = run_study(config, [](const StudyRow& row, const RocCurve&) {
    std::fprintf(stderr, "n=%u k=%u r=%u rep=%u m=%zu auc=%.4f\n", row.n, row.k, row.r, row.replicate, row.m,
                 row.auc);
  });
  write_study_report(report, rows);
  if (out.empty()) {
    std::cout << report.str();
  } else {
    write_text_file(out, report.str());
  }
  return kOk;
}

int cmd_verify(VerifyConfig config, const std::string& dump, const std::string& replay) {
  if (config.max_n > kOracleMaxNodes)
    throw CapExceeded("verify supports at most " + std::to_string(kOracleMaxNodes) + " nodes, got " +
                      std::to_string(config.max_n));
  if (config.max_n < 2) throw PreconditionError("verify needs --n >= 2");

  if (!replay.empty()) {
    const VerifyInstance instance = instance_from_json(read_text_file(replay));
    const Discrepancy d = compare_with_oracle(instance, config.perturbation);
    std::printf("worst %s (posterior %s, log_marginal %s)\n", format_double(d.worst()).c_str(),
                format_double(d.posterior).c_str(), format_double(d.log_marginal).c_str());
    return d.worst() <= config.tolerance ? kOk : kDisagreement;
  }

  const VerifyReport report = run_verification(config);
  std::printf("instances %u\n", report.instances);
  std::printf("worst %s (posterior %s, log_marginal %s)\n", format_double(report.worst.worst()).c_str(),
              format_double(report.worst.posterior).c_str(), format_double(report.worst.log_marginal).c_str());
  if (report.passed()) return kOk;

  const std::string text = instance_to_json(*report.first_failure);
  std::fprintf(stderr, "disagreement on instance seed %llu\n",
               static_cast<unsigned long long>(report.first_failure->seed));
  if (dump.empty()) {
    std::fprintf(stderr, "%s\n", text.c_str());
  } else {
    write_text_file(dump, text);
    std::fprintf(stderr, "failing instance written to %s\n", dump.c_str());
  }
  return kDisagreement;
}

int cmd_bench(unsigned from, unsigned to, unsigned k, unsigned repeats, const EngineFlags& engine,
              const std::string& out) {
  if (from > to) throw PreconditionError("bench needs --from <= --to");
  std::ostringstream csv;
  csv << "n,k,wall_ms,ratio,peak_rss_mb\n";
  double previous = 0.0;
  for (unsigned n = from; n <= to; ++n) {
    const BenchRow row = bench(n, n, k, repeats, engine.options()).front();
    const double ratio = previous > 0.0 ? row.wall_ms / previous : 0.0;
    csv << row.n << ',' << row.k << ',' << format_double(row.wall_ms) << ',' << format_double(ratio) << ','
        << format_double(row.peak_rss_mb) << '\n';
    std::fprintf(stderr, "n=%u wall_ms=%.1f ratio=%.3f rss_mb=%.1f\n", row.n, row.wall_ms, ratio, row.peak_rss_mb);
    previous = row.wall_ms;
  }
  if (out.empty()) {
    std::cout << csv.str();
  } else {
    write_text_file(out, csv.str());
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact edge posteriors for Bayesian networks under a bounded indegree"};
  app.require_subcommand(1);

  // posteriors
  auto* post = app.add_subcommand("posteriors", "Compute all directed edge posteriors for a dataset");
  std::string data_path;
  std::vector<unsigned> arities;
  ModelFlags post_model;
  EngineFlags post_engine;
  std::string post_out;
  bool post_no_timings = false;
  post->add_option("--data", data_path, "Dataset CSV")->required();
  post->add_option("--arities", arities, "Per-column arities (default: inferred)")->delimiter(',');
  post_model.attach(*post);
  post_engine.attach(*post);
  post->add_option("--out", post_out, "Output file; .csv writes a matrix, anything else JSON");
  post->add_flag("--no-timings", post_no_timings, "Store elapsed time as 0 in the output");

  // simulate
  auto* sim = app.add_subcommand("simulate", "Draw a random network and sample data from it");
  unsigned sim_n = 5, sim_k = 2, sim_r = 2;
  std::size_t sim_m = 100;
  std::uint64_t sim_seed = 1;
  std::string sim_network, sim_data;
  sim->add_option("--n", sim_n, "Nodes")->required();
  sim->add_option("--k", sim_k, "Maximum indegree")->required();
  sim->add_option("--r", sim_r, "States per node")->capture_default_str();
  sim->add_option("--m", sim_m, "Records")->capture_default_str();
  sim->add_option("--seed", sim_seed, "Seed")->capture_default_str();
  sim->add_option("--network-out", sim_network, "Network JSON")->required();
  sim->add_option("--data-out", sim_data, "Dataset CSV")->required();

  // roc
  auto* rocc = app.add_subcommand("roc", "Score posteriors against a known network");
  std::string roc_network, roc_post, roc_out;
  std::optional<std::uint64_t> roc_noise;
  rocc->add_option("--network", roc_network, "Network JSON")->required();
  auto* roc_post_opt = rocc->add_option("--posteriors", roc_post, "Posterior JSON");
  auto* roc_noise_opt = rocc->add_option("--noise-seed", roc_noise, "Score seeded uniform noise instead");
  roc_post_opt->excludes(roc_noise_opt);
  rocc->add_option("--out", roc_out, "Curve CSV");

  // study
  auto* study = app.add_subcommand("study", "Run the synthetic ROC study over a grid");
  std::vector<std::string> grid_items;
  std::vector<std::size_t> m_list{20, 100, 500, 2000, 10000};
  StudyConfig study_config;
  EngineFlags study_engine;
  std::string study_out, study_curves;
  bool study_no_timings = false;
  study->add_option("--grid", grid_items, "Grid points n:k:r")->required()->delimiter(',');
  study->add_option("--m-list", m_list, "Sample sizes")->delimiter(',')->capture_default_str();
  study->add_option("--replicates", study_config.replicates, "Replicates per grid point")->capture_default_str();
  study->add_option("--seed", study_config.seed, "Master seed")->capture_default_str();
  study->add_option("--out", study_out, "Report CSV");
  study->add_option("--curve-dir", study_curves, "Directory for per-curve CSV files");
  study->add_flag("--no-timings", study_no_timings, "Report elapsed time as 0");
  study_engine.attach(*study);

  // verify
  auto* ver = app.add_subcommand("verify", "Check the engine against order enumeration");
  VerifyConfig verify_config;
  std::string verify_dump, verify_replay;
  ver->add_option("--instances", verify_config.instances, "Random instances")->capture_default_str();
  ver->add_option("--n", verify_config.max_n, "Largest node count")->capture_default_str();
  ver->add_option("--seed", verify_config.seed, "Seed")->capture_default_str();
  ver->add_option("--perturb", verify_config.perturbation, "Log perturbation injected into one engine score");
  ver->add_option("--tolerance", verify_config.tolerance, "Allowed discrepancy")->capture_default_str();
  ver->add_option("--dump", verify_dump, "Write the first failing instance here");
  ver->add_option("--replay", verify_replay, "Re-run a dumped instance");

  // bench
  auto* ben = app.add_subcommand("bench", "Time the engine on empty datasets");
  unsigned bench_from = 10, bench_to = 16, bench_k = 3, bench_repeats = 1;
  EngineFlags bench_engine;
  std::string bench_out;
  ben->add_option("--from", bench_from, "Smallest n")->capture_default_str();
  ben->add_option("--to", bench_to, "Largest n")->capture_default_str();
  ben->add_option("--k", bench_k, "Maximum indegree")->capture_default_str();
  ben->add_option("--repeats", bench_repeats, "Repeats per n; the fastest is kept")->capture_default_str();
  ben->add_option("--out", bench_out, "CSV output");
  bench_engine.attach(*ben);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kParse;
  }

  try {
    if (*post) return cmd_posteriors(data_path, arities, post_model, post_engine, post_out, post_no_timings);
    if (*sim) return cmd_simulate(sim_n, sim_k, sim_r, sim_m, sim_seed, sim_network, sim_data);
    if (*rocc) {
      if (roc_post.empty() && !roc_noise) throw PreconditionError("roc needs --posteriors or --noise-seed");
      return cmd_roc(roc_network, roc_post, roc_noise, roc_out);
    }
    if (*study) {
      study_config.grid = parse_grid(grid_items);
      study_config.sample_sizes = m_list;
      study_config.record_timings = !study_no_timings;
      study_config.engine = study_engine.options();
      if (!study_curves.empty()) study_config.curve_dir = study_curves;
      return cmd_study(study_config, study_out);
    }
    if (*ver) return cmd_verify(verify_config, verify_dump, verify_replay);
    if (*ben) return cmd_bench(bench_from, bench_to, bench_k, bench_repeats, bench_engine, bench_out);
  } catch (const CLI::ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kParse;
  } catch (const ParseError& e) {
    std::fprintf(stderr, "parse error: %s\n", e.what());
    return kParse;
  } catch (const CapExceeded& e) {
    std::fprintf(stderr, "cap exceeded: %s\n", e.what());
    return kCap;
  } catch (const OverflowError& e) {
    std::fprintf(stderr, "cap exceeded: %s\n", e.what());
    return kCap;
  } catch (const IoError& e) {
    std::fprintf(stderr, "i/o error: %s\n", e.what());
    return kIo;
  } catch (const DimensionMismatch& e) {
    std::fprintf(stderr, "dimension mismatch: %s\n", e.what());
    return kMismatch;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kParse;
  }
  return kParse;
}
