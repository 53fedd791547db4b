#include "edgepost/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "edgepost/engine.hpp"
#include "edgepost/errors.hpp"
#include "edgepost/oracle.hpp"
#include "edgepost/study.hpp"
#include "json.hpp"

namespace edgepost {

namespace {

void check_max_n(unsigned max_n) {
  if (max_n > kOracleMaxNodes) {
    throw CapExceeded("verification is limited to n <= " + std::to_string(kOracleMaxNodes) + ", got " +
                      std::to_string(max_n));
  }
  if (max_n < 2) throw PreconditionError("verification needs max_n >= 2");
}

}  // namespace

VerifyInstance random_instance(std::uint64_t seed, unsigned max_n) {
  check_max_n(max_n);
  Rng rng(seed);
  const unsigned n = std::uniform_int_distribution<unsigned>(2, max_n)(rng);
  const auto m = std::uniform_int_distribution<std::size_t>(0, 30)(rng);
  const unsigned k = std::uniform_int_distribution<unsigned>(0, n - 1)(rng);
  const unsigned r = std::uniform_int_distribution<unsigned>(2, 3)(rng);

  VerifyInstance instance;
  instance.seed = seed;
  instance.prior.k = k;
  instance.prior.rho = std::bernoulli_distribution(0.5)(rng) ? RhoFamily::flat : RhoFamily::cardinality_uniform;
  if (std::bernoulli_distribution(0.5)(rng)) {
    instance.prior.score.family = ScoreFamily::bdeu;
    instance.prior.score.ess = std::uniform_real_distribution<double>(0.5, 10.0)(rng);
  }
  const auto net = generate_network(n, k, r, derive_seed(seed, 1));
  instance.data = sample_data(net, m, derive_seed(seed, 2));
  return instance;
}

Discrepancy compare_with_oracle(const VerifyInstance& instance, double perturbation) {
  const auto beta = compute_beta(instance.data, instance.prior);
  const EdgePosteriors expected = brute_posteriors_from_scores(beta, instance.prior);

  auto engine_beta = beta;
  if (perturbation != 0.0) {
    auto& entry = engine_beta.front().entries().front().second;
    entry = entry * LogWeight::from_log(perturbation);
  }
  const EdgePosteriors actual = edge_posteriors_from_scores(engine_beta, instance.prior);

  Discrepancy d;
  for (std::size_t e = 0; e < expected.probabilities.size(); ++e) {
    d.posterior = std::max(d.posterior, std::abs(expected.probabilities[e] - actual.probabilities[e]));
  }
  d.log_marginal = std::abs(expected.log_marginal.log() - actual.log_marginal.log());
  return d;
}

VerifyReport run_verification(const VerifyConfig& config) {
  check_max_n(config.max_n);
  VerifyReport report;
  for (unsigned idx = 0; idx < config.instances; ++idx) {
    VerifyInstance instance = random_instance(derive_seed(config.seed, idx), config.max_n);
    instance.prior.rho = idx % 2 == 0 ? RhoFamily::cardinality_uniform : RhoFamily::flat;
    if ((idx / 2) % 2 == 0) {
      instance.prior.score.family = ScoreFamily::dirichlet_all_ones;
    } else {
      instance.prior.score.family = ScoreFamily::bdeu;
    }
    const Discrepancy d = compare_with_oracle(instance, config.perturbation);
    report.worst.posterior = std::max(report.worst.posterior, d.posterior);
    report.worst.log_marginal = std::max(report.worst.log_marginal, d.log_marginal);
    ++report.instances;
    if (!(d.worst() <= config.tolerance) && !report.first_failure) report.first_failure = std::move(instance);
  }
  return report;
}

std::string instance_to_json(const VerifyInstance& instance) {
  nlohmann::json doc;
  doc["seed"] = instance.seed;
  doc["k"] = instance.prior.k;
  doc["prior"] = to_string(instance.prior.rho);
  doc["score"] = to_string(instance.prior.score.family);
  doc["ess"] = instance.prior.score.ess;
  doc["names"] = instance.data.names();
  doc["arities"] = instance.data.arities();
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t t = 0; t < instance.data.m(); ++t) {
    std::vector<Dataset::value_type> row;
    for (unsigned i = 0; i < instance.data.n(); ++i) row.push_back(instance.data.at(t, i));
    rows.push_back(row);
  }
  doc["records"] = rows;
  return doc.dump() + "\n";
}

VerifyInstance instance_from_json(const std::string& text) {
  try {
    const auto doc = nlohmann::json::parse(text);
    VerifyInstance instance;
    instance.seed = doc.at("seed").get<std::uint64_t>();
    instance.prior.k = doc.at("k").get<unsigned>();
    instance.prior.rho = parse_rho_family(doc.at("prior").get<std::string>());
    instance.prior.score.family = parse_score_family(doc.at("score").get<std::string>());
    instance.prior.score.ess = doc.value("ess", 1.0);
    instance.data = Dataset::from_rows(doc.at("names").get<std::vector<std::string>>(),
                                       doc.at("arities").get<std::vector<unsigned>>(),
                                       doc.at("records").get<std::vector<std::vector<Dataset::value_type>>>());
    return instance;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(ParseError::Kind::bad_document, 1, std::string("instance document: ") + e.what());
  } catch (const PreconditionError& e) {
    throw ParseError(ParseError::Kind::bad_document, 1, e.what());
  }
}

}  // namespace edgepost
