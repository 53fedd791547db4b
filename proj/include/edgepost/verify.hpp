#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "edgepost/dataset.hpp"
#include "edgepost/model.hpp"

namespace edgepost {

/// One randomized engine-versus-oracle comparison.
struct VerifyInstance {
  std::uint64_t seed = 0;
  Dataset data;
  PriorSpec prior;
};

/// n in [2, max_n], m in [0, 30], k in [0, n-1], r in {2, 3}, random prior and
/// score families; records sampled from a random network. max_n <= 6.
VerifyInstance random_instance(std::uint64_t seed, unsigned max_n);

struct Discrepancy {
  double posterior = 0.0;     ///< max absolute difference over all matrix entries
  double log_marginal = 0.0;  ///< |log p(x) engine - log p(x) oracle|

  double worst() const { return posterior > log_marginal ? posterior : log_marginal; }
};

/// Runs engine and oracle on the same family scores. A nonzero
/// `perturbation` is added to the engine's copy of log beta_0(empty) only.
Discrepancy compare_with_oracle(const VerifyInstance& instance, double perturbation = 0.0);

struct VerifyConfig {
  unsigned instances = 50;
  unsigned max_n = 5;
  std::uint64_t seed = 20050726;
  double perturbation = 0.0;
  double tolerance = 1e-9;
};

struct VerifyReport {
  unsigned instances = 0;
  Discrepancy worst;
  std::optional<VerifyInstance> first_failure;

  bool passed() const { return !first_failure.has_value(); }
};

/// Structure and score families cycle with the instance index so that every
/// combination is covered. Throws CapExceeded for max_n > 6.
VerifyReport run_verification(const VerifyConfig& config);

std::string instance_to_json(const VerifyInstance& instance);
/// Throws ParseError on a malformed document.
VerifyInstance instance_from_json(const std::string& text);

}  // namespace edgepost
