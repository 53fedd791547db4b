#pragma once

#include <span>
#include <vector>

#include "edgepost/dataset.hpp"
#include "edgepost/engine.hpp"
#include "edgepost/model.hpp"

namespace edgepost {

/// Largest node count the order-enumeration oracle accepts.
inline constexpr unsigned kOracleMaxNodes = 6;

/// Edge posteriors by summing over all n! linear orders and, per order, over
/// every consistent parent set of every node. Independent of the lattice
/// transforms and the forward/backward tables. Throws CapExceeded for n > 6.
EdgePosteriors brute_posteriors(const Dataset& data, const PriorSpec& spec);
EdgePosteriors brute_posteriors_from_scores(std::span<const FamilyScoreTable> beta, const PriorSpec& spec);

/// p(x) by the same enumeration, without any edge restriction.
LogWeight brute_marginal(const Dataset& data, const PriorSpec& spec);
LogWeight brute_marginal_from_scores(std::span<const FamilyScoreTable> beta, const PriorSpec& spec);

}  // namespace edgepost
