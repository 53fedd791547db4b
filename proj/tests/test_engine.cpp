#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "edgepost/engine.hpp"
#include "edgepost/errors.hpp"
#include "edgepost/mobius.hpp"
#include "edgepost/oracle.hpp"
#include "edgepost/study.hpp"

using namespace edgepost;

namespace {

PriorSpec flat_prior(unsigned k) {
  PriorSpec spec;
  spec.k = k;
  spec.rho = RhoFamily::flat;
  return spec;
}

Dataset fixture_a() {
  return Dataset::from_rows({"a", "b", "c"}, {2, 2, 2},
                            {{0, 0, 1}, {1, 1, 1}, {1, 1, 0}, {0, 0, 0}, {1, 0, 1}, {0, 1, 1}, {1, 1, 1}});
}

Dataset sampled(unsigned n, unsigned k, unsigned r, std::size_t m, std::uint64_t seed) {
  return sample_data(generate_network(n, k, r, seed), m, seed + 1);
}

AlphaTables unit_alpha(unsigned n) {
  return AlphaTables(std::vector<LatticeTable>(n, LatticeTable(n - 1, LogWeight::one())));
}

double log_factorial(unsigned n) { return std::lgamma(n + 1.0); }

}  // namespace

TEST_SUITE_BEGIN("engine");

TEST_CASE("compute_alpha") {
  SUBCASE("empty data, flat prior: alpha counts subsets") {
    const auto spec = flat_prior(2);
    const auto alpha = compute_alpha(compute_beta(Dataset::empty(3), spec), spec);
    for (unsigned i = 0; i < 3; ++i) {
      for (std::size_t c = 0; c < 4; ++c) {
        CHECK(alpha.table(i)[c].log() == doctest::Approx(std::log(std::pow(2.0, std::popcount(c)))));
      }
    }
  }

  SUBCASE("k = 0 keeps only the empty parent set") {
    PriorSpec spec;
    const Dataset d = sampled(5, 2, 2, 25, 1);
    const auto beta = compute_beta(d, spec);
    const auto alpha = compute_alpha(beta, spec);
    for (unsigned i = 0; i < 5; ++i)
      for (auto w : alpha.table(i).entries()) CHECK(w == beta[i].entries().front().second);
  }

  SUBCASE("matches direct subset summation") {
    for (unsigned n = 2; n <= 9; ++n) {
      PriorSpec spec;
      spec.k = std::min(3u, n - 1);
      spec.score = ScoreSpec{ScoreFamily::bdeu, 2.0};
      const auto beta = compute_beta(sampled(n, spec.k, 3, 15, n), spec);
      const auto alpha = compute_alpha(beta, spec);
      for (unsigned i = 0; i < n; ++i) {
        LatticeTable dense(n - 1);
        for (const auto& [g, w] : beta[i].entries()) dense[compress(g.mask(), i)] = w;
        const LatticeTable expect = naive_upward(dense);
        for (std::size_t c = 0; c < expect.size(); ++c) {
          CHECK(std::abs(alpha.table(i)[c].log() - expect[c].log()) <= 1e-9);
        }
      }
    }
  }
}

TEST_CASE("forward and backward") {
  SUBCASE("unit alpha counts orders") {
    const auto alpha = unit_alpha(6);
    const LatticeTable left = forward(alpha);
    const LatticeTable right = backward(alpha);
    for (std::size_t s = 0; s < left.size(); ++s) {
      CHECK(left[s].log() == doctest::Approx(log_factorial(std::popcount(s))));
      CHECK(right[s].log() == doctest::Approx(log_factorial(std::popcount(s))));
    }
  }

  SUBCASE("single node") {
    PriorSpec spec;
    const Dataset d = Dataset::from_rows({"only"}, {2}, {{0}, {1}, {1}});
    const auto beta = compute_beta(d, spec);
    const auto alpha = compute_alpha(beta, spec);
    CHECK(forward(alpha)[1] == alpha.table(0)[0]);
    CHECK(backward(alpha)[1] == alpha.table(0)[0]);
  }

  SUBCASE("L(V) equals the sum over all orders") {
    std::mt19937_64 rng(5);
    for (unsigned n = 1; n <= 5; ++n) {
      std::uniform_real_distribution<double> d(-4, 1);
      std::vector<LatticeTable> tables;
      for (unsigned i = 0; i < n; ++i) {
        LatticeTable t(n - 1);
        for (auto& e : t.entries()) e = LogWeight::from_log(d(rng));
        tables.push_back(t);
      }
      const AlphaTables alpha(tables);
      std::vector<unsigned> order(n);
      std::iota(order.begin(), order.end(), 0u);
      LogWeight total;
      do {
        LogWeight product = LogWeight::one();
        NodeSet before;
        for (unsigned v : order) {
          product *= alpha.at(v, before);
          before = before.with(v);
        }
        total += product;
      } while (std::next_permutation(order.begin(), order.end()));
      const auto full = NodeSet::full(n);
      CHECK(std::abs(forward(alpha)[full].log() - total.log()) <= 1e-12);
      CHECK(std::abs(backward(alpha)[full].log() - total.log()) <= 1e-12);
    }
  }
}

TEST_CASE("compute_gamma") {
  SUBCASE("two nodes by hand") {
    // h(empty) = L(empty) R({0}) = alpha_0({1}) = 2 and h({0}) = L({0}) R(empty) = alpha_0(empty) = 1.
    const auto spec = flat_prior(1);
    const auto alpha = compute_alpha(compute_beta(Dataset::empty(2), spec), spec);
    const ForwardBackward fb{forward(alpha), backward(alpha)};
    const LatticeTable gamma = compute_gamma(1, spec, fb, 1);
    CHECK(gamma[0].log() == doctest::Approx(std::log(3.0)));
    CHECK(gamma[1].log() == doctest::Approx(0.0));
    CHECK((gamma[0] + gamma[1]).log() == doctest::Approx(fb.left[0b11].log()));
  }

  SUBCASE("agrees with the naive transform and dominates h") {
    PriorSpec spec;
    spec.k = 3;
    const unsigned n = 8;
    const auto alpha = compute_alpha(compute_beta(sampled(n, 3, 2, 40, 9), spec), spec);
    const ForwardBackward fb{forward(alpha), backward(alpha)};
    const auto others = NodeSet::full(n);
    for (unsigned v = 0; v < n; ++v) {
      LatticeTable h(n - 1);
      for (std::size_t c = 0; c < h.size(); ++c) {
        const auto s = expand(c, v);
        h[c] = fb.left[s] * fb.right[others.without(v).mask() & ~s];
      }
      const LatticeTable expect = naive_downward(h);
      const LatticeTable gamma = compute_gamma(v, spec, fb, 3);
      for (std::size_t c = 0; c < h.size(); ++c) {
        if (std::popcount(c) > 3) continue;
        CHECK(std::abs(gamma[c].log() - expect[c].log()) <= 1e-9);
        CHECK(gamma[c].log() >= h[c].log() - 1e-12);
      }
    }
  }
}

TEST_CASE("edge_posteriors") {
  SUBCASE("two nodes, no data") {
    const auto post = edge_posteriors(Dataset::empty(2), flat_prior(1));
    CHECK(std::abs(post(0, 1) - 0.25) <= 1e-12);
    CHECK(std::abs(post(1, 0) - 0.25) <= 1e-12);
    CHECK(post(0, 0) == 0.0);
    CHECK(post.log_marginal.log() == doctest::Approx(std::log(4.0)));
  }

  SUBCASE("frozen reference fixture A") {
    PriorSpec spec;
    spec.k = 2;
    const auto post = edge_posteriors(fixture_a(), spec);
    const double expect[3][3] = {{0.0, 0.23940675166809816, 0.17064147453260212},
                                 {0.23940675166809816, 0.0, 0.17064147453260214},
                                 {0.20860804650855513, 0.20860804650855516, 0.0}};
    for (unsigned u = 0; u < 3; ++u)
      for (unsigned v = 0; v < 3; ++v) CHECK(std::abs(post(u, v) - expect[u][v]) <= 1e-12);
    CHECK(std::abs(post.log_marginal.log() - (-13.242536525331467)) <= 1e-12);
    CHECK(post.names == std::vector<std::string>{"a", "b", "c"});
  }

  SUBCASE("frozen reference fixture B") {
    auto spec = flat_prior(1);
    spec.score = ScoreSpec{ScoreFamily::bdeu, 1.0};
    const auto post = edge_posteriors(fixture_a(), spec);
    const double expect[3][3] = {{0.0, 0.14146481629610105, 0.09052008666816826},
                                 {0.14146481629610105, 0.0, 0.09052008666816826},
                                 {0.08256773862868595, 0.08256773862868597, 0.0}};
    for (unsigned u = 0; u < 3; ++u)
      for (unsigned v = 0; v < 3; ++v) CHECK(std::abs(post(u, v) - expect[u][v]) <= 1e-12);
    CHECK(std::abs(post.log_marginal.log() - (-14.89455689228642)) <= 1e-12);
  }

  SUBCASE("single node") {
    PriorSpec spec;
    const Dataset d = Dataset::from_rows({"only"}, {3}, {{0}, {2}});
    const auto post = edge_posteriors(d, spec);
    CHECK(post.n == 1);
    CHECK(post.probabilities == std::vector<double>{0.0});
    CHECK(post.log_marginal == compute_beta(d, spec)[0].entries().front().second);
  }

  SUBCASE("k = 0 gives no edges") {
    const auto post = edge_posteriors(sampled(6, 3, 2, 50, 2), PriorSpec{});
    for (double p : post.probabilities) CHECK(p == 0.0);
  }

  SUBCASE("matches the oracle on random data") {
    for (std::uint64_t seed = 0; seed < 12; ++seed) {
      const unsigned n = 2 + seed % 4;
      PriorSpec spec;
      spec.k = static_cast<unsigned>(seed % n);
      spec.rho = seed % 2 ? RhoFamily::flat : RhoFamily::cardinality_uniform;
      const Dataset d = sampled(n, spec.k, 2 + seed % 2, 10 + seed, seed);
      const auto a = edge_posteriors(d, spec);
      const auto b = brute_posteriors(d, spec);
      for (std::size_t e = 0; e < a.probabilities.size(); ++e) CHECK(std::abs(a.probabilities[e] - b.probabilities[e]) <= 1e-9);
      CHECK(std::abs(a.log_marginal.log() - b.log_marginal.log()) <= 1e-9);
    }
  }

  SUBCASE("matrix invariants") {
    PriorSpec spec;
    spec.k = 3;
    const auto post = edge_posteriors(sampled(9, 3, 2, 200, 17), spec);
    for (unsigned u = 0; u < 9; ++u) {
      CHECK(post(u, u) == 0.0);
      for (unsigned v = 0; v < 9; ++v) {
        CHECK(post(u, v) >= 0.0);
        CHECK(post(u, v) <= 1.0);
        if (u != v) CHECK(post(u, v) + post(v, u) <= 1.0 + 1e-12);
      }
    }
  }

  SUBCASE("threads reproduce the sequential result exactly") {
    PriorSpec spec;
    spec.k = 2;
    const Dataset d = sampled(10, 2, 3, 100, 23);
    EngineOptions parallel;
    parallel.threads = 4;
    const auto a = edge_posteriors(d, spec);
    const auto b = edge_posteriors(d, spec, parallel);
    CHECK(a.probabilities == b.probabilities);
    CHECK(a.log_marginal == b.log_marginal);
  }

  SUBCASE("node cap") {
    PriorSpec spec;
    spec.k = 1;
    CHECK_THROWS_AS(edge_posteriors(Dataset::empty(25), spec), CapExceeded);
    EngineOptions too_far;
    too_far.max_nodes = 27;
    CHECK_THROWS_AS(edge_posteriors(Dataset::empty(3), spec, too_far), PreconditionError);
  }
}

TEST_CASE("forward-backward identities") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const unsigned n = 4 + static_cast<unsigned>(seed);
    PriorSpec spec;
    spec.k = std::min(3u, n - 1);
    spec.rho = seed % 2 ? RhoFamily::flat : RhoFamily::cardinality_uniform;
    const auto beta = compute_beta(sampled(n, spec.k, 2, 60, 100 + seed), spec);
    const auto alpha = compute_alpha(beta, spec);
    const ForwardBackward fb{forward(alpha), backward(alpha)};
    const auto full = NodeSet::full(n);
    const double log_marginal = fb.left[full].log();
    CHECK(std::abs(fb.right[full].log() - log_marginal) <= 1e-9);

    for (unsigned v = 0; v < n; ++v) {
      LogWeight split;
      const auto others = full.without(v).mask();
      for (std::size_t c = 0; c < alpha.table(v).size(); ++c) {
        const auto u = expand(c, v);
        split += alpha.table(v)[c] * fb.left[u] * fb.right[others & ~u];
      }
      CHECK(std::abs(split.log() - log_marginal) <= 1e-9);

      const LatticeTable gamma = compute_gamma(v, spec, fb, spec.k);
      LogWeight total;
      for (const auto& [g, b] : beta[v].entries()) total += b * gamma[compress(g.mask(), v)];
      CHECK(std::abs(total.log() - log_marginal) <= 1e-9);
    }
  }
}

TEST_CASE("prior constants cancel") {
  PriorSpec spec;
  spec.k = 3;
  const Dataset d = sampled(8, 3, 2, 80, 31);
  PriorSpec scaled = spec;
  scaled.rho_log_scale = 3.7;
  scaled.q_log_scale = -11.25;
  const auto a = edge_posteriors(d, spec);
  const auto b = edge_posteriors(d, scaled);
  for (std::size_t e = 0; e < a.probabilities.size(); ++e) CHECK(std::abs(a.probabilities[e] - b.probabilities[e]) <= 1e-12);
  CHECK(b.log_marginal.log() == doctest::Approx(a.log_marginal.log() + 8 * (3.7 - 11.25)));
}

TEST_SUITE_END();
