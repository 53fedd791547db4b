#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "edgepost/dataset.hpp"
#include "edgepost/errors.hpp"
#include "edgepost/model.hpp"

using namespace edgepost;

namespace {

Dataset parse(const std::string& text, std::optional<std::vector<unsigned>> arities = std::nullopt) {
  std::istringstream in(text);
  return parse_dataset(in, arities);
}

ParseError::Kind parse_error_kind(const std::string& text) {
  try {
    parse(text);
  } catch (const ParseError& e) {
    return e.kind();
  }
  FAIL("no parse error for: " << text);
  return ParseError::Kind::bad_document;
}

// Records of fixture A in tests/oracles/frozen_values.py.
Dataset fixture_a() {
  return Dataset::from_rows({"a", "b", "c"}, {2, 2, 2},
                            {{0, 0, 1}, {1, 1, 1}, {1, 1, 0}, {0, 0, 0}, {1, 0, 1}, {0, 1, 1}, {1, 1, 1}});
}

Dataset random_dataset(unsigned n, std::size_t m, unsigned r, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<unsigned> value(0, r - 1);
  std::vector<std::vector<Dataset::value_type>> rows(m, std::vector<Dataset::value_type>(n));
  for (auto& row : rows)
    for (auto& x : row) x = value(rng);
  std::vector<std::string> names;
  for (unsigned i = 0; i < n; ++i) names.push_back("v" + std::to_string(i));
  return Dataset::from_rows(names, std::vector<unsigned>(n, r), rows);
}

}  // namespace

TEST_SUITE_BEGIN("model");

TEST_CASE("load_dataset") {
  SUBCASE("read back") {
    const Dataset d = parse("a,b\n0,1\n1,0\n");
    CHECK(d.n() == 2);
    CHECK(d.m() == 2);
    CHECK(d.arities() == std::vector<unsigned>{2, 2});
    CHECK(d.at(0, 1) == 1);
    CHECK(d.names() == std::vector<std::string>{"a", "b"});
  }

  SUBCASE("header only") {
    const Dataset d = parse("a,b\n");
    CHECK(d.n() == 2);
    CHECK(d.m() == 0);
    CHECK(d.arities() == std::vector<unsigned>{1, 1});
  }

  SUBCASE("arity is max + 1") { CHECK(parse("a,b\n0,5\n0,2\n").arities() == std::vector<unsigned>{1, 6}); }

  SUBCASE("comments, blank lines, CRLF and spaces") {
    const Dataset d = parse("# generated\r\na, b\r\n\r\n0, 1\r\n# mid\n2,0\n");
    CHECK(d.m() == 2);
    CHECK(d.arities() == std::vector<unsigned>{3, 2});
  }

  SUBCASE("arity override") {
    CHECK(parse("a,b\n0,1\n", std::vector<unsigned>{3, 4}).arities() == std::vector<unsigned>{3, 4});
    CHECK_THROWS_AS(parse("a,b\n0,4\n", std::vector<unsigned>{3, 4}), ParseError);
    CHECK_THROWS_AS(parse("a,b\n0,1\n", std::vector<unsigned>{3}), ParseError);
  }

  SUBCASE("errors carry kind and line") {
    CHECK(parse_error_kind("a,b\n0,1,2\n") == ParseError::Kind::ragged_row);
    CHECK(parse_error_kind("a,b\n0,x\n") == ParseError::Kind::non_integer);
    CHECK(parse_error_kind("a,b\n0,1.5\n") == ParseError::Kind::non_integer);
    CHECK(parse_error_kind("a,b\n0,-1\n") == ParseError::Kind::negative_value);
    CHECK(parse_error_kind("a,b\n0,\n") == ParseError::Kind::malformed_row);
    CHECK(parse_error_kind("") == ParseError::Kind::missing_header);
    CHECK(parse_error_kind("a,a\n") == ParseError::Kind::malformed_header);
    try {
      parse("a,b\n0,1\n# note\n1,x\n");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 4);
    }
  }

  SUBCASE("missing file") { CHECK_THROWS_AS(load_dataset("/nonexistent/data.csv"), IoError); }

  SUBCASE("write and parse agree") {
    const Dataset d = fixture_a();
    std::ostringstream out;
    write_dataset(out, d);
    const Dataset back = parse(out.str());
    CHECK(back.names() == d.names());
    for (unsigned i = 0; i < d.n(); ++i) CHECK(std::ranges::equal(back.column(i), d.column(i)));
  }
}

TEST_CASE("local_marginal_likelihood") {
  const ScoreSpec k2{};
  SUBCASE("hand-evaluated gamma ratio") {
    const Dataset d = Dataset::from_rows({"x"}, {2}, {{0}, {0}, {1}});
    CHECK(local_marginal_likelihood(d, 0, NodeSet(), k2).log() == doctest::Approx(std::log(1.0 / 12.0)).epsilon(1e-12));
  }

  SUBCASE("no records") {
    const Dataset d = Dataset::empty(4, 3);
    CHECK(local_marginal_likelihood(d, 2, NodeSet(0b1011), k2) == LogWeight::one());
    CHECK(local_marginal_likelihood(d, 2, NodeSet(0b1011), ScoreSpec{ScoreFamily::bdeu, 2.0}) == LogWeight::one());
  }

  SUBCASE("record order does not matter") {
    const Dataset d = random_dataset(4, 40, 3, 7);
    std::vector<std::vector<Dataset::value_type>> rows;
    for (std::size_t t = 0; t < d.m(); ++t) rows.push_back({d.at(t, 0), d.at(t, 1), d.at(t, 2), d.at(t, 3)});
    std::mt19937_64 rng(1);
    std::shuffle(rows.begin(), rows.end(), rng);
    const Dataset shuffled = Dataset::from_rows(d.names(), d.arities(), rows);
    for (ScoreSpec s : {k2, ScoreSpec{ScoreFamily::bdeu, 1.5}}) {
      CHECK(local_marginal_likelihood(d, 1, NodeSet(0b1101), s) == local_marginal_likelihood(shuffled, 1, NodeSet(0b1101), s));
    }
  }

  SUBCASE("relabeling parent states does not matter") {
    const Dataset d = random_dataset(3, 50, 3, 8);
    std::vector<std::vector<Dataset::value_type>> rows;
    for (std::size_t t = 0; t < d.m(); ++t) rows.push_back({(d.at(t, 0) + 1) % 3, d.at(t, 1), d.at(t, 2)});
    const Dataset relabeled = Dataset::from_rows(d.names(), d.arities(), rows);
    CHECK(local_marginal_likelihood(d, 2, NodeSet(0b011), k2) == local_marginal_likelihood(relabeled, 2, NodeSet(0b011), k2));
  }

  SUBCASE("bdeu hyperparameters spread ess over the table") {
    // Two binary parents: q = 4, r = 2, cell prior 1/8 for ess = 1.
    const Dataset d = Dataset::from_rows({"a", "b", "c"}, {2, 2, 2}, {{0, 0, 1}, {0, 0, 1}, {1, 0, 0}});
    const double a = 1.0 / 8.0;
    const double expect = (std::lgamma(2 * a) - std::lgamma(2 * a + 2) + std::lgamma(a + 2) - std::lgamma(a)) +
                          (std::lgamma(2 * a) - std::lgamma(2 * a + 1) + std::lgamma(a + 1) - std::lgamma(a));
    CHECK(local_marginal_likelihood(d, 2, NodeSet(0b011), ScoreSpec{ScoreFamily::bdeu, 1.0}).log() ==
          doctest::Approx(expect).epsilon(1e-12));
  }

  SUBCASE("errors") {
    const Dataset d = random_dataset(3, 5, 2, 1);
    CHECK_THROWS_AS(local_marginal_likelihood(d, 1, NodeSet(0b010), k2), PreconditionError);
    const Dataset wide = Dataset::from_rows({"a", "b", "c", "d"}, {10000, 10000, 10000, 2}, {{0, 0, 0, 0}});
    CHECK_THROWS_AS(local_marginal_likelihood(wide, 3, NodeSet(0b0111), k2), CapExceeded);
  }

  SUBCASE("never above 1 with at least one record") {
    const Dataset d = random_dataset(4, 12, 2, 5);
    for (NodeSet::mask_type g = 0; g < 16; ++g) {
      if (NodeSet(g).contains(3)) continue;
      CHECK(local_marginal_likelihood(d, 3, NodeSet(g), k2).log() <= 0.0);
    }
  }

  SUBCASE("arity-one attribute contributes 1") {
    const Dataset d = Dataset::from_rows({"a", "b"}, {1, 2}, {{0, 1}, {0, 0}, {0, 1}});
    CHECK(local_marginal_likelihood(d, 0, NodeSet(0b10), k2) == LogWeight::one());
  }
}

TEST_CASE("priors") {
  PriorSpec flat;
  flat.k = 2;
  flat.rho = RhoFamily::flat;
  PriorSpec card;
  card.k = 2;
  CHECK(rho(0, NodeSet(0b110), flat, 5) == LogWeight::one());
  CHECK(rho(0, NodeSet(0b110), card, 5).log() == doctest::Approx(-std::log(6.0)));
  CHECK(rho(0, NodeSet(0b1110), flat, 5).is_zero());
  CHECK(rho(0, NodeSet(0b1110), card, 5).is_zero());
  CHECK(q(1, NodeSet(0b101), flat) == LogWeight::one());
  CHECK_THROWS_AS(rho(1, NodeSet(0b010), flat, 5), PreconditionError);

  PriorSpec bad;
  bad.score = ScoreSpec{ScoreFamily::bdeu, 0.0};
  CHECK_THROWS_AS(bad.validate(), PreconditionError);
}

TEST_CASE("compute_beta") {
  SUBCASE("table sizes") {
    PriorSpec spec;
    spec.k = 2;
    const auto beta = compute_beta(Dataset::empty(3), spec);
    REQUIRE(beta.size() == 3);
    for (const auto& t : beta) CHECK(t.size() == 4);

    spec.k = 3;
    for (const auto& t : compute_beta(Dataset::empty(8), spec)) CHECK(t.size() == binomial_tail(7, 3));
  }

  SUBCASE("no data and flat prior give log 1 everywhere") {
    PriorSpec spec;
    spec.k = 3;
    spec.rho = RhoFamily::flat;
    for (const auto& t : compute_beta(Dataset::empty(6), spec))
      for (const auto& [g, w] : t.entries()) CHECK(w == LogWeight::one());
  }

  SUBCASE("keys are admissible and canonical") {
    PriorSpec spec;
    spec.k = 2;
    const auto beta = compute_beta(Dataset::empty(5), spec);
    for (const auto& t : beta) {
      for (const auto& [g, w] : t.entries()) {
        CHECK_FALSE(g.contains(t.node()));
        CHECK(g.size() <= 2);
      }
    }
  }

  SUBCASE("spot entry against the reference script") {
    PriorSpec spec;
    spec.k = 2;
    const auto beta = compute_beta(fixture_a(), spec);
    const auto entry = beta[2].find(NodeSet(0b001));
    REQUIRE(entry.has_value());
    CHECK(entry->log() == doctest::Approx(-6.173786103901937).epsilon(1e-12));
    CHECK_FALSE(beta[2].find(NodeSet(0b100)).has_value());
  }

  SUBCASE("duplicated records keep shapes and finiteness") {
    const Dataset d = random_dataset(5, 20, 2, 3);
    std::vector<std::vector<Dataset::value_type>> rows;
    for (int copy = 0; copy < 2; ++copy)
      for (std::size_t t = 0; t < d.m(); ++t) rows.push_back({d.at(t, 0), d.at(t, 1), d.at(t, 2), d.at(t, 3), d.at(t, 4)});
    const Dataset doubled = Dataset::from_rows(d.names(), d.arities(), rows);
    PriorSpec spec;
    spec.k = 3;
    const auto a = compute_beta(d, spec);
    const auto b = compute_beta(doubled, spec);
    for (unsigned i = 0; i < 5; ++i) {
      REQUIRE(a[i].size() == b[i].size());
      for (std::size_t e = 0; e < a[i].size(); ++e) {
        CHECK(a[i].entries()[e].first == b[i].entries()[e].first);
        CHECK(std::isfinite(b[i].entries()[e].second.log()));
        CHECK(b[i].entries()[e].second <= rho(i, b[i].entries()[e].first, spec, 5));
      }
    }
  }

  SUBCASE("threads do not change results") {
    const Dataset d = random_dataset(7, 30, 3, 4);
    PriorSpec spec;
    spec.k = 3;
    const auto a = compute_beta(d, spec, 1);
    const auto b = compute_beta(d, spec, 3);
    for (unsigned i = 0; i < 7; ++i) CHECK(a[i].entries() == b[i].entries());
  }
}

TEST_SUITE_END();
