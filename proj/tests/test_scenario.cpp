#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "corrlab/locality.hpp"
#include "corrlab/scenario.hpp"

using namespace corrlab;

namespace {

Behavior<Rational> uniform_behavior(const Scenario& scn) {
  Behavior<Rational> b(scn);
  for (auto& table : b.tables) {
    const Rational p(1, static_cast<long>(table.size()));
    for (auto& x : table.data) x = p;
  }
  return b;
}

// Random exact behavior: independent small-rational weights, normalized.
Behavior<Rational> random_behavior(const Scenario& scn, std::mt19937& rng) {
  Behavior<Rational> b(scn);
  std::uniform_int_distribution<int> num(0, 8);
  for (auto& table : b.tables) {
    Rational total(0);
    for (auto& x : table.data) {
      x = Rational(1 + num(rng));
      total += x;
    }
    for (auto& x : table.data) x /= total;
  }
  return b;
}

}  // namespace

TEST_CASE("scenario invariants and indexing") {
  const Scenario scn = Scenario::uniform(2, 2, 2);
  CHECK(scn.setting_tuple_count() == 4);
  CHECK(scn.setting_tuple(3) == std::vector<int>{1, 1});
  CHECK(scn.setting_index({1, 0}) == 2);
  CHECK(scn.dichotomic());

  const Scenario mixed({2, 1}, {{2, 3}, {4}});
  CHECK(mixed.setting_tuple_count() == 2);
  CHECK(mixed.outcome_dims({1, 0}) == std::vector<int>{3, 4});
  CHECK_FALSE(mixed.dichotomic());
  CHECK_THROWS_AS(Scenario({0}, {{}}), InputError);
  CHECK_THROWS_AS(Scenario({1}, {{0}}), InputError);
}

TEST_CASE("validate_behavior flags the broken invariant") {
  Behavior<Rational> b = uniform_behavior(Scenario::uniform(2, 2, 2));
  CHECK(validate_behavior(b).valid());

  b.table({0, 1}).at({0, 0}) = Rational(1, 2);
  const auto report = validate_behavior(b);
  REQUIRE(report.issues.size() == 1);
  CHECK(report.issues[0].kind == "normalization");
  CHECK(report.issues[0].setting_tuple == std::vector<int>{0, 1});

  CHECK(validate_behavior(make_pr_box()).valid());
}

TEST_CASE("marginals") {
  const auto pr = make_pr_box();
  SUBCASE("keeping all sites returns the table") {
    const auto m = marginal(pr, {0, 1}, {0, 1});
    CHECK(Tensor<Rational>::max_abs_diff(m, pr.table({0, 1})) == 0);
  }
  SUBCASE("uniform and PR single-site marginals are flat") {
    const auto u = uniform_behavior(Scenario::uniform(2, 2, 2));
    for (const auto& b : {u, pr})
      for (long ti = 0; ti < 4; ++ti) {
        const auto m = marginal(b, b.scenario.setting_tuple(ti), {0});
        CHECK(m.data == std::vector<Rational>{Rational(1, 2), Rational(1, 2)});
      }
  }
  SUBCASE("input validation") {
    CHECK_THROWS_AS(marginal(pr, {0, 1}, {}), InputError);
    CHECK_THROWS_AS(marginal(pr, {0, 1}, {1, 0}), InputError);
    CHECK_THROWS_AS(marginal(pr, {0, 1}, {2}), InputError);
    CHECK_THROWS_AS(marginal(pr, {0, 2}, {0}), InputError);
  }
}

TEST_CASE("marginal consistency on random behaviors") {
  std::mt19937 rng(7);
  const Scenario scn({2, 2, 1}, {{2, 3}, {2, 2}, {4}});
  for (int trial = 0; trial < 20; ++trial) {
    const auto b = random_behavior(scn, rng);
    for (long ti = 0; ti < scn.setting_tuple_count(); ++ti) {
      const auto tuple = scn.setting_tuple(ti);
      const auto via_pair = b.table(tuple).marginalize({0, 2}).marginalize({1});
      const auto direct = b.table(tuple).marginalize({2});
      CHECK(Tensor<Rational>::max_abs_diff(via_pair, direct) == 0);
      CHECK(b.table(tuple).marginalize({1}).sum() == 1);
    }
  }
}

TEST_CASE("product expectations") {
  const auto pr = make_pr_box();
  SUBCASE("constant one functions give normalization") {
    const std::vector<std::vector<Rational>> ones{{1, 1}, {1, 1}};
    CHECK(product_expectation(pr, {0, 0}, ones) == 1);
  }
  SUBCASE("indicators recover table entries") {
    const std::vector<std::vector<Rational>> point{{1, 0}, {1, 0}};
    CHECK(product_expectation(pr, {0, 0}, point) == Rational(1, 2));
    for (long ti = 0; ti < 4; ++ti) {
      const auto tuple = pr.scenario.setting_tuple(ti);
      for (int l1 = 0; l1 < 2; ++l1)
        for (int l2 = 0; l2 < 2; ++l2) {
          std::vector<std::vector<Rational>> ind{{0, 0}, {0, 0}};
          ind[0][l1] = 1;
          ind[1][l2] = 1;
          CHECK(product_expectation(pr, tuple, ind) == pr.table(tuple).at({l1, l2}));
        }
    }
  }
  SUBCASE("independent means factorize") {
    Behavior<Rational> b(Scenario::uniform(2, 1, 2));
    const Rational p(2, 3), q(1, 4);  // P(+1) per site
    b.table({0, 0}).at({0, 0}) = p * q;
    b.table({0, 0}).at({0, 1}) = p * (1 - q);
    b.table({0, 0}).at({1, 0}) = (1 - p) * q;
    b.table({0, 0}).at({1, 1}) = (1 - p) * (1 - q);
    const std::vector<std::vector<Rational>> sign{{1, -1}, {1, -1}};
    const Rational m1 = 2 * p - 1, m2 = 2 * q - 1;
    CHECK(product_expectation(b, {0, 0}, sign) == m1 * m2);
  }
  SUBCASE("undefined function is an input error") {
    const std::vector<std::vector<Rational>> bad{{1}, {1, 1}};
    CHECK_THROWS_AS(product_expectation(pr, {0, 0}, bad), InputError);
  }
}

TEST_CASE("behavior to correlations") {
  SUBCASE("uniform behavior has vanishing means") {
    const auto corr = behavior_to_correlations(uniform_behavior(Scenario::uniform(2, 2, 2)));
    for (int mask = 1; mask < 4; ++mask)
      for (const auto& v : corr.means[mask]) CHECK(v == 0);
  }
  SUBCASE("PR box correlators") {
    const auto corr = behavior_to_correlations(make_pr_box());
    CHECK(corr.mean(3, {0, 0}) == 1);
    CHECK(corr.mean(3, {0, 1}) == 1);
    CHECK(corr.mean(3, {1, 0}) == 1);
    CHECK(corr.mean(3, {1, 1}) == -1);
    for (int mask : {1, 2})
      for (const auto& v : corr.means[mask]) CHECK(v == 0);
  }
  SUBCASE("point mass at +1 gives all means one") {
    Behavior<Rational> b(Scenario::uniform(3, 2, 2));
    for (auto& table : b.tables) table.data[0] = 1;
    const auto corr = behavior_to_correlations(b);
    for (int mask = 1; mask < 8; ++mask)
      for (const auto& v : corr.means[mask]) CHECK(v == 1);
  }
  SUBCASE("non-dichotomic scenarios are rejected") {
    Behavior<Rational> b(Scenario({1}, {{3}}));
    b.tables[0].data[0] = 1;
    CHECK_THROWS_AS(behavior_to_correlations(b), InputError);
  }
}

TEST_CASE("correlations to behavior") {
  SUBCASE("zero means reconstruct the uniform behavior") {
    CorrelationSet<Rational> corr(Scenario::uniform(3, 2, 2));
    const auto [b, report] = correlations_to_behavior(corr);
    CHECK(report.valid());
    for (const auto& table : b.tables)
      for (const auto& x : table.data) CHECK(x == Rational(1, 8));
  }
  SUBCASE("bipartite reconstruction formula") {
    // With vanishing single-site means and full correlator one, the ++ entry
    // is (1 + 0 + 0 + 1)/4 = 1/2.
    CorrelationSet<Rational> corr(Scenario::uniform(2, 2, 2));
    corr.mean(3, {0, 0}) = 1;
    const auto [b, report] = correlations_to_behavior(corr);
    CHECK(report.valid());
    CHECK(b.table({0, 0}).at({0, 0}) == Rational(1, 2));
    CHECK(b.table({0, 0}).at({0, 1}) == 0);
  }
  SUBCASE("invalid correlation sets are reported, not clipped") {
    CorrelationSet<Rational> corr(Scenario::uniform(2, 1, 2));
    corr.mean(1, {0}) = 1;
    corr.mean(2, {0}) = 1;
    corr.mean(3, {0, 0}) = -1;  // forces a negative entry
    const auto [b, report] = correlations_to_behavior(corr);
    CHECK_FALSE(report.valid());
    CHECK(b.table({0, 0}).at({0, 0}) == Rational(1, 4) * Rational(1 + 1 + 1 - 1));
    bool negative_seen = false;
    for (const auto& issue : report.issues) negative_seen |= issue.kind == "negative-entry";
    CHECK(negative_seen);
  }
}

TEST_CASE("transform round trips on random dichotomic behaviors") {
  std::mt19937 rng(11);
  const Scenario scn = Scenario::uniform(3, 2, 2);
  for (int trial = 0; trial < 40; ++trial) {
    const auto b = random_behavior(scn, rng);
    const auto corr = behavior_to_correlations(b);
    // correlations -> behavior -> correlations is always the identity
    const auto [b2, report] = correlations_to_behavior(corr);
    const auto corr2 = behavior_to_correlations(b2);
    for (int mask = 1; mask < 8; ++mask) CHECK(corr.means[mask] == corr2.means[mask]);
  }
}

TEST_CASE("sub-behavior and site marginal behaviors") {
  const auto pr = make_pr_box();
  const auto sub = sub_behavior(pr, {{0, 1}, {0}});
  CHECK(sub.scenario.settings == std::vector<int>{2, 1});
  CHECK(Tensor<Rational>::max_abs_diff(sub.table({1, 0}), pr.table({1, 0})) == 0);

  const auto site = site_marginal_behavior(pr, {1});
  CHECK(site.scenario.parties == 1);
  CHECK(site.table({0}).data == std::vector<Rational>{Rational(1, 2), Rational(1, 2)});
  CHECK_THROWS_AS(sub_behavior(pr, {{0, 1}}), InputError);
  CHECK_THROWS_AS(site_marginal_behavior(pr, {}), InputError);
}
