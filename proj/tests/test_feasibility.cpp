#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "corrlab/feasibility.hpp"

using namespace corrlab;

namespace {

// Random exact problem with a controllable chance of being feasible: either
// b = A x0 for a random nonnegative x0, or b is drawn independently.
LinearFeasibilityProblem<Rational> random_problem(std::mt19937& rng, bool plant_solution) {
  std::uniform_int_distribution<int> dim(1, 5);
  std::uniform_int_distribution<int> coef(-3, 3);
  const int n = dim(rng), m = dim(rng);
  LinearFeasibilityProblem<Rational> p(n);
  std::vector<std::vector<Rational>> rows(m, std::vector<Rational>(n));
  for (auto& row : rows)
    for (auto& x : row) x = coef(rng);
  if (plant_solution) {
    std::uniform_int_distribution<int> nonneg(0, 3);
    std::vector<Rational> x0(n);
    for (auto& x : x0) x = nonneg(rng);
    for (int i = 0; i < m; ++i) {
      Rational b(0);
      for (int j = 0; j < n; ++j) b += rows[i][j] * x0[j];
      p.add_constraint(rows[i], b);
    }
  } else {
    for (int i = 0; i < m; ++i) p.add_constraint(rows[i], Rational(coef(rng)));
  }
  return p;
}

template <class T>
LinearFeasibilityProblem<double> to_float(const LinearFeasibilityProblem<T>& p) {
  LinearFeasibilityProblem<double> q(p.num_vars);
  for (std::size_t i = 0; i < p.rows.size(); ++i) {
    std::vector<double> row(p.num_vars);
    for (int j = 0; j < p.num_vars; ++j) row[j] = to_double(p.rows[i][j]);
    q.add_constraint(row, to_double(p.rhs[i]));
  }
  return q;
}

}  // namespace

TEST_CASE("one-constraint problems") {
  SUBCASE("x1 + x2 = 1 is feasible") {
    LinearFeasibilityProblem<Rational> p(2);
    p.add_constraint({Rational(1), Rational(1)}, Rational(1));
    const auto r = solve_feasibility(p);
    REQUIRE(r.feasible());
    CHECK(r.solution[0] + r.solution[1] == 1);
    CHECK(r.solution[0] >= 0);
    CHECK(r.solution[1] >= 0);
  }
  SUBCASE("x1 = -1 is infeasible with certificate (-1)") {
    LinearFeasibilityProblem<Rational> p(1);
    p.add_constraint({Rational(1)}, Rational(-1));
    const auto r = solve_feasibility(p);
    REQUIRE_FALSE(r.feasible());
    CHECK(r.certificate == std::vector<Rational>{Rational(-1)});
    CHECK(r.margin == 1);
    CHECK(certificate_is_sound(p, r.certificate, Rational(0)));
  }
}

TEST_CASE("dimension mismatch is an input error") {
  LinearFeasibilityProblem<Rational> p(2);
  CHECK_THROWS_AS(p.add_constraint({Rational(1)}, Rational(0)), InputError);
  CHECK_THROWS_AS(LinearFeasibilityProblem<Rational>(0), InputError);
}

TEST_CASE("soundness on random exact problems") {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 120; ++trial) {
    const auto p = random_problem(rng, trial % 2 == 0);
    const auto r = solve_feasibility(p);
    if (r.feasible()) {
      CHECK(max_constraint_residual(p, r.solution) == 0);
      for (const auto& x : r.solution) CHECK(x >= 0);
    } else {
      CHECK(certificate_is_sound(p, r.certificate, Rational(0)));
      Rational max_abs(0);
      for (const auto& y : r.certificate)
        if (abs_value(y) > max_abs) max_abs = abs_value(y);
      CHECK(max_abs == 1);
      CHECK(r.margin > 0);
    }
  }
}

TEST_CASE("planted solutions are found feasible") {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 60; ++trial) {
    const auto p = random_problem(rng, true);
    CHECK(solve_feasibility(p).feasible());
  }
}

TEST_CASE("determinism") {
  std::mt19937 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = random_problem(rng, trial % 2 == 0);
    const auto a = solve_feasibility(p);
    const auto b = solve_feasibility(p);
    CHECK(a.feasible() == b.feasible());
    CHECK(a.solution == b.solution);
    CHECK(a.certificate == b.certificate);
  }
}

TEST_CASE("float mode agrees with exact mode away from the tolerance edge") {
  std::mt19937 rng(13);
  int checked = 0;
  for (int trial = 0; trial < 150; ++trial) {
    const auto p = random_problem(rng, trial % 2 == 0);
    const auto exact = solve_feasibility(p);
    const auto approx = solve_feasibility(to_float(p));
    if (approx.phase1_objective > 10 * ArithTraits<double>::feasibility_tolerance()) {
      CHECK_FALSE(approx.feasible());
      CHECK_FALSE(exact.feasible());
      ++checked;
    } else if (approx.feasible() && !approx.marginal) {
      CHECK(exact.feasible());
      ++checked;
    }
    if (approx.feasible())
      CHECK(max_constraint_residual(to_float(p), approx.solution) <=
            ArithTraits<double>::feasibility_tolerance());
  }
  CHECK(checked > 50);
}

TEST_CASE("float certificates satisfy the Farkas conditions within tolerance") {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 80; ++trial) {
    const auto p = to_float(random_problem(rng, false));
    const auto r = solve_feasibility(p);
    if (!r.feasible()) CHECK(certificate_is_sound(p, r.certificate, 1e-7));
  }
}
