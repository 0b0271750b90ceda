#pragma once

#include <cstddef>
#include <vector>

#include "corrlab/rational.hpp"

namespace corrlab {

/// Equality-constrained feasibility problem: find x >= 0 with Ax = b.
template <class T>
struct LinearFeasibilityProblem {
  int num_vars = 0;
  std::vector<std::vector<T>> rows;
  std::vector<T> rhs;

  explicit LinearFeasibilityProblem(int vars) : num_vars(vars) {
    if (vars < 1) throw InputError("feasibility problem needs at least one variable");
  }

  void add_constraint(std::vector<T> coefficients, T b) {
    if (static_cast<int>(coefficients.size()) != num_vars)
      throw InputError("constraint length does not match variable count");
    rows.push_back(std::move(coefficients));
    rhs.push_back(std::move(b));
  }
};

enum class FeasibilityVerdict { Feasible, Infeasible };

/// Either a nonnegative solution of Ax = b, or a Farkas certificate y with
/// y^T A <= 0 componentwise and y^T b > 0, normalized to max |y_i| = 1.
template <class T>
struct FeasibilityResult {
  FeasibilityVerdict verdict = FeasibilityVerdict::Infeasible;
  std::vector<T> solution;
  std::vector<T> certificate;
  T margin{};             // y^T b after normalization
  T phase1_objective{};   // residual infeasibility of the phase-1 optimum
  bool marginal = false;  // float mode: optimum within an order of magnitude
                          // of the feasibility cut, interpretation left to
                          // the caller

  bool feasible() const { return verdict == FeasibilityVerdict::Feasible; }
};

/// Phase-1 simplex with Bland's anti-cycling rule. Exact-rational problems get
/// a mathematically exact verdict; float problems use the mode's feasibility
/// tolerance. The certificate is read off the phase-1 duals at optimality.
template <class T>
FeasibilityResult<T> solve_feasibility(const LinearFeasibilityProblem<T>& p) {
  const int m = static_cast<int>(p.rows.size());
  const int n = p.num_vars;
  const T pivot_tol = ArithTraits<T>::pivot_tolerance();
  const T feas_tol = ArithTraits<T>::feasibility_tolerance();

  FeasibilityResult<T> result;
  if (m == 0) {
    result.verdict = FeasibilityVerdict::Feasible;
    result.solution.assign(n, T(0));
    return result;
  }

  // Sign-flip rows so the right-hand side is nonnegative; remember the flips
  // to map the dual back onto the caller's constraint order.
  std::vector<int> flip(m, 1);
  // Tableau columns: n structural, m artificial, then the rhs.
  std::vector<std::vector<T>> tab(m, std::vector<T>(n + m + 1, T(0)));
  for (int i = 0; i < m; ++i) {
    flip[i] = p.rhs[i] < T(0) ? -1 : 1;
    for (int j = 0; j < n; ++j) tab[i][j] = T(flip[i]) * p.rows[i][j];
    tab[i][n + i] = T(1);
    tab[i][n + m] = T(flip[i]) * p.rhs[i];
  }

  // Reduced-cost row for minimizing the sum of artificials, kept incrementally.
  std::vector<T> cost(n + m + 1, T(0));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j <= n + m; ++j) cost[j] -= tab[i][j];
  for (int i = 0; i < m; ++i) cost[n + i] = T(0);

  std::vector<int> basis(m);
  for (int i = 0; i < m; ++i) basis[i] = n + i;

  for (;;) {
    int entering = -1;
    for (int j = 0; j < n + m; ++j) {
      if (cost[j] < -pivot_tol) {
        entering = j;
        break;
      }
    }
    if (entering < 0) break;

    int leaving = -1;
    for (int i = 0; i < m; ++i) {
      if (tab[i][entering] <= pivot_tol) continue;
      if (leaving < 0) {
        leaving = i;
        continue;
      }
      const T lhs = tab[i][n + m] * tab[leaving][entering];
      const T rhs = tab[leaving][n + m] * tab[i][entering];
      if (lhs < rhs || (lhs == rhs && basis[i] < basis[leaving])) leaving = i;
    }
    if (leaving < 0) break;  // cannot happen in pure phase 1; guards float noise

    const T pivot = tab[leaving][entering];
    for (int j = 0; j <= n + m; ++j) tab[leaving][j] /= pivot;
    for (int i = 0; i < m; ++i) {
      if (i == leaving) continue;
      const T factor = tab[i][entering];
      if (factor == T(0)) continue;
      for (int j = 0; j <= n + m; ++j) tab[i][j] -= factor * tab[leaving][j];
    }
    const T cfactor = cost[entering];
    if (cfactor != T(0))
      for (int j = 0; j <= n + m; ++j) cost[j] -= cfactor * tab[leaving][j];
    basis[leaving] = entering;
  }

  // Objective value = sum of artificial basic values = -cost[rhs column]
  // relative to the zero start; recompute directly for clarity.
  T objective(0);
  for (int i = 0; i < m; ++i)
    if (basis[i] >= n) objective += tab[i][n + m];
  result.phase1_objective = objective;

  if (objective <= feas_tol) {
    result.verdict = FeasibilityVerdict::Feasible;
    result.solution.assign(n, T(0));
    for (int i = 0; i < m; ++i)
      if (basis[i] < n) result.solution[basis[i]] = tab[i][n + m];
    if (!ArithTraits<T>::exact) result.marginal = objective * T(10) > feas_tol;
    return result;
  }

  // Farkas dual: y'_i = 1 - reduced cost of artificial column i, un-flipped.
  std::vector<T> y(m);
  for (int i = 0; i < m; ++i) y[i] = T(flip[i]) * (T(1) - cost[n + i]);
  T max_abs(0);
  for (const T& v : y) {
    const T a = abs_value(v);
    if (a > max_abs) max_abs = a;
  }
  if (max_abs > T(0))
    for (T& v : y) v /= max_abs;
  T margin(0);
  for (int i = 0; i < m; ++i) margin += y[i] * p.rhs[i];
  result.verdict = FeasibilityVerdict::Infeasible;
  result.certificate = std::move(y);
  result.margin = margin;
  if (!ArithTraits<T>::exact) result.marginal = objective <= feas_tol * T(10);
  return result;
}

/// Residual checks used by tests and the certificate soundness invariant.
template <class T>
T max_constraint_residual(const LinearFeasibilityProblem<T>& p, const std::vector<T>& x) {
  T worst(0);
  for (std::size_t i = 0; i < p.rows.size(); ++i) {
    T lhs(0);
    for (int j = 0; j < p.num_vars; ++j) lhs += p.rows[i][j] * x[j];
    T r = lhs - p.rhs[i];
    r = abs_value(r);
    if (r > worst) worst = r;
  }
  return worst;
}

template <class T>
bool certificate_is_sound(const LinearFeasibilityProblem<T>& p, const std::vector<T>& y,
                          const T& tol) {
  if (y.size() != p.rows.size()) return false;
  for (int j = 0; j < p.num_vars; ++j) {
    T dot(0);
    for (std::size_t i = 0; i < p.rows.size(); ++i) dot += y[i] * p.rows[i][j];
    if (dot > tol) return false;
  }
  T yb(0);
  for (std::size_t i = 0; i < p.rows.size(); ++i) yb += y[i] * p.rhs[i];
  return yb > tol;
}

}  // namespace corrlab
