#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "corrlab/feasibility.hpp"
#include "corrlab/locality.hpp"
#include "corrlab/scenario.hpp"

namespace corrlab {

constexpr long kDefaultEnumerationCap = 10'000'000L;

/// (party, setting) pairs in lexicographic order; this fixes the axis order of
/// joint measures and the digit order of strategy enumeration.
inline std::vector<std::pair<int, int>> setting_pairs(const Scenario& scn) {
  std::vector<std::pair<int, int>> pairs;
  for (int n = 0; n < scn.parties; ++n)
    for (int s = 0; s < scn.settings[n]; ++s) pairs.emplace_back(n, s);
  return pairs;
}

inline std::vector<int> pair_outcome_dims(const Scenario& scn) {
  std::vector<int> dims;
  for (int n = 0; n < scn.parties; ++n)
    for (int s = 0; s < scn.settings[n]; ++s) dims.push_back(scn.outcomes[n][s]);
  return dims;
}

inline int pair_axis(const Scenario& scn, int party, int setting) {
  int axis = 0;
  for (int n = 0; n < party; ++n) axis += scn.settings[n];
  return axis + setting;
}

/// One outcome per (party, setting): a vertex of the local polytope.
struct DeterministicStrategy {
  std::vector<int> assignment;  // indexed by pair_axis order

  int outcome(const Scenario& scn, int party, int setting) const {
    return assignment[pair_axis(scn, party, setting)];
  }
};

/// Finite hidden-variable model: weights over omega plus per-(party, setting)
/// response distributions.
template <class T>
struct LhvModel {
  std::vector<std::string> omega;
  std::vector<T> weights;
  // responses[n][s][w] is a distribution over the outcomes of (n, s).
  std::vector<std::vector<std::vector<std::vector<T>>>> responses;
};

/// Joint distribution over the outcomes of every (party, setting) pair at
/// once; axes follow setting_pairs order.
template <class T>
struct JointMeasure {
  Scenario scenario;
  Tensor<T> tensor;
};

inline long strategy_count(const Scenario& scn, long cap = kDefaultEnumerationCap) {
  long count = 1;
  for (int k : pair_outcome_dims(scn)) {
    if (count > cap / k) {
      throw ResourceError("strategy enumeration above cap: more than " + std::to_string(cap));
    }
    count *= k;
  }
  return count;
}

/// All deterministic strategies in mixed-radix order, pair (1,1)'s digit most
/// significant.
inline std::vector<DeterministicStrategy> enumerate_deterministic_strategies(
    const Scenario& scn, long cap = kDefaultEnumerationCap) {
  const long count = strategy_count(scn, cap);
  const auto dims = pair_outcome_dims(scn);
  std::vector<DeterministicStrategy> out;
  out.reserve(count);
  std::vector<int> digits(dims.size(), 0);
  for (long i = 0; i < count; ++i) {
    out.push_back({digits});
    next_tuple(digits, dims);
  }
  return out;
}

/// Point-mass behavior realized by one deterministic strategy.
template <class T>
Behavior<T> strategy_behavior(const Scenario& scn, const DeterministicStrategy& strategy) {
  Behavior<T> b(scn);
  const long tuples = scn.setting_tuple_count();
  for (long ti = 0; ti < tuples; ++ti) {
    const auto tuple = scn.setting_tuple(ti);
    std::vector<int> idx(scn.parties);
    for (int n = 0; n < scn.parties; ++n) idx[n] = strategy.outcome(scn, n, tuple[n]);
    b.tables[ti].at(idx) = T(1);
  }
  return b;
}

/// Mixes the model's product responses into the behavior it simulates.
template <class T>
Behavior<T> evaluate_model(const LhvModel<T>& m, const Scenario& scn) {
  if (static_cast<int>(m.responses.size()) != scn.parties)
    throw InputError("evaluate_model: responses do not cover all parties");
  const std::size_t omega = m.weights.size();
  for (int n = 0; n < scn.parties; ++n) {
    if (static_cast<int>(m.responses[n].size()) != scn.settings[n])
      throw InputError("evaluate_model: responses do not cover all settings");
    for (int s = 0; s < scn.settings[n]; ++s) {
      if (m.responses[n][s].size() != omega)
        throw InputError("evaluate_model: responses do not cover omega");
      for (const auto& dist : m.responses[n][s])
        if (static_cast<int>(dist.size()) != scn.outcomes[n][s])
          throw InputError("evaluate_model: response distribution has wrong length");
    }
  }
  Behavior<T> b(scn);
  const long tuples = scn.setting_tuple_count();
  for (long ti = 0; ti < tuples; ++ti) {
    const auto tuple = scn.setting_tuple(ti);
    Tensor<T>& table = b.tables[ti];
    for (std::size_t f = 0; f < table.data.size(); ++f) {
      const auto idx = table.multi_index(f);
      T total(0);
      for (std::size_t w = 0; w < omega; ++w) {
        T term = m.weights[w];
        for (int n = 0; n < scn.parties; ++n) term *= m.responses[n][tuple[n]][w][idx[n]];
        total += term;
      }
      table.data[f] = total;
    }
  }
  return b;
}

/// Bell-inequality coefficients in (setting tuple, outcome tuple) coordinates:
/// sum of coefficient * P(outcome|setting) <= bound on every LHV behavior,
/// while the tested behavior attains bound + margin.
template <class T>
struct BellCertificate {
  Scenario scenario;
  std::vector<std::vector<T>> coefficients;  // [setting tuple index][flat outcome]
  T bound{};
  T value{};
  T margin{};
  bool marginal = false;

  T evaluate(const Behavior<T>& b) const {
    T total(0);
    for (std::size_t ti = 0; ti < coefficients.size(); ++ti)
      for (std::size_t f = 0; f < coefficients[ti].size(); ++f)
        total += coefficients[ti][f] * b.tables[ti].data[f];
    return total;
  }
};

/// Coefficients of the full correlators when the certificate's scenario is
/// dichotomic: one value per setting tuple, obtained from the sign transform.
template <class T>
std::vector<T> full_correlator_coefficients(const BellCertificate<T>& cert) {
  if (!cert.scenario.dichotomic())
    throw InputError("full correlator form requires a dichotomic scenario");
  const int n_parties = cert.scenario.parties;
  const T scale = T(1) / T(1 << n_parties);
  std::vector<T> out;
  out.reserve(cert.coefficients.size());
  for (const auto& per_outcome : cert.coefficients) {
    T acc(0);
    for (std::size_t f = 0; f < per_outcome.size(); ++f) {
      int sign = 1;
      for (int n = 0; n < n_parties; ++n)
        if (f & (std::size_t(1) << (n_parties - 1 - n))) sign = -sign;
      acc += T(sign) * per_outcome[f];
    }
    out.push_back(scale * acc);
  }
  return out;
}

template <class T>
struct LhvResult {
  bool feasible = false;
  std::optional<LhvModel<T>> model;
  std::optional<BellCertificate<T>> certificate;
  bool marginal = false;
};

namespace detail {

/// Rows of both feasibility LPs: one equality per (setting tuple, outcome
/// tuple) plus normalization last. Row index of (ti, flat outcome).
inline std::vector<long> tuple_row_offsets(const Scenario& scn, long& row_count) {
  const long tuples = scn.setting_tuple_count();
  std::vector<long> offsets(tuples);
  long next = 0;
  for (long ti = 0; ti < tuples; ++ti) {
    offsets[ti] = next;
    next += static_cast<long>(Tensor<double>::flat_size(scn.outcome_dims(scn.setting_tuple(ti))));
  }
  row_count = next + 1;
  return offsets;
}

}  // namespace detail

/// LHV existence via the strategy-weight LP over the local polytope vertices.
template <class T>
LhvResult<T> lhv_feasibility(const Behavior<T>& b, long cap = kDefaultEnumerationCap) {
  const Scenario& scn = b.scenario;
  const auto strategies = enumerate_deterministic_strategies(scn, cap);
  const long num_strategies = static_cast<long>(strategies.size());
  long rows = 0;
  const auto offsets = detail::tuple_row_offsets(scn, rows);
  const long tuples = scn.setting_tuple_count();

  LinearFeasibilityProblem<T> lp(static_cast<int>(num_strategies));
  std::vector<std::vector<T>> matrix(rows, std::vector<T>(num_strategies, T(0)));
  for (long v = 0; v < num_strategies; ++v) {
    for (long ti = 0; ti < tuples; ++ti) {
      const auto tuple = scn.setting_tuple(ti);
      const Tensor<T>& table = b.tables[ti];
      std::vector<int> idx(scn.parties);
      for (int n = 0; n < scn.parties; ++n) idx[n] = strategies[v].outcome(scn, n, tuple[n]);
      matrix[offsets[ti] + static_cast<long>(table.flat_index(idx))][v] = T(1);
    }
    matrix[rows - 1][v] = T(1);
  }
  for (long ti = 0; ti < tuples; ++ti) {
    const Tensor<T>& table = b.tables[ti];
    for (std::size_t f = 0; f < table.data.size(); ++f)
      lp.add_constraint(std::move(matrix[offsets[ti] + static_cast<long>(f)]), table.data[f]);
  }
  lp.add_constraint(std::move(matrix[rows - 1]), T(1));

  const auto lp_result = solve_feasibility(lp);
  LhvResult<T> result;
  result.marginal = lp_result.marginal;
  if (lp_result.feasible()) {
    result.feasible = true;
    LhvModel<T> model;
    model.weights = lp_result.solution;
    model.omega.reserve(num_strategies);
    for (long v = 0; v < num_strategies; ++v) model.omega.push_back("w" + std::to_string(v));
    model.responses.resize(scn.parties);
    for (int n = 0; n < scn.parties; ++n) {
      model.responses[n].resize(scn.settings[n]);
      for (int s = 0; s < scn.settings[n]; ++s) {
        model.responses[n][s].assign(num_strategies,
                                     std::vector<T>(scn.outcomes[n][s], T(0)));
        for (long v = 0; v < num_strategies; ++v)
          model.responses[n][s][v][strategies[v].outcome(scn, n, s)] = T(1);
      }
    }
    result.model = std::move(model);
    return result;
  }

  BellCertificate<T> cert;
  cert.scenario = scn;
  cert.coefficients.resize(tuples);
  for (long ti = 0; ti < tuples; ++ti) {
    const std::size_t entries = b.tables[ti].data.size();
    cert.coefficients[ti].assign(entries, T(0));
    for (std::size_t f = 0; f < entries; ++f)
      cert.coefficients[ti][f] = lp_result.certificate[offsets[ti] + static_cast<long>(f)];
  }
  cert.bound = -lp_result.certificate[rows - 1];
  cert.value = cert.evaluate(b);
  cert.margin = lp_result.margin;
  cert.marginal = lp_result.marginal;
  result.certificate = std::move(cert);
  return result;
}

template <class T>
struct JointMeasureResult {
  bool feasible = false;
  std::optional<JointMeasure<T>> measure;
  bool marginal = false;
};

/// Independent route of the same existence question: a joint distribution
/// over all (party, setting) outcomes returning every table as a marginal.
template <class T>
JointMeasureResult<T> joint_measure_feasibility(const Behavior<T>& b,
                                                long cap = kDefaultEnumerationCap) {
  const Scenario& scn = b.scenario;
  const auto grid_dims = pair_outcome_dims(scn);
  long grid_size = 1;
  for (int k : grid_dims) {
    if (grid_size > cap / k)
      throw ResourceError("joint measure grid above cap: more than " + std::to_string(cap));
    grid_size *= k;
  }
  long rows = 0;
  const auto offsets = detail::tuple_row_offsets(scn, rows);
  const long tuples = scn.setting_tuple_count();

  LinearFeasibilityProblem<T> lp(static_cast<int>(grid_size));
  std::vector<std::vector<T>> matrix(rows, std::vector<T>(grid_size, T(0)));
  Tensor<T> grid(grid_dims);
  for (long g = 0; g < grid_size; ++g) {
    const auto digits = grid.multi_index(static_cast<std::size_t>(g));
    for (long ti = 0; ti < tuples; ++ti) {
      const auto tuple = scn.setting_tuple(ti);
      const Tensor<T>& table = b.tables[ti];
      std::vector<int> idx(scn.parties);
      for (int n = 0; n < scn.parties; ++n) idx[n] = digits[pair_axis(scn, n, tuple[n])];
      matrix[offsets[ti] + static_cast<long>(table.flat_index(idx))][g] = T(1);
    }
    matrix[rows - 1][g] = T(1);
  }
  for (long ti = 0; ti < tuples; ++ti) {
    const Tensor<T>& table = b.tables[ti];
    for (std::size_t f = 0; f < table.data.size(); ++f)
      lp.add_constraint(std::move(matrix[offsets[ti] + static_cast<long>(f)]), table.data[f]);
  }
  lp.add_constraint(std::move(matrix[rows - 1]), T(1));

  const auto lp_result = solve_feasibility(lp);
  JointMeasureResult<T> result;
  result.marginal = lp_result.marginal;
  if (!lp_result.feasible()) return result;
  result.feasible = true;
  JointMeasure<T> mu{scn, grid};
  mu.tensor.data = lp_result.solution;
  result.measure = std::move(mu);
  return result;
}

/// Deterministic model read off a joint measure: omega ranges over the
/// measure's support and every response is an indicator of the corresponding
/// outcome component.
template <class T>
LhvModel<T> model_from_joint_measure(const JointMeasure<T>& mu) {
  const Scenario& scn = mu.scenario;
  LhvModel<T> model;
  std::vector<std::vector<int>> atoms;
  for (std::size_t f = 0; f < mu.tensor.data.size(); ++f) {
    if (mu.tensor.data[f] == T(0)) continue;
    atoms.push_back(mu.tensor.multi_index(f));
    model.weights.push_back(mu.tensor.data[f]);
    std::string label;
    for (std::size_t i = 0; i < atoms.back().size(); ++i)
      label += (i ? "," : "") + std::to_string(atoms.back()[i]);
    model.omega.push_back(label);
  }
  model.responses.resize(scn.parties);
  for (int n = 0; n < scn.parties; ++n) {
    model.responses[n].resize(scn.settings[n]);
    for (int s = 0; s < scn.settings[n]; ++s) {
      model.responses[n][s].assign(atoms.size(), std::vector<T>(scn.outcomes[n][s], T(0)));
      for (std::size_t w = 0; w < atoms.size(); ++w)
        model.responses[n][s][w][atoms[w][pair_axis(scn, n, s)]] = T(1);
    }
  }
  return model;
}

/// Explicit model for a nonsignaling behavior in which only one party has
/// several settings: omega is the fixed parties' outcome tuple, weighted by
/// their common marginal, and the free party answers with the conditional
/// distribution given omega (uniform on null atoms).
template <class T>
LhvModel<T> single_multisetting_model(const Behavior<T>& b, int free_party,
                                      const T& eps = ArithTraits<T>::default_epsilon()) {
  const Scenario& scn = b.scenario;
  if (free_party < 0 || free_party >= scn.parties)
    throw InputError("single_multisetting_model: bad party index");
  for (int n = 0; n < scn.parties; ++n)
    if (n != free_party && scn.settings[n] != 1)
      throw InputError("single_multisetting_model: fixed parties must have one setting");
  const auto ns = check_nonsignaling(b, eps);
  if (!ns.pass)
    throw InputError("single_multisetting_model: input violates nonsignaling beyond tolerance");

  std::vector<int> fixed_sites;
  for (int n = 0; n < scn.parties; ++n)
    if (n != free_party) fixed_sites.push_back(n);

  // Common marginal of the fixed parties, read from the first setting.
  std::vector<int> base_tuple(scn.parties, 0);
  const Tensor<T> tau = b.table(base_tuple).marginalize(fixed_sites);

  LhvModel<T> model;
  const std::size_t omega_size = tau.data.size();
  model.weights = tau.data;
  for (std::size_t w = 0; w < omega_size; ++w) {
    const auto atom = tau.multi_index(w);
    std::string label;
    for (std::size_t i = 0; i < atom.size(); ++i)
      label += (i ? "," : "") + std::to_string(atom[i]);
    model.omega.push_back(label);
  }

  model.responses.resize(scn.parties);
  for (int n = 0; n < scn.parties; ++n) model.responses[n].resize(scn.settings[n]);
  for (std::size_t i = 0; i < fixed_sites.size(); ++i) {
    const int n = fixed_sites[i];
    model.responses[n][0].assign(omega_size, std::vector<T>(scn.outcomes[n][0], T(0)));
    for (std::size_t w = 0; w < omega_size; ++w)
      model.responses[n][0][w][tau.multi_index(w)[i]] = T(1);
  }
  for (int s = 0; s < scn.settings[free_party]; ++s) {
    std::vector<int> tuple(scn.parties, 0);
    tuple[free_party] = s;
    const Tensor<T>& table = b.table(tuple);
    const int k_free = scn.outcomes[free_party][s];
    model.responses[free_party][s].assign(omega_size, std::vector<T>(k_free, T(0)));
    for (std::size_t w = 0; w < omega_size; ++w) {
      const auto atom = tau.multi_index(w);
      std::vector<int> idx(scn.parties);
      for (std::size_t i = 0; i < fixed_sites.size(); ++i) idx[fixed_sites[i]] = atom[i];
      auto& dist = model.responses[free_party][s][w];
      if (tau.data[w] <= T(0)) {
        for (int k = 0; k < k_free; ++k) dist[k] = T(1) / T(k_free);
        continue;
      }
      for (int k = 0; k < k_free; ++k) {
        idx[free_party] = k;
        dist[k] = table.at(idx) / tau.data[w];
      }
    }
  }
  return model;
}

/// Marginal of a bipartite joint measure keeping one setting axis of the
/// indexed party together with every axis of the other party.
template <class T>
struct DirectionalMeasure {
  int indexed_party = 0;
  int setting = 0;
  Tensor<T> tensor;  // kept axes in setting_pairs order
};

template <class T>
std::vector<DirectionalMeasure<T>> extract_directional_measures(const JointMeasure<T>& mu,
                                                                int indexed_party) {
  const Scenario& scn = mu.scenario;
  if (scn.parties != 2)
    throw InputError("directional measures are defined for bipartite scenarios");
  if (indexed_party < 0 || indexed_party > 1)
    throw InputError("directional measures: bad party index");
  const int other = 1 - indexed_party;
  std::vector<DirectionalMeasure<T>> out;
  for (int s = 0; s < scn.settings[indexed_party]; ++s) {
    std::vector<int> keep;
    for (int n = 0; n < 2; ++n)
      for (int t = 0; t < scn.settings[n]; ++t)
        if (n == other || t == s) keep.push_back(pair_axis(scn, n, t));
    out.push_back({indexed_party, s, mu.tensor.marginalize(keep)});
  }
  return out;
}

/// Rebuilds a joint measure from compatible directional measures via the
/// discrete conditional-product construction; the common marginal is taken
/// from the first measure after verifying agreement within eps.
template <class T>
JointMeasure<T> assemble_from_directional_measures(
    const std::vector<DirectionalMeasure<T>>& measures, const Scenario& scn,
    const T& eps = ArithTraits<T>::default_epsilon()) {
  if (scn.parties != 2) throw InputError("assemble: bipartite scenarios only");
  if (measures.empty()) throw InputError("assemble: no measures given");
  const int indexed_party = measures.front().indexed_party;
  const int other = 1 - indexed_party;
  if (static_cast<int>(measures.size()) != scn.settings[indexed_party])
    throw InputError("assemble: one measure per setting of the indexed party required");
  for (int s = 0; s < static_cast<int>(measures.size()); ++s)
    if (measures[s].setting != s || measures[s].indexed_party != indexed_party)
      throw InputError("assemble: measures must be ordered by setting");

  // Within each directional tensor the indexed party's axis sits at its
  // setting_pairs position: first when party 1 is indexed, last otherwise.
  const int other_axes = scn.settings[other];
  const int indexed_axis_pos = indexed_party == 0 ? 0 : other_axes;
  std::vector<int> other_axis_ids(other_axes);
  for (int t = 0; t < other_axes; ++t)
    other_axis_ids[t] = indexed_party == 0 ? 1 + t : t;

  Tensor<T> tau = measures.front().tensor.marginalize(other_axis_ids);
  for (std::size_t s = 1; s < measures.size(); ++s) {
    const Tensor<T> m = measures[s].tensor.marginalize(other_axis_ids);
    if (Tensor<T>::max_abs_diff(tau, m) > eps)
      throw InputError("assemble: directional measures are not compatible");
  }

  const auto grid_dims = pair_outcome_dims(scn);
  JointMeasure<T> result{scn, Tensor<T>(grid_dims)};
  std::vector<int> g(grid_dims.size(), 0);
  do {
    std::vector<int> other_idx(other_axes);
    for (int t = 0; t < other_axes; ++t) other_idx[t] = g[pair_axis(scn, other, t)];
    const T tau_value = tau.at(other_idx);
    T value = tau_value;
    if (tau_value <= T(0)) {
      value = T(0);
    } else {
      for (int s = 0; s < scn.settings[indexed_party]; ++s) {
        std::vector<int> midx(1 + other_axes);
        midx[indexed_axis_pos] = g[pair_axis(scn, indexed_party, s)];
        for (int t = 0; t < other_axes; ++t)
          midx[indexed_party == 0 ? 1 + t : t] = other_idx[t];
        value *= measures[s].tensor.at(midx) / tau_value;
      }
    }
    result.tensor.at(g) = value;
  } while (next_tuple(g, grid_dims));
  return result;
}

/// Bipartite marginal P((s1,s2)) of a joint measure, for comparisons against
/// behaviors.
template <class T>
Behavior<T> joint_measure_behavior(const JointMeasure<T>& mu) {
  const Scenario& scn = mu.scenario;
  Behavior<T> b(scn);
  const long tuples = scn.setting_tuple_count();
  for (long ti = 0; ti < tuples; ++ti) {
    const auto tuple = scn.setting_tuple(ti);
    std::vector<int> keep(scn.parties);
    for (int n = 0; n < scn.parties; ++n) keep[n] = pair_axis(scn, n, tuple[n]);
    b.tables[ti] = mu.tensor.marginalize(keep);
  }
  return b;
}

enum class CorrelationVerdict { Feasible, Infeasible, InvalidCorrelations };

template <class T>
struct CorrelationLhvResult {
  CorrelationVerdict verdict = CorrelationVerdict::InvalidCorrelations;
  Behavior<T> reconstructed;
  ValidationReport<T> reconstruction_report;
  std::optional<LhvModel<T>> model;
  std::optional<BellCertificate<T>> certificate;
};

/// LHV check from a complete dichotomic correlation set. The full correlators
/// alone cannot decide the question; completeness (all lower-order means) is a
/// structural precondition of the input type. Invalid reconstructions are
/// reported rather than judged.
template <class T>
CorrelationLhvResult<T> lhv_check_from_correlations(
    const CorrelationSet<T>& corr, long cap = kDefaultEnumerationCap,
    const T& eps = ArithTraits<T>::default_epsilon()) {
  CorrelationLhvResult<T> result;
  auto [behavior, report] = correlations_to_behavior(corr, eps);
  result.reconstructed = std::move(behavior);
  result.reconstruction_report = std::move(report);
  if (!result.reconstruction_report.valid()) {
    result.verdict = CorrelationVerdict::InvalidCorrelations;
    return result;
  }
  auto lhv = lhv_feasibility(result.reconstructed, cap);
  if (lhv.feasible) {
    result.verdict = CorrelationVerdict::Feasible;
    result.model = std::move(lhv.model);
  } else {
    result.verdict = CorrelationVerdict::Infeasible;
    result.certificate = std::move(lhv.certificate);
  }
  return result;
}

}  // namespace corrlab
