#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "corrlab/rational.hpp"
#include "corrlab/tensor.hpp"

namespace corrlab {

/// Index skeleton of a correlation experiment: N parties, S_n settings per
/// party, K_{n,s} outcomes per (party, setting). Settings and outcomes are
/// 0-based internally; external formats use 1-based settings.
struct Scenario {
  int parties = 0;
  std::vector<int> settings;                // settings[n] = S_n
  std::vector<std::vector<int>> outcomes;   // outcomes[n][s] = K_{n,s}

  Scenario() = default;
  Scenario(std::vector<int> s, std::vector<std::vector<int>> k)
      : parties(static_cast<int>(s.size())), settings(std::move(s)), outcomes(std::move(k)) {
    check();
  }

  /// Same outcome count for every (party, setting).
  static Scenario uniform(int parties, int settings_per_party, int outcomes_per_setting) {
    Scenario scn;
    scn.parties = parties;
    scn.settings.assign(parties, settings_per_party);
    scn.outcomes.assign(parties, std::vector<int>(settings_per_party, outcomes_per_setting));
    scn.check();
    return scn;
  }

  void check() const {
    if (parties < 1) throw InputError("scenario needs at least one party");
    if (static_cast<int>(settings.size()) != parties || static_cast<int>(outcomes.size()) != parties)
      throw InputError("scenario: per-party lists have wrong length");
    for (int n = 0; n < parties; ++n) {
      if (settings[n] < 1) throw InputError("scenario: party needs at least one setting");
      if (static_cast<int>(outcomes[n].size()) != settings[n])
        throw InputError("scenario: outcome list does not match setting count");
      for (int k : outcomes[n])
        if (k < 1) throw InputError("scenario: setting needs at least one outcome");
    }
  }

  long setting_tuple_count() const {
    long c = 1;
    for (int s : settings) c *= s;
    return c;
  }

  /// Setting tuples are enumerated with party 1's setting most significant.
  std::vector<int> setting_tuple(long index) const {
    std::vector<int> t(parties);
    for (int n = parties - 1; n >= 0; --n) {
      t[n] = static_cast<int>(index % settings[n]);
      index /= settings[n];
    }
    return t;
  }

  long setting_index(const std::vector<int>& tuple) const {
    if (static_cast<int>(tuple.size()) != parties) throw InputError("setting tuple has wrong length");
    long idx = 0;
    for (int n = 0; n < parties; ++n) {
      if (tuple[n] < 0 || tuple[n] >= settings[n]) throw InputError("setting index out of range");
      idx = idx * settings[n] + tuple[n];
    }
    return idx;
  }

  std::vector<int> outcome_dims(const std::vector<int>& tuple) const {
    std::vector<int> d(parties);
    for (int n = 0; n < parties; ++n) d[n] = outcomes[n][tuple[n]];
    return d;
  }

  bool dichotomic() const {
    for (const auto& per_party : outcomes)
      for (int k : per_party)
        if (k != 2) return false;
    return true;
  }

  bool operator==(const Scenario& o) const {
    return parties == o.parties && settings == o.settings && outcomes == o.outcomes;
  }
};

/// Sign encoding fixed for dichotomic scenarios: outcome 0 is +1, outcome 1 is -1.
inline int dichotomic_sign(int outcome) { return outcome == 0 ? 1 : -1; }

/// Family of joint outcome distributions, one probability tensor per setting
/// tuple (tuple order as in Scenario::setting_tuple).
template <class T>
struct Behavior {
  Scenario scenario;
  std::vector<Tensor<T>> tables;

  Behavior() = default;
  explicit Behavior(Scenario scn) : scenario(std::move(scn)) {
    const long tuples = scenario.setting_tuple_count();
    tables.reserve(tuples);
    for (long i = 0; i < tuples; ++i)
      tables.emplace_back(scenario.outcome_dims(scenario.setting_tuple(i)));
  }

  Tensor<T>& table(const std::vector<int>& tuple) { return tables[scenario.setting_index(tuple)]; }
  const Tensor<T>& table(const std::vector<int>& tuple) const {
    return tables[scenario.setting_index(tuple)];
  }
};

template <class T>
struct ValidationIssue {
  std::string kind;  // "negative-entry", "normalization", "shape"
  std::vector<int> setting_tuple;
  std::vector<int> outcome_tuple;  // empty unless entry-level
  T magnitude{};
};

template <class T>
struct ValidationReport {
  std::vector<ValidationIssue<T>> issues;
  bool valid() const { return issues.empty(); }
};

/// Reports every violated Behavior invariant; an empty report means valid.
template <class T>
ValidationReport<T> validate_behavior(const Behavior<T>& b,
                                      const T& eps = ArithTraits<T>::default_epsilon()) {
  ValidationReport<T> report;
  const long tuples = b.scenario.setting_tuple_count();
  if (static_cast<long>(b.tables.size()) != tuples) {
    report.issues.push_back({"shape", {}, {}, T(0)});
    return report;
  }
  for (long i = 0; i < tuples; ++i) {
    const auto tuple = b.scenario.setting_tuple(i);
    const auto dims = b.scenario.outcome_dims(tuple);
    const Tensor<T>& table = b.tables[i];
    if (table.dims != dims || table.data.size() != Tensor<T>::flat_size(dims)) {
      report.issues.push_back({"shape", tuple, {}, T(0)});
      continue;
    }
    for (std::size_t f = 0; f < table.data.size(); ++f) {
      if (table.data[f] < -eps)
        report.issues.push_back({"negative-entry", tuple, table.multi_index(f), table.data[f]});
    }
    const T total = table.sum();
    if (!approx_equal(total, T(1), eps))
      report.issues.push_back({"normalization", tuple, {}, total});
  }
  return report;
}

/// Marginal distribution of the kept sites' outcomes under one setting tuple.
template <class T>
Tensor<T> marginal(const Behavior<T>& b, const std::vector<int>& setting_tuple,
                   const std::vector<int>& kept_sites) {
  if (kept_sites.empty()) throw InputError("marginal: kept site set is empty");
  for (std::size_t i = 0; i < kept_sites.size(); ++i) {
    if (kept_sites[i] < 0 || kept_sites[i] >= b.scenario.parties)
      throw InputError("marginal: site index out of range");
    if (i > 0 && kept_sites[i] <= kept_sites[i - 1])
      throw InputError("marginal: kept sites must be strictly increasing");
  }
  return b.table(setting_tuple).marginalize(kept_sites);
}

/// Expectation of a product of per-site functions, each given by its value on
/// every outcome of that site under the chosen setting.
template <class T>
T product_expectation(const Behavior<T>& b, const std::vector<int>& setting_tuple,
                      const std::vector<std::vector<T>>& site_functions) {
  const Tensor<T>& table = b.table(setting_tuple);
  if (static_cast<int>(site_functions.size()) != b.scenario.parties)
    throw InputError("product_expectation: one function per site required");
  for (int n = 0; n < b.scenario.parties; ++n)
    if (static_cast<int>(site_functions[n].size()) != table.dims[n])
      throw InputError("product_expectation: function not defined on all outcomes");
  T total(0);
  std::vector<int> idx(table.dims.size(), 0);
  for (std::size_t f = 0; f < table.data.size(); ++f) {
    T value = table.data[f];
    std::size_t rem = f;
    for (int n = b.scenario.parties - 1; n >= 0; --n) {
      idx[n] = static_cast<int>(rem % table.dims[n]);
      rem /= table.dims[n];
    }
    for (int n = 0; n < b.scenario.parties; ++n) value *= site_functions[n][idx[n]];
    total += value;
  }
  return total;
}

/// Complete family of correlation functions of a dichotomic behavior: one mean
/// per nonempty site subset and per setting assignment on that subset.
template <class T>
struct CorrelationSet {
  Scenario scenario;  // every K_{n,s} = 2
  // means[mask] for mask in 1..2^N-1 (bit n set = party n kept); entries are
  // lexicographic over the kept parties' settings, lowest party slowest.
  std::vector<std::vector<T>> means;

  explicit CorrelationSet(Scenario scn) : scenario(std::move(scn)) {
    if (!scenario.dichotomic())
      throw InputError("correlation set requires two outcomes per (party, setting)");
    means.resize(std::size_t(1) << scenario.parties);
    for (std::size_t mask = 1; mask < means.size(); ++mask)
      means[mask].assign(Tensor<T>::flat_size(mask_setting_dims(static_cast<int>(mask))), T(0));
  }

  std::vector<int> mask_sites(int mask) const {
    std::vector<int> sites;
    for (int n = 0; n < scenario.parties; ++n)
      if (mask & (1 << n)) sites.push_back(n);
    return sites;
  }

  std::vector<int> mask_setting_dims(int mask) const {
    std::vector<int> dims;
    for (int n = 0; n < scenario.parties; ++n)
      if (mask & (1 << n)) dims.push_back(scenario.settings[n]);
    return dims;
  }

  T& mean(int mask, const std::vector<int>& subset_settings) {
    return means[mask][setting_offset(mask, subset_settings)];
  }
  const T& mean(int mask, const std::vector<int>& subset_settings) const {
    return means[mask][setting_offset(mask, subset_settings)];
  }

  std::size_t setting_offset(int mask, const std::vector<int>& subset_settings) const {
    const auto dims = mask_setting_dims(mask);
    if (subset_settings.size() != dims.size())
      throw InputError("correlation set: setting assignment has wrong length");
    std::size_t off = 0;
    for (std::size_t i = 0; i < dims.size(); ++i) {
      if (subset_settings[i] < 0 || subset_settings[i] >= dims[i])
        throw InputError("correlation set: setting index out of range");
      off = off * dims[i] + subset_settings[i];
    }
    return off;
  }
};

/// Sub-behavior induced by keeping, for each party, a subset of its settings
/// (0-based ids, strictly increasing). The same LHV model serves any such
/// restriction, which the feasibility tests exercise.
template <class T>
Behavior<T> sub_behavior(const Behavior<T>& b, const std::vector<std::vector<int>>& kept_settings) {
  if (static_cast<int>(kept_settings.size()) != b.scenario.parties)
    throw InputError("sub_behavior: one setting list per party required");
  std::vector<int> settings(b.scenario.parties);
  std::vector<std::vector<int>> outcomes(b.scenario.parties);
  for (int n = 0; n < b.scenario.parties; ++n) {
    if (kept_settings[n].empty()) throw InputError("sub_behavior: party left without settings");
    for (std::size_t i = 0; i < kept_settings[n].size(); ++i) {
      const int s = kept_settings[n][i];
      if (s < 0 || s >= b.scenario.settings[n]) throw InputError("sub_behavior: bad setting id");
      if (i > 0 && s <= kept_settings[n][i - 1])
        throw InputError("sub_behavior: setting ids must be strictly increasing");
      outcomes[n].push_back(b.scenario.outcomes[n][s]);
    }
    settings[n] = static_cast<int>(kept_settings[n].size());
  }
  Behavior<T> out(Scenario(settings, outcomes));
  const long tuples = out.scenario.setting_tuple_count();
  for (long ti = 0; ti < tuples; ++ti) {
    const auto tuple = out.scenario.setting_tuple(ti);
    std::vector<int> source(b.scenario.parties);
    for (int n = 0; n < b.scenario.parties; ++n) source[n] = kept_settings[n][tuple[n]];
    out.tables[ti] = b.table(source);
  }
  return out;
}

/// Behavior of a site subset, with dropped sites summed out. Dropped parties
/// are pinned to their first setting; for nonsignaling behaviors the choice
/// does not matter.
template <class T>
Behavior<T> site_marginal_behavior(const Behavior<T>& b, const std::vector<int>& kept_sites) {
  if (kept_sites.empty()) throw InputError("site_marginal_behavior: empty site set");
  std::vector<int> settings;
  std::vector<std::vector<int>> outcomes;
  for (std::size_t i = 0; i < kept_sites.size(); ++i) {
    const int n = kept_sites[i];
    if (n < 0 || n >= b.scenario.parties)
      throw InputError("site_marginal_behavior: site index out of range");
    if (i > 0 && n <= kept_sites[i - 1])
      throw InputError("site_marginal_behavior: sites must be strictly increasing");
    settings.push_back(b.scenario.settings[n]);
    outcomes.push_back(b.scenario.outcomes[n]);
  }
  Behavior<T> out(Scenario(settings, outcomes));
  const long tuples = out.scenario.setting_tuple_count();
  for (long ti = 0; ti < tuples; ++ti) {
    const auto tuple = out.scenario.setting_tuple(ti);
    std::vector<int> source(b.scenario.parties, 0);
    for (std::size_t i = 0; i < kept_sites.size(); ++i) source[kept_sites[i]] = tuple[i];
    out.tables[ti] = b.table(source).marginalize(kept_sites);
  }
  return out;
}

/// Correlation functions of a dichotomic behavior. Means for a subset are read
/// from the setting tuple that keeps the subset's settings and uses the first
/// setting everywhere else; for nonsignaling behaviors the choice is
/// immaterial.
template <class T>
CorrelationSet<T> behavior_to_correlations(const Behavior<T>& b) {
  if (!b.scenario.dichotomic())
    throw InputError("behavior_to_correlations: scenario is not dichotomic");
  CorrelationSet<T> corr(b.scenario);
  const int n_parties = b.scenario.parties;
  for (int mask = 1; mask < (1 << n_parties); ++mask) {
    const auto sites = corr.mask_sites(mask);
    const auto dims = corr.mask_setting_dims(mask);
    std::vector<int> assignment(dims.size(), 0);
    do {
      std::vector<int> tuple(n_parties, 0);
      for (std::size_t i = 0; i < sites.size(); ++i) tuple[sites[i]] = assignment[i];
      const Tensor<T>& table = b.table(tuple);
      T mean(0);
      for (std::size_t f = 0; f < table.data.size(); ++f) {
        const auto idx = table.multi_index(f);
        int sign = 1;
        for (int site : sites) sign *= dichotomic_sign(idx[site]);
        mean += T(sign) * table.data[f];
      }
      corr.mean(mask, assignment) = mean;
    } while (next_tuple(assignment, dims));
  }
  return corr;
}

/// Inverse transform: reconstructs the joint probabilities from a complete
/// correlation set via P = 2^-N [1 + sum over subsets of sign-product * mean].
/// The reconstruction may have negative entries when the input is not a valid
/// correlation set; those are reported, not clipped.
template <class T>
std::pair<Behavior<T>, ValidationReport<T>> correlations_to_behavior(
    const CorrelationSet<T>& corr, const T& eps = ArithTraits<T>::default_epsilon()) {
  const int n_parties = corr.scenario.parties;
  Behavior<T> b(corr.scenario);
  const T scale = T(1) / T(1 << n_parties);
  const long tuples = corr.scenario.setting_tuple_count();
  for (long ti = 0; ti < tuples; ++ti) {
    const auto tuple = corr.scenario.setting_tuple(ti);
    Tensor<T>& table = b.tables[ti];
    for (std::size_t f = 0; f < table.data.size(); ++f) {
      const auto idx = table.multi_index(f);
      T acc(1);
      for (int mask = 1; mask < (1 << n_parties); ++mask) {
        const auto sites = corr.mask_sites(mask);
        std::vector<int> assignment(sites.size());
        int sign = 1;
        for (std::size_t i = 0; i < sites.size(); ++i) {
          assignment[i] = tuple[sites[i]];
          sign *= dichotomic_sign(idx[sites[i]]);
        }
        acc += T(sign) * corr.mean(mask, assignment);
      }
      table.data[f] = scale * acc;
    }
  }
  return {b, validate_behavior(b, eps)};
}

}  // namespace corrlab
