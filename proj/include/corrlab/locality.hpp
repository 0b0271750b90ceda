#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "corrlab/scenario.hpp"

namespace corrlab {

/// Behaviors gathered from structurally different runs of the same parties;
/// common setting labels must refer to identical outcome spaces.
template <class T>
struct ExperimentCollection {
  std::vector<Behavior<T>> experiments;
  std::vector<std::string> context_labels;
};

struct MarginalWitness {
  std::vector<int> sites;
  std::vector<int> subset_settings;
  std::vector<int> tuple_a;  // full setting tuples whose marginals differ
  std::vector<int> tuple_b;
  int context_a = -1;  // used by the EPR check
  int context_b = -1;
};

template <class T>
struct NonsignalingReport {
  bool pass = true;
  T violation{};  // max-norm over marginal-tensor differences
  MarginalWitness witness;
};

/// Nonsignaling: for every site subset, marginals agree across all setting
/// tuples that coincide on that subset.
template <class T>
NonsignalingReport<T> check_nonsignaling(const Behavior<T>& b,
                                         const T& eps = ArithTraits<T>::default_epsilon()) {
  NonsignalingReport<T> report;
  const int n_parties = b.scenario.parties;
  const long tuples = b.scenario.setting_tuple_count();
  for (int mask = 1; mask < (1 << n_parties) - 1; ++mask) {
    std::vector<int> sites;
    for (int n = 0; n < n_parties; ++n)
      if (mask & (1 << n)) sites.push_back(n);
    // Group tuples by their restriction to the subset; compare each group
    // member's marginal against the group's first.
    std::vector<long> group_head(tuples, -1);
    std::vector<Tensor<T>> head_marginal(tuples);
    for (long ti = 0; ti < tuples; ++ti) {
      const auto tuple = b.scenario.setting_tuple(ti);
      long key = 0;
      for (int site : sites) key = key * b.scenario.settings[site] + tuple[site];
      if (group_head[key] < 0) {
        group_head[key] = ti;
        head_marginal[key] = b.tables[ti].marginalize(sites);
        continue;
      }
      const Tensor<T> m = b.tables[ti].marginalize(sites);
      const T diff = Tensor<T>::max_abs_diff(head_marginal[key], m);
      if (diff > report.violation) {
        report.violation = diff;
        report.witness.sites = sites;
        std::vector<int> subset_settings;
        for (int site : sites) subset_settings.push_back(tuple[site]);
        report.witness.subset_settings = subset_settings;
        report.witness.tuple_a = b.scenario.setting_tuple(group_head[key]);
        report.witness.tuple_b = tuple;
      }
    }
  }
  report.pass = report.violation <= eps;
  return report;
}

template <class T>
struct EprReport {
  bool pass = true;
  bool nonsignaling_pass = true;
  T violation{};  // worst discrepancy, within or across contexts
  MarginalWitness witness;
};

/// EPR locality of a collection: each experiment is nonsignaling and marginals
/// onto common-setting site subsets agree across experiment contexts.
template <class T>
EprReport<T> check_epr_local(const ExperimentCollection<T>& c,
                             const T& eps = ArithTraits<T>::default_epsilon()) {
  if (c.experiments.empty()) throw InputError("epr check: empty collection");
  const int n_parties = c.experiments.front().scenario.parties;
  for (const auto& e : c.experiments)
    if (e.scenario.parties != n_parties)
      throw InputError("epr check: experiments disagree on party count");
  for (std::size_t a = 0; a < c.experiments.size(); ++a) {
    for (std::size_t b = a + 1; b < c.experiments.size(); ++b) {
      const Scenario& sa = c.experiments[a].scenario;
      const Scenario& sb = c.experiments[b].scenario;
      for (int n = 0; n < n_parties; ++n) {
        const int common = std::min(sa.settings[n], sb.settings[n]);
        for (int s = 0; s < common; ++s)
          if (sa.outcomes[n][s] != sb.outcomes[n][s])
            throw InputError("epr check: shared setting label with mismatched outcome space");
      }
    }
  }

  EprReport<T> report;
  for (std::size_t e = 0; e < c.experiments.size(); ++e) {
    const auto ns = check_nonsignaling(c.experiments[e], eps);
    if (ns.violation > report.violation) {
      report.violation = ns.violation;
      report.witness = ns.witness;
      report.witness.context_a = static_cast<int>(e);
      report.witness.context_b = static_cast<int>(e);
    }
    if (!ns.pass) report.nonsignaling_pass = false;
  }

  // Cross-context: marginals onto any common-setting subset must not depend on
  // the experiment, so the canonical representative per (subset, settings)
  // must coincide across contexts.
  for (std::size_t ea = 0; ea < c.experiments.size(); ++ea) {
    for (std::size_t eb = ea + 1; eb < c.experiments.size(); ++eb) {
      const Behavior<T>& ba = c.experiments[ea];
      const Behavior<T>& bb = c.experiments[eb];
      for (int mask = 1; mask < (1 << n_parties); ++mask) {
        std::vector<int> sites;
        for (int n = 0; n < n_parties; ++n)
          if (mask & (1 << n)) sites.push_back(n);
        std::vector<int> common(sites.size());
        for (std::size_t i = 0; i < sites.size(); ++i)
          common[i] =
              std::min(ba.scenario.settings[sites[i]], bb.scenario.settings[sites[i]]);
        std::vector<int> assignment(sites.size(), 0);
        do {
          std::vector<int> ta(n_parties, 0), tb(n_parties, 0);
          for (std::size_t i = 0; i < sites.size(); ++i) {
            ta[sites[i]] = assignment[i];
            tb[sites[i]] = assignment[i];
          }
          const Tensor<T> ma = ba.table(ta).marginalize(sites);
          const Tensor<T> mb = bb.table(tb).marginalize(sites);
          const T diff = Tensor<T>::max_abs_diff(ma, mb);
          if (diff > report.violation) {
            report.violation = diff;
            report.witness = {sites, assignment, ta, tb, static_cast<int>(ea),
                              static_cast<int>(eb)};
          }
        } while (next_tuple(assignment, common));
      }
    }
  }
  report.pass = report.nonsignaling_pass && report.violation <= eps;
  return report;
}

template <class T>
struct IndependenceReport {
  bool pass = true;
  T violation{};
  std::vector<int> outcome_tuple;
};

/// Probabilistic independence at one setting tuple: the joint tensor equals
/// the outer product of its single-site marginals.
template <class T>
IndependenceReport<T> check_independence(const Behavior<T>& b,
                                         const std::vector<int>& setting_tuple,
                                         const T& eps = ArithTraits<T>::default_epsilon()) {
  const Tensor<T>& joint = b.table(setting_tuple);
  Tensor<T> product = joint.marginalize({0});
  for (int n = 1; n < b.scenario.parties; ++n)
    product = Tensor<T>::outer(product, joint.marginalize({n}));
  IndependenceReport<T> report;
  for (std::size_t f = 0; f < joint.data.size(); ++f) {
    T diff = joint.data[f] - product.data[f];
    diff = abs_value(diff);
    if (diff > report.violation) {
      report.violation = diff;
      report.outcome_tuple = joint.multi_index(f);
    }
  }
  report.pass = report.violation <= eps;
  return report;
}

/// Canonical nonsignaling behavior with no LHV model: two parties, two
/// settings and two outcomes each; outcomes are perfectly correlated except
/// under the (2,2) joint setting, where they anticorrelate.
inline Behavior<Rational> make_pr_box() {
  Behavior<Rational> b(Scenario::uniform(2, 2, 2));
  const Rational half(1, 2);
  for (int s1 = 0; s1 < 2; ++s1)
    for (int s2 = 0; s2 < 2; ++s2) {
      Tensor<Rational>& table = b.table({s1, s2});
      const int target = (s1 == 1 && s2 == 1) ? -1 : 1;
      for (int l1 = 0; l1 < 2; ++l1)
        for (int l2 = 0; l2 < 2; ++l2)
          table.at({l1, l2}) =
              dichotomic_sign(l1) * dichotomic_sign(l2) == target ? half : Rational(0);
    }
  return b;
}

/// Hidden-variable mixtures of product responses where the mixing measure may
/// differ per experiment context. Every context is nonsignaling by
/// construction; contexts with different mixing measures need not be EPR
/// local as a collection.
///
/// responses[party][setting][omega] is a distribution over that
/// (party, setting)'s outcomes; taus[context] is a distribution over omega.
template <class T>
ExperimentCollection<T> make_prop1_family(
    const Scenario& scenario,
    const std::vector<std::vector<std::vector<std::vector<T>>>>& responses,
    const std::vector<std::vector<T>>& taus, const std::vector<std::string>& context_labels,
    const T& eps = ArithTraits<T>::default_epsilon()) {
  if (taus.empty() || taus.size() != context_labels.size())
    throw InputError("prop1 family: need one context label per mixing measure");
  if (static_cast<int>(responses.size()) != scenario.parties)
    throw InputError("prop1 family: response table does not cover all parties");
  const std::size_t omega = taus.front().size();
  for (const auto& tau : taus) {
    if (tau.size() != omega) throw InputError("prop1 family: mixing measures disagree on omega");
    T total(0);
    for (const T& w : tau) {
      if (w < -eps) throw InputError("prop1 family: negative mixing weight");
      total += w;
    }
    if (!approx_equal(total, T(1), eps))
      throw InputError("prop1 family: mixing measure does not sum to one");
  }
  for (int n = 0; n < scenario.parties; ++n) {
    if (static_cast<int>(responses[n].size()) != scenario.settings[n])
      throw InputError("prop1 family: response table does not cover all settings");
    for (int s = 0; s < scenario.settings[n]; ++s) {
      if (responses[n][s].size() != omega)
        throw InputError("prop1 family: response table does not cover omega");
      for (const auto& dist : responses[n][s]) {
        if (static_cast<int>(dist.size()) != scenario.outcomes[n][s])
          throw InputError("prop1 family: response distribution has wrong length");
        T total(0);
        for (const T& v : dist) total += v;
        if (!approx_equal(total, T(1), eps))
          throw InputError("prop1 family: response distribution does not sum to one");
      }
    }
  }

  ExperimentCollection<T> collection;
  collection.context_labels = context_labels;
  for (const auto& tau : taus) {
    Behavior<T> b(scenario);
    const long tuples = scenario.setting_tuple_count();
    for (long ti = 0; ti < tuples; ++ti) {
      const auto tuple = scenario.setting_tuple(ti);
      Tensor<T>& table = b.tables[ti];
      for (std::size_t f = 0; f < table.data.size(); ++f) {
        const auto idx = table.multi_index(f);
        T total(0);
        for (std::size_t w = 0; w < omega; ++w) {
          T term = tau[w];
          for (int n = 0; n < scenario.parties; ++n)
            term *= responses[n][tuple[n]][w][idx[n]];
          total += term;
        }
        table.data[f] = total;
      }
    }
    collection.experiments.push_back(std::move(b));
  }
  return collection;
}

}  // namespace corrlab
