#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "bcl/checker.hpp"
#include "bcl/error.hpp"
#include "bcl/formula.hpp"
#include "bcl/model.hpp"

namespace bcl {

/// Number of features in X on which s and s' agree.
inline std::size_t similarity(State s, State t, FeatureSet x) noexcept {
  return x.size() - ((s ^ t) & x).size();
}

inline std::size_t distance(State s, State t, FeatureSet x) noexcept {
  return ((s ^ t) & x).size();
}

/// The f-states of maximal similarity to s relative to X, in state order.
/// Empty when f has no satisfying state.
inline std::vector<State> closest(const ClassifierModel& c, State s, const Formula& f,
                                  FeatureSet x, EvalOptions options = {}) {
  const StateSet ext = extension(c, f, options);
  std::vector<State> best;
  std::size_t best_sim = 0;
  for (auto t : ext.members()) {
    const auto sim = similarity(s, t, x);
    if (best.empty() || sim > best_sim) {
      best.assign(1, t);
      best_sim = sim;
    } else if (sim == best_sim) {
      best.push_back(t);
    }
  }
  return best;
}

/// (C, s) ⊨ f ⇒_X g, computed from the closest set directly.
inline bool eval_counterfactual(const ClassifierModel& c, State s, const Formula& f,
                                const Formula& g, FeatureSet x, EvalOptions options = {}) {
  Evaluator eval(c, options);
  const StateSet& consequent = eval.extension(g);
  for (auto t : closest(c, s, f, x, options)) {
    if (!consequent.contains(t)) return false;
  }
  return true;
}

/// apprDec(x) = (⋁_{y ≠ ?} t(y)) ⇒ t(x), over every feature.
inline Formula appr_dec_formula(const Vocabulary& voc, ValueId x) {
  const auto unknown = voc.unknown_value();
  if (!unknown) throw Error("approximate decisions need the abstention value '?'");
  std::vector<Formula> decided;
  for (ValueId y = 0; y < voc.value_count(); ++y) {
    if (y != *unknown) decided.push_back(decision(y));
  }
  return counterfactual(voc.all_features(), disj_all(decided), decision(x));
}

inline bool appr_dec(const ClassifierModel& c, State s, ValueId x, EvalOptions options = {}) {
  return satisfies(c, s, appr_dec_formula(c.vocabulary(), x), options);
}

struct ExpansionOptions {
  /// Largest index set expanded; the expansion has O(2^|X|) conjuncts.
  std::size_t index_cap = 12;
};

/// The static formula equivalent to f ⇒_X g:
///   ⋀_{0≤k≤|X|} (maxSim(f, X, k) → ⋀_{Y⊆X, |Y|=k} [Y](f → g))
/// with maxSim(f, X, k) = ⋁_{|Y|=k} ⟨Y⟩f ∧ ⋀_{|Y|>k} [Y]¬f.
inline Formula expand_counterfactual(const Formula& cf, ExpansionOptions options = {}) {
  if (cf.op() != Op::kCounterfactual) throw Error("expand_counterfactual needs a counterfactual");
  const FeatureSet x = cf.index();
  if (x.size() > options.index_cap) {
    throw CapError("counterfactual index set has " + std::to_string(x.size()) +
                   " features; the expansion cap is " + std::to_string(options.index_cap));
  }
  const Formula& f = cf.lhs();
  const Formula& g = cf.rhs();
  std::vector<std::vector<FeatureSet>> by_size(x.size() + 1);
  for_each_subset(x, [&](FeatureSet y) { by_size[y.size()].push_back(y); });

  const Formula not_f = neg(f);
  const Formula f_implies_g = implies(f, g);
  std::vector<Formula> conjuncts;
  for (std::size_t k = 0; k <= x.size(); ++k) {
    std::vector<Formula> reach, beyond, consequent;
    for (auto y : by_size[k]) {
      reach.push_back(diamond(y, f));
      consequent.push_back(box(y, f_implies_g));
    }
    for (std::size_t j = k + 1; j <= x.size(); ++j) {
      for (auto y : by_size[j]) beyond.push_back(box(y, not_f));
    }
    Formula max_sim = disj_all(reach);
    if (!beyond.empty()) max_sim = conj(max_sim, conj_all(beyond));
    conjuncts.push_back(implies(max_sim, conj_all(consequent)));
  }
  return conj_all(conjuncts);
}

/// Replaces every counterfactual node, innermost first, by its expansion.
inline Formula expand_counterfactuals(const Formula& f, ExpansionOptions options = {}) {
  if (f.lhs().empty() && f.rhs().empty()) return f;
  Formula rebuilt = detail::map_children(
      f, [&](const Formula& c) { return expand_counterfactuals(c, options); });
  if (rebuilt.op() == Op::kCounterfactual) return expand_counterfactual(rebuilt, options);
  return rebuilt;
}

}  // namespace bcl
