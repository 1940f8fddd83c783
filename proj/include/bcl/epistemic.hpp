#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>

#include "bcl/checker.hpp"
#include "bcl/error.hpp"
#include "bcl/formula.hpp"
#include "bcl/model.hpp"

namespace bcl {

/// Two states that agree on every basic atom but get different values.
struct DependenceViolation {
  State first;
  State second;
};

/// The first violation of "classification depends only on the basic atoms",
/// in state order.
inline std::optional<DependenceViolation> find_dependence_violation(const ClassifierModel& c) {
  const Vocabulary& voc = c.vocabulary();
  std::optional<DependenceViolation> out;
  for_each_state(c, [&](State s) {
    const State b = voc.basic_part(s);
    if (!out && c.classify(s) != c.classify(b)) out = DependenceViolation{b, s};
  });
  return out;
}

/// A classifier model over Atm0 ∪ {o(p) : p ∈ Atm0} whose decisions ignore
/// the observability atoms.
class EpistemicClassifierModel {
 public:
  /// Checks the vocabulary profile and the basic-atom dependence.
  static EpistemicClassifierModel build(ClassifierModel c) {
    const Vocabulary& voc = c.vocabulary();
    if (!voc.is_epistemic()) {
      throw Error("an epistemic model needs a vocabulary declared with basic atoms");
    }
    if (auto v = find_dependence_violation(c)) {
      const auto w = voc.feature_count();
      throw ConstraintError("Atm0-dependence",
                            "states " + state_bits(v->first, w) + " and " +
                                state_bits(v->second, w) +
                                " agree on the basic atoms but get different values");
    }
    return EpistemicClassifierModel(std::move(c));
  }

  const ClassifierModel& model() const noexcept { return model_; }
  const Vocabulary& vocabulary() const noexcept { return model_.vocabulary(); }

  /// s ~ s': the same basic atoms are visible at both, and the visible ones
  /// have the same truth values.
  bool indistinguishable(State s, State t) const noexcept {
    const Vocabulary& voc = vocabulary();
    const FeatureSet vs = voc.visible(s);
    return vs == voc.visible(t) && (s & vs) == (t & vs);
  }

  /// Representative key of the ~-class of s.
  State class_key(State s) const noexcept {
    const Vocabulary& voc = vocabulary();
    return (s & voc.observability_features()) | (s & voc.visible(s));
  }

 private:
  explicit EpistemicClassifierModel(ClassifierModel m) : model_(std::move(m)) {}

  ClassifierModel model_;
};

inline EpistemicClassifierModel build_ecm(ClassifierModel c) {
  return EpistemicClassifierModel::build(std::move(c));
}

inline bool epistemic_indist(const EpistemicClassifierModel& e, State s, State t) {
  return e.indistinguishable(s, t);
}

inline bool satisfies_epistemic(const EpistemicClassifierModel& e, State s, const Formula& f,
                                EvalOptions options = {}) {
  return satisfies(e.model(), s, f, options);
}

struct EpistemicRewriteOptions {
  /// Largest number of observability atoms; the rewrite has 2^|ObsAtm|
  /// conjuncts per K.
  std::size_t observability_cap = 10;
};

/// The K-free equivalent of Kφ:
///   ⋀_{Y ⊆ ObsAtm} (cn(Y, ObsAtm) → [ObsAtm ∪ {p : o(p) ∈ Y}] φ)
inline Formula reduce_knowledge(const Vocabulary& voc, const Formula& phi,
                                EpistemicRewriteOptions options = {}) {
  if (!voc.is_epistemic()) throw Error("K requires an epistemic vocabulary");
  const FeatureSet obs = voc.observability_features();
  if (obs.size() > options.observability_cap) {
    throw CapError("vocabulary has " + std::to_string(obs.size()) +
                   " observability atoms; the K rewrite cap is " +
                   std::to_string(options.observability_cap));
  }
  std::vector<Formula> parts;
  for_each_subset(obs, [&](FeatureSet y) {
    const FeatureSet seen = voc.visible(y);
    parts.push_back(implies(cn(y, obs), box(obs | seen, phi)));
  });
  return conj_all(parts);
}

namespace detail {

inline Formula rewrite_epistemic_rec(const Vocabulary& voc, const Formula& f,
                                     EpistemicRewriteOptions options,
                                     std::unordered_map<const Node*, std::pair<Formula, Formula>>& memo) {
  if (auto it = memo.find(f.id()); it != memo.end()) return it->second.second;
  Formula out;
  if (f.lhs().empty() && f.rhs().empty()) {
    out = f;
  } else {
    out = map_children(f, [&](const Formula& c) { return rewrite_epistemic_rec(voc, c, options, memo); });
    if (out.op() == Op::kKnow) out = reduce_knowledge(voc, out.lhs(), options);
  }
  memo.emplace(f.id(), std::make_pair(f, out));
  return out;
}

}  // namespace detail

/// Replaces every K node, innermost first, by its ceteris paribus reduction.
inline Formula rewrite_epistemic(const Vocabulary& voc, const Formula& f,
                                 EpistemicRewriteOptions options = {}) {
  if (!contains_op(f, Op::kKnow)) return f;
  std::unordered_map<const Node*, std::pair<Formula, Formula>> memo;
  return detail::rewrite_epistemic_rec(voc, f, options, memo);
}

}  // namespace bcl
