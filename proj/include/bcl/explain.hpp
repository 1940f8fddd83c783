#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "bcl/error.hpp"
#include "bcl/feature_set.hpp"
#include "bcl/formula.hpp"
#include "bcl/model.hpp"
#include "bcl/term.hpp"

namespace bcl {

enum class ExplanationKind { kPImp, kAXp, kCXp, kBias };

inline const char* kind_name(ExplanationKind k) {
  switch (k) {
    case ExplanationKind::kPImp:
      return "pimp";
    case ExplanationKind::kAXp:
      return "axp";
    case ExplanationKind::kCXp:
      return "cxp";
    case ExplanationKind::kBias:
      return "bias";
  }
  return "?";
}

struct Explanation {
  ExplanationKind kind;
  Term term;
  ValueId value;
  std::optional<State> state;

  friend bool operator==(const Explanation&, const Explanation&) = default;
};

/// Every state where λ holds has value x.
inline bool is_implicant(const ClassifierModel& c, const Term& lambda, ValueId x) {
  const FeatureSet free = c.features().minus(lambda.atoms());
  bool ok = true;
  for_each_subset(free, [&](FeatureSet sub) {
    if (ok && c.classify(lambda.positives() | sub) != x) ok = false;
  });
  return ok;
}

/// An implicant none of whose proper sub-terms is an implicant. Dropping a
/// literal only enlarges the set of covered states, so checking the
/// one-literal-shorter sub-terms is enough.
inline bool is_prime_implicant(const ClassifierModel& c, const Term& lambda, ValueId x) {
  if (!is_implicant(c, lambda, x)) return false;
  for (auto p : lambda.atoms().indices()) {
    if (is_implicant(c, lambda.without(p), x)) return false;
  }
  return true;
}

/// All prime implicants of x, in term order.
inline std::vector<Term> prime_implicants(const ClassifierModel& c, ValueId x) {
  std::vector<Term> out;
  for_each_subset(c.features(), [&](FeatureSet atoms) {
    for_each_subset(atoms, [&](FeatureSet pos) {
      Term t(pos, atoms.minus(pos));
      if (is_prime_implicant(c, t, x)) out.push_back(t);
    });
  });
  std::sort(out.begin(), out.end(), term_order);
  return out;
}

/// λ is true at s and is a prime implicant of x.
inline bool check_axp(const ClassifierModel& c, State s, const Term& lambda, ValueId x) {
  return lambda.holds(s) && is_prime_implicant(c, lambda, x);
}

namespace detail {

inline void sort_explanations(std::vector<Explanation>& xs) {
  std::sort(xs.begin(), xs.end(),
            [](const Explanation& a, const Explanation& b) { return term_order(a.term, b.term); });
}

}  // namespace detail

/// Every abductive explanation of x at s. Candidates are the sub-terms of
/// the instance ŝ; there are none unless x = f(s).
inline std::vector<Explanation> enumerate_axp(const ClassifierModel& c, State s, ValueId x) {
  std::vector<Explanation> out;
  for_each_subset(c.features(), [&](FeatureSet atoms) {
    const Term t = Term::restrict_instance(s, atoms);
    if (is_prime_implicant(c, t, x)) out.push_back({ExplanationKind::kAXp, t, x, s});
  });
  detail::sort_explanations(out);
  return out;
}

inline std::vector<Explanation> enumerate_axp(const ClassifierModel& c, State s) {
  return enumerate_axp(c, s, c.classify(s));
}

/// λ ⊆ ŝ, flipping all of Atm(λ) changes the decision x, and flipping any
/// proper subset of Atm(λ) keeps it.
inline bool check_cxp(const ClassifierModel& c, State s, const Term& lambda, ValueId x) {
  if (c.classify(s) != x || !lambda.holds(s)) return false;
  const FeatureSet atoms = lambda.atoms();
  if (c.classify(s ^ atoms) == x) return false;
  bool minimal = true;
  for_each_subset(atoms, [&](FeatureSet flip) {
    if (minimal && flip != atoms && c.classify(s ^ flip) != x) minimal = false;
  });
  return minimal;
}

inline std::vector<Explanation> enumerate_cxp(const ClassifierModel& c, State s, ValueId x) {
  std::vector<Explanation> out;
  for_each_subset(c.features(), [&](FeatureSet atoms) {
    const Term t = Term::restrict_instance(s, atoms);
    if (check_cxp(c, s, t, x)) out.push_back({ExplanationKind::kCXp, t, x, s});
  });
  detail::sort_explanations(out);
  return out;
}

inline std::vector<Explanation> enumerate_cxp(const ClassifierModel& c, State s) {
  return enumerate_cxp(c, s, c.classify(s));
}

/// States differing from s only on protected features that get another value,
/// in state order.
inline std::vector<State> bias_witnesses(const ClassifierModel& c, State s, FeatureSet protected_) {
  if (protected_.empty()) throw Error("no protected features declared");
  const ValueId x = c.classify(s);
  std::vector<State> out;
  for_each_subset(protected_, [&](FeatureSet flip) {
    if (c.classify(s ^ flip) != x) out.push_back(s ^ flip);
  });
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<State> bias_witnesses(const ClassifierModel& c, State s) {
  return bias_witnesses(c, s, c.vocabulary().protected_features());
}

/// Bias(f(s)) at s.
inline bool check_bias(const ClassifierModel& c, State s, FeatureSet protected_) {
  return !bias_witnesses(c, s, protected_).empty();
}

inline bool check_bias(const ClassifierModel& c, State s) {
  return check_bias(c, s, c.vocabulary().protected_features());
}

/// The bias witness closest to s, the first in state order among ties.
inline std::optional<State> nearest_bias_witness(const ClassifierModel& c, State s,
                                                 FeatureSet protected_) {
  std::optional<State> best;
  for (auto w : bias_witnesses(c, s, protected_)) {
    if (!best || (w ^ s).size() < (*best ^ s).size()) best = w;
  }
  return best;
}

// Modal characterizations. `features` is Atm \ Dec of the vocabulary.

/// [∅](λ → (t(x) ∧ ⋀_{p∈Atm(λ)} ⟨Atm(λ) \ {p}⟩¬t(x)))
inline Formula compile_pimp(const Term& lambda, ValueId x) {
  std::vector<Formula> parts{decision(x)};
  for (auto p : lambda.atoms().indices()) {
    parts.push_back(diamond(lambda.atoms().without(p), neg(decision(x))));
  }
  return box({}, implies(lambda.to_formula(), conj_all(parts)));
}

inline Formula compile_axp(const Term& lambda, ValueId x) {
  return conj(lambda.to_formula(), compile_pimp(lambda, x));
}

/// λ ∧ t(x) ∧ ⟨F \ Atm(λ)⟩¬t(x) ∧ ⋀_{p∈Atm(λ)} [(F \ Atm(λ)) ∪ {p}] t(x)
inline Formula compile_cxp(FeatureSet features, const Term& lambda, ValueId x) {
  const FeatureSet rest = features.minus(lambda.atoms());
  std::vector<Formula> parts{lambda.to_formula(), decision(x), diamond(rest, neg(decision(x)))};
  for (auto p : lambda.atoms().indices()) parts.push_back(box(rest.with(p), decision(x)));
  return conj_all(parts);
}

/// t(x) ∧ ⋁_{X⊆PF} ⟨F \ X⟩¬t(x)
inline Formula compile_bias(FeatureSet features, FeatureSet protected_, ValueId x) {
  std::vector<Formula> flips;
  for_each_subset(protected_, [&](FeatureSet y) {
    flips.push_back(diamond(features.minus(y), neg(decision(x))));
  });
  return conj(decision(x), disj_all(flips));
}

/// Dispatches on `kind`; `protected_` is only used for kBias and `lambda`
/// is ignored there.
inline Formula compile_characterization(ExplanationKind kind, const Vocabulary& voc,
                                        const Term& lambda, ValueId x,
                                        FeatureSet protected_ = {}) {
  switch (kind) {
    case ExplanationKind::kPImp:
      return compile_pimp(lambda, x);
    case ExplanationKind::kAXp:
      return compile_axp(lambda, x);
    case ExplanationKind::kCXp:
      return compile_cxp(voc.all_features(), lambda, x);
    case ExplanationKind::kBias:
      return compile_bias(voc.all_features(), protected_, x);
  }
  throw Error("unknown explanation kind");
}

}  // namespace bcl
