#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bcl/checker.hpp"
#include "bcl/counterfactual.hpp"
#include "bcl/error.hpp"
#include "bcl/formula.hpp"
#include "bcl/model.hpp"
#include "bcl/term.hpp"

namespace bcl {

/// C^{x:=φ}: states where φ holds are reclassified as x.
inline ClassifierModel apply_assignment(const ClassifierModel& c, ValueId x, const Formula& phi,
                                        EvalOptions options = {}) {
  if (x >= c.vocabulary().value_count()) throw UnknownNameError("assignment to an undeclared value");
  const StateSet context = extension(c, phi, options);
  std::vector<ValueId> table = c.table();
  for_each_state(c, [&](State s) {
    if (context.contains(s)) table[s.bits()] = x;
  });
  return c.with_table(std::move(table));
}

struct RewriteOptions {
  /// Largest tree size (shared subterms counted once per occurrence) a
  /// rewrite may produce.
  std::size_t size_budget = 1'000'000;
};

namespace detail {

// [x := φ]g for an assignment-free g. The modal cases commute with the
// assignment because ≡_X, similarity and ~ do not depend on the decision
// function.
class AssignmentPusher {
 public:
  AssignmentPusher(ValueId x, Formula phi) : x_(x), phi_(std::move(phi)), not_phi_(neg(phi_)) {}

  Formula push(const Formula& g) {
    if (auto it = memo_.find(g.id()); it != memo_.end()) return it->second.second;
    Formula out = compute(g);
    memo_.emplace(g.id(), std::make_pair(g, out));
    return out;
  }

 private:
  Formula compute(const Formula& g) {
    switch (g.op()) {
      case Op::kTrue:
      case Op::kFalse:
      case Op::kFeature:
        return g;
      case Op::kDecision:
        return g.atom() == x_ ? disj(phi_, g) : conj(not_phi_, g);
      case Op::kAssign:
        throw Error("nested assignment must be rewritten first");
      default:
        return map_children(g, [&](const Formula& c) { return push(c); });
    }
  }

  ValueId x_;
  Formula phi_;
  Formula not_phi_;
  std::unordered_map<const Node*, std::pair<Formula, Formula>> memo_;
};

inline Formula rewrite_dynamic_rec(const Formula& f,
                                   std::unordered_map<const Node*, std::pair<Formula, Formula>>& memo) {
  if (auto it = memo.find(f.id()); it != memo.end()) return it->second.second;
  Formula out;
  if (f.op() == Op::kAssign) {
    const Formula context = rewrite_dynamic_rec(f.lhs(), memo);
    const Formula body = rewrite_dynamic_rec(f.rhs(), memo);
    out = AssignmentPusher(f.atom(), context).push(body);
  } else if (f.lhs().empty() && f.rhs().empty()) {
    out = f;
  } else {
    out = map_children(f, [&](const Formula& c) { return rewrite_dynamic_rec(c, memo); });
  }
  memo.emplace(f.id(), std::make_pair(f, out));
  return out;
}

}  // namespace detail

/// An assignment-free equivalent of f, applying the reduction equivalences
/// innermost first:
///   [x:=φ]t(x) ↔ φ ∨ t(x)     [x:=φ]t(y) ↔ ¬φ ∧ t(y)     [x:=φ]p ↔ p
///   [x:=φ] commutes with ¬, ∧ and every modality.
inline Formula rewrite_dynamic(const Formula& f, RewriteOptions options = {}) {
  if (!contains_op(f, Op::kAssign)) return f;
  std::unordered_map<const Node*, std::pair<Formula, Formula>> memo;
  Formula out = detail::rewrite_dynamic_rec(f, memo);
  const auto size = tree_size(out, options.size_budget + 1);
  if (size > options.size_budget) {
    throw CapError("assignment rewriting exceeds the size budget of " +
                   std::to_string(options.size_budget) + " nodes");
  }
  return out;
}

struct TrainingPair {
  State state;
  ValueId value;

  friend bool operator==(const TrainingPair&, const TrainingPair&) = default;
};

struct TrainingResult {
  /// The ignorant model after [x_i := ŝ_i] for every pair.
  ClassifierModel trained;
  /// The model induced from `trained` by approximate decisions.
  ClassifierModel induced;
};

/// Starts from the all-"?" model, assigns each training label at its
/// instance, then relabels every state s with the x such that apprDec(x)
/// holds at s, if exactly one does. With no decided state at all every
/// apprDec(x) is vacuous, so nothing is relabeled.
inline TrainingResult train(const Vocabulary& voc, const std::vector<TrainingPair>& pairs,
                            EvalOptions options = {}) {
  const auto unknown = voc.unknown_value();
  if (!unknown) throw Error("training needs the abstention value '?'");
  auto shared = std::make_shared<const Vocabulary>(voc);
  ClassifierModel model = ClassifierModel::constant(shared, *unknown);
  std::set<State> seen;
  for (const auto& p : pairs) {
    if (p.value >= voc.value_count()) throw UnknownNameError("training label is undeclared");
    if (p.value == *unknown) throw Error("'?' cannot be used as a training label");
    if (p.state.bits() >= voc.state_count()) throw Error("training state is wider than the vocabulary");
    if (!seen.insert(p.state).second) {
      throw Error("duplicate training state " + state_bits(p.state, voc.feature_count()));
    }
    model = apply_assignment(model, p.value,
                             Term::instance(p.state, voc.all_features()).to_formula(), options);
  }

  std::vector<ValueId> table = model.table();
  if (!pairs.empty()) {
    Evaluator eval(model, options);
    std::vector<const StateSet*> approx;
    for (ValueId x = 0; x < voc.value_count(); ++x) {
      approx.push_back(&eval.extension(appr_dec_formula(voc, x)));
    }
    for_each_state(model, [&](State s) {
      std::size_t hits = 0;
      ValueId chosen = 0;
      for (ValueId x = 0; x < voc.value_count(); ++x) {
        if (approx[x]->contains(s)) {
          ++hits;
          chosen = x;
        }
      }
      if (hits == 1) table[s.bits()] = chosen;
    });
  }
  ClassifierModel induced = model.with_table(std::move(table));
  return {std::move(model), std::move(induced)};
}

}  // namespace bcl
