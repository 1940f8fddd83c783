#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bcl/error.hpp"
#include "bcl/feature_set.hpp"
#include "bcl/formula.hpp"
#include "bcl/model.hpp"

namespace bcl {

struct EvalOptions {
  /// Models with more features are refused rather than evaluated.
  std::size_t feature_cap = 20;
};

struct PointedModel {
  const ClassifierModel& model;
  State state;

  PointedModel(const ClassifierModel& m, State s) : model(m), state(s) {
    if (s.bits() >= m.state_count()) throw Error("state is wider than the model vocabulary");
  }
};

/// Computes truth sets ||f|| over every state of one model. Results are
/// memoized per subformula node for the lifetime of the evaluator.
///
/// Besides the static language this handles φ ⇒_X ψ (closest antecedent
/// states by agreement on X), [x := φ]ψ (by evaluating ψ in the updated
/// model) and Kφ (over the observability-driven indistinguishability of an
/// epistemic vocabulary).
class Evaluator {
 public:
  explicit Evaluator(const ClassifierModel& model, EvalOptions options = {})
      : model_(model), options_(options) {
    const auto n = model.vocabulary().feature_count();
    if (n > options_.feature_cap) {
      throw CapError("model has " + std::to_string(n) + " features; the evaluation cap is " +
                     std::to_string(options_.feature_cap));
    }
  }

  const ClassifierModel& model() const noexcept { return model_; }

  const StateSet& extension(const Formula& f) {
    if (auto it = memo_.find(f.id()); it != memo_.end()) return it->second.second;
    StateSet result = compute(f);
    // The key formula is retained so its node address cannot be reused.
    return memo_.emplace(f.id(), std::make_pair(f, std::move(result))).first->second.second;
  }

  bool satisfies(State s, const Formula& f) { return extension(f).contains(s); }

 private:
  std::size_t states() const noexcept { return model_.state_count(); }

  StateSet compute(const Formula& f) {
    const auto n = states();
    switch (f.op()) {
      case Op::kTrue:
        return StateSet(n, true);
      case Op::kFalse:
        return StateSet(n, false);
      case Op::kFeature: {
        if (f.atom() >= model_.vocabulary().feature_count()) {
          throw UnknownNameError("feature index outside the vocabulary");
        }
        StateSet out(n);
        for_each_state(model_, [&](State s) { out.set(s, s.contains(f.atom())); });
        return out;
      }
      case Op::kDecision: {
        if (f.atom() >= model_.vocabulary().value_count()) {
          throw UnknownNameError("decision value outside the vocabulary");
        }
        StateSet out(n);
        for_each_state(model_, [&](State s) { out.set(s, model_.classify(s) == f.atom()); });
        return out;
      }
      case Op::kNot:
        return extension(f.lhs()).complement();
      case Op::kAnd: {
        StateSet out = extension(f.lhs());
        out &= extension(f.rhs());
        return out;
      }
      case Op::kOr: {
        StateSet out = extension(f.lhs());
        out |= extension(f.rhs());
        return out;
      }
      case Op::kImplies: {
        StateSet out = extension(f.lhs()).complement();
        out |= extension(f.rhs());
        return out;
      }
      case Op::kIff: {
        const StateSet& a = extension(f.lhs());
        const StateSet& b = extension(f.rhs());
        StateSet out(n);
        for_each_state(model_, [&](State s) { out.set(s, a.contains(s) == b.contains(s)); });
        return out;
      }
      case Op::kBox:
        return box_by_key(extension(f.lhs()), [x = f.index()](State s) { return s & x; }, true);
      case Op::kDiamond:
        return box_by_key(extension(f.lhs()), [x = f.index()](State s) { return s & x; }, false);
      case Op::kKnow: {
        const Vocabulary& voc = model_.vocabulary();
        if (!voc.is_epistemic()) throw Error("K requires an epistemic vocabulary");
        const FeatureSet obs = voc.observability_features();
        return box_by_key(extension(f.lhs()),
                          [&voc, obs](State s) { return (s & obs) | (s & voc.visible(s)); }, true);
      }
      case Op::kCounterfactual:
        return counterfactual(f.index(), extension(f.lhs()), extension(f.rhs()));
      case Op::kAssign: {
        const StateSet& context = extension(f.lhs());
        std::vector<ValueId> table = model_.table();
        for (std::size_t i = 0; i < table.size(); ++i) {
          if (context.contains(State(static_cast<FeatureSet::Bits>(i)))) table[i] = f.atom();
        }
        const ClassifierModel updated = model_.with_table(std::move(table));
        Evaluator inner(updated, options_);
        return inner.extension(f.rhs());
      }
    }
    throw Error("unhandled formula node");
  }

  // Universal (or existential) quantification over each class of states
  // sharing key(s).
  template <typename Key>
  StateSet box_by_key(const StateSet& body, Key key, bool universal) const {
    const auto n = states();
    std::vector<std::uint8_t> acc(n, universal ? 1 : 0);
    for_each_state(model_, [&](State s) {
      if (body.contains(s) != universal) acc[key(s).bits()] = universal ? 0 : 1;
    });
    StateSet out(n);
    for_each_state(model_, [&](State s) { out.set(s, acc[key(s).bits()] != 0); });
    return out;
  }

  // Hypercube distance, over the coordinates in x, from every key q ⊆ x to the
  // nearest marked key.
  std::vector<int> nearest(FeatureSet x, const std::vector<std::uint8_t>& marked) const {
    constexpr int kInf = std::numeric_limits<int>::max();
    std::vector<int> dist(states(), kInf);
    std::vector<FeatureSet::Bits> queue;
    for_each_subset(x, [&](FeatureSet q) {
      if (marked[q.bits()]) {
        dist[q.bits()] = 0;
        queue.push_back(q.bits());
      }
    });
    const auto coords = x.indices();
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const auto q = queue[head];
      for (auto i : coords) {
        const auto r = q ^ (FeatureSet::Bits{1} << i);
        if (dist[r] == kInf) {
          dist[r] = dist[q] + 1;
          queue.push_back(r);
        }
      }
    }
    return dist;
  }

  // s ⊨ a ⇒_X b iff every a-state of maximal agreement with s on X is a b-state.
  // Agreement on X only depends on projections to X, so it suffices to compare
  // the distance to the nearest a-projection with the distance to the nearest
  // projection of an a ∧ ¬b state.
  StateSet counterfactual(FeatureSet x, const StateSet& a, const StateSet& b) const {
    const auto n = states();
    if (a.empty()) return StateSet(n, true);
    std::vector<std::uint8_t> has_a(n, 0);
    std::vector<std::uint8_t> has_bad(n, 0);
    for_each_state(model_, [&](State s) {
      if (!a.contains(s)) return;
      has_a[(s & x).bits()] = 1;
      if (!b.contains(s)) has_bad[(s & x).bits()] = 1;
    });
    const auto to_a = nearest(x, has_a);
    const auto to_bad = nearest(x, has_bad);
    StateSet out(n);
    for_each_state(model_, [&](State s) {
      const auto q = (s & x).bits();
      out.set(s, to_bad[q] > to_a[q]);
    });
    return out;
  }

  const ClassifierModel& model_;
  EvalOptions options_;
  std::unordered_map<const Node*, std::pair<Formula, StateSet>> memo_;
};

/// ||f||_C.
inline StateSet extension(const ClassifierModel& c, const Formula& f, EvalOptions options = {}) {
  return Evaluator(c, options).extension(f);
}

/// (C, s) ⊨ f.
inline bool satisfies(const ClassifierModel& c, State s, const Formula& f,
                      EvalOptions options = {}) {
  const PointedModel pointed(c, s);
  return Evaluator(c, options).satisfies(pointed.state, f);
}

/// C ⊨ f: f holds at every state.
inline bool valid_in_model(const ClassifierModel& c, const Formula& f, EvalOptions options = {}) {
  return extension(c, f, options).full();
}

}  // namespace bcl
