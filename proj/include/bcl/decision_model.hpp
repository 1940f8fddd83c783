#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "bcl/error.hpp"
#include "bcl/feature_set.hpp"
#include "bcl/formula.hpp"
#include "bcl/model.hpp"

namespace bcl {

/// A world of a decision model: the feature atoms and the decision atoms
/// true at it.
struct World {
  FeatureSet features;
  std::set<ValueId> decisions;

  friend bool operator==(const World&, const World&) = default;
};

/// A ceteris paribus model over explicit worlds. The relations ≡_X are not
/// stored: w ≡_X v holds exactly when V(w) ∩ X = V(v) ∩ X. Index sets never
/// contain decision atoms, so only the feature part matters.
class DecisionModel {
 public:
  DecisionModel(std::shared_ptr<const Vocabulary> voc, std::vector<World> worlds)
      : voc_(std::move(voc)), worlds_(std::move(worlds)) {
    for (const auto& w : worlds_) {
      if (!w.features.subset_of(voc_->all_features())) throw Error("world outside the vocabulary");
      for (auto x : w.decisions) {
        if (x >= voc_->value_count()) throw Error("world refers to an undeclared value");
      }
    }
  }

  const Vocabulary& vocabulary() const noexcept { return *voc_; }
  const std::shared_ptr<const Vocabulary>& shared_vocabulary() const noexcept { return voc_; }
  const std::vector<World>& worlds() const noexcept { return worlds_; }
  std::size_t size() const noexcept { return worlds_.size(); }

  bool equivalent(std::size_t w, std::size_t v, FeatureSet x) const noexcept {
    return (worlds_[w].features & x) == (worlds_[v].features & x);
  }

 private:
  std::shared_ptr<const Vocabulary> voc_;
  std::vector<World> worlds_;
};

/// M♭: one world per state, valued by the state plus its decision atom.
/// World i is state i.
inline DecisionModel to_decision_model(const ClassifierModel& c) {
  std::vector<World> worlds;
  worlds.reserve(c.state_count());
  for_each_state(c, [&](State s) { worlds.push_back({s, {c.classify(s)}}); });
  return DecisionModel(c.shared_vocabulary(), std::move(worlds));
}

/// C♯. Checks the decision-model constraints C2 to C5 first (C1 holds by
/// construction) and names the first one violated.
inline ClassifierModel to_classifier_model(const DecisionModel& m) {
  const Vocabulary& voc = m.vocabulary();
  const auto width = voc.feature_count();
  std::vector<std::optional<ValueId>> table(voc.state_count());
  for (const auto& w : m.worlds()) {
    const std::string at = " at a world with features " + state_bits(w.features, width);
    if (w.decisions.empty()) throw ConstraintError("C2", "no decision atom is true" + at);
    if (w.decisions.size() > 1) throw ConstraintError("C3", "two decision atoms are true" + at);
    auto& slot = table[w.features.bits()];
    const ValueId x = *w.decisions.begin();
    if (slot && *slot != x) {
      throw ConstraintError("C4", "worlds with the same features disagree on the decision" + at);
    }
    slot = x;
  }
  std::vector<ValueId> dense(table.size());
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (!table[i]) {
      throw ConstraintError("C5", "no world realizes the feature valuation " +
                                      state_bits(State(static_cast<FeatureSet::Bits>(i)), width));
    }
    dense[i] = *table[i];
  }
  return ClassifierModel(m.shared_vocabulary(), std::move(dense));
}

/// Truth sets over the worlds of a decision model, computed straight from the
/// relational semantics by pairwise world comparison. Handles the static
/// language and counterfactuals.
class DecisionModelEvaluator {
 public:
  explicit DecisionModelEvaluator(const DecisionModel& m) : m_(m) {}

  std::vector<bool> extension(const Formula& f) const {
    const auto n = m_.size();
    std::vector<bool> out(n);
    switch (f.op()) {
      case Op::kTrue:
      case Op::kFalse:
        out.assign(n, f.op() == Op::kTrue);
        return out;
      case Op::kFeature:
        for (std::size_t w = 0; w < n; ++w) out[w] = m_.worlds()[w].features.contains(f.atom());
        return out;
      case Op::kDecision:
        for (std::size_t w = 0; w < n; ++w) out[w] = m_.worlds()[w].decisions.count(f.atom()) > 0;
        return out;
      case Op::kNot: {
        auto a = extension(f.lhs());
        for (std::size_t w = 0; w < n; ++w) out[w] = !a[w];
        return out;
      }
      case Op::kAnd:
      case Op::kOr:
      case Op::kImplies:
      case Op::kIff: {
        auto a = extension(f.lhs());
        auto b = extension(f.rhs());
        for (std::size_t w = 0; w < n; ++w) {
          switch (f.op()) {
            case Op::kAnd:
              out[w] = a[w] && b[w];
              break;
            case Op::kOr:
              out[w] = a[w] || b[w];
              break;
            case Op::kImplies:
              out[w] = !a[w] || b[w];
              break;
            default:
              out[w] = a[w] == b[w];
          }
        }
        return out;
      }
      case Op::kBox:
      case Op::kDiamond: {
        const bool universal = f.op() == Op::kBox;
        auto a = extension(f.lhs());
        for (std::size_t w = 0; w < n; ++w) {
          bool r = universal;
          for (std::size_t v = 0; v < n; ++v) {
            if (m_.equivalent(w, v, f.index()) && a[v] != universal) {
              r = !universal;
              break;
            }
          }
          out[w] = r;
        }
        return out;
      }
      case Op::kCounterfactual: {
        auto a = extension(f.lhs());
        auto b = extension(f.rhs());
        const FeatureSet x = f.index();
        for (std::size_t w = 0; w < n; ++w) {
          std::optional<std::size_t> best;
          for (std::size_t v = 0; v < n; ++v) {
            if (!a[v]) continue;
            const auto d = ((m_.worlds()[w].features ^ m_.worlds()[v].features) & x).size();
            if (!best || d < *best) best = d;
          }
          bool r = true;
          for (std::size_t v = 0; v < n && best; ++v) {
            const auto d = ((m_.worlds()[w].features ^ m_.worlds()[v].features) & x).size();
            if (a[v] && d == *best && !b[v]) r = false;
          }
          out[w] = r;
        }
        return out;
      }
      case Op::kAssign:
      case Op::kKnow:
        break;
    }
    throw Error("decision models evaluate static formulas and counterfactuals only");
  }

  bool satisfies(std::size_t w, const Formula& f) const { return extension(f)[w]; }

 private:
  const DecisionModel& m_;
};

}  // namespace bcl
