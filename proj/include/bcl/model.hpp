#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bcl/error.hpp"
#include "bcl/feature_set.hpp"
#include "bcl/vocabulary.hpp"

namespace bcl {

/// Renders a state as a bitstring, first character = first feature.
inline std::string state_bits(State s, std::size_t width) {
  std::string out(width, '0');
  for (std::size_t i = 0; i < width; ++i) {
    if (s.contains(i)) out[i] = '1';
  }
  return out;
}

/// Parses a bitstring of exactly `width` characters.
inline State parse_state(std::string_view bits, std::size_t width) {
  if (bits.size() != width) {
    throw Error("state '" + std::string(bits) + "' has " + std::to_string(bits.size()) +
                " bits; expected " + std::to_string(width));
  }
  State s;
  for (std::size_t i = 0; i < width; ++i) {
    if (bits[i] == '1') {
      s.insert(i);
    } else if (bits[i] != '0') {
      throw Error("state '" + std::string(bits) + "' is not a bitstring");
    }
  }
  return s;
}

/// A classifier model: a total decision function from the 2^n feature
/// valuations into the vocabulary's values, stored as a dense table.
class ClassifierModel {
 public:
  ClassifierModel(std::shared_ptr<const Vocabulary> voc, std::vector<ValueId> table)
      : voc_(std::move(voc)), table_(std::move(table)) {
    if (table_.size() != voc_->state_count()) {
      throw Error("decision table has " + std::to_string(table_.size()) + " entries; expected " +
                  std::to_string(voc_->state_count()));
    }
    for (auto v : table_) {
      if (v >= voc_->value_count()) throw Error("decision table refers to an undeclared value");
    }
  }
  ClassifierModel(Vocabulary voc, std::vector<ValueId> table)
      : ClassifierModel(std::make_shared<const Vocabulary>(std::move(voc)), std::move(table)) {}

  static ClassifierModel constant(std::shared_ptr<const Vocabulary> voc, ValueId x) {
    const auto n = voc->state_count();
    return ClassifierModel(std::move(voc), std::vector<ValueId>(n, x));
  }
  static ClassifierModel constant(Vocabulary voc, ValueId x) {
    return constant(std::make_shared<const Vocabulary>(std::move(voc)), x);
  }

  const Vocabulary& vocabulary() const noexcept { return *voc_; }
  const std::shared_ptr<const Vocabulary>& shared_vocabulary() const noexcept { return voc_; }
  std::size_t state_count() const noexcept { return table_.size(); }
  FeatureSet features() const noexcept { return voc_->all_features(); }
  const std::vector<ValueId>& table() const noexcept { return table_; }

  ValueId classify(State s) const noexcept { return table_[s.bits()]; }

  /// A copy with a different table over the same vocabulary.
  ClassifierModel with_table(std::vector<ValueId> table) const {
    return ClassifierModel(voc_, std::move(table));
  }

  bool is_constant() const noexcept {
    for (auto v : table_) {
      if (v != table_.front()) return false;
    }
    return true;
  }

  friend bool operator==(const ClassifierModel& a, const ClassifierModel& b) {
    return *a.voc_ == *b.voc_ && a.table_ == b.table_;
  }

 private:
  std::shared_ptr<const Vocabulary> voc_;
  std::vector<ValueId> table_;
};

inline ValueId classify(const ClassifierModel& c, State s) { return c.classify(s); }

/// Builds a model from explicit rows; every state must appear exactly once.
inline ClassifierModel build_from_table(Vocabulary voc,
                                        const std::vector<std::pair<State, ValueId>>& rows) {
  const auto n = voc.state_count();
  const auto width = voc.feature_count();
  std::vector<std::optional<ValueId>> table(n);
  for (const auto& [s, v] : rows) {
    if (s.bits() >= n) throw Error("state outside the vocabulary");
    if (v >= voc.value_count()) throw UnknownNameError("row refers to an undeclared value");
    if (table[s.bits()]) throw Error("duplicate row for state " + state_bits(s, width));
    table[s.bits()] = v;
  }
  std::vector<ValueId> dense(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!table[i]) {
      throw Error("missing row for state " +
                  state_bits(State(static_cast<FeatureSet::Bits>(i)), width));
    }
    dense[i] = *table[i];
  }
  return ClassifierModel(std::move(voc), std::move(dense));
}

/// def(X): states agreeing on X share a value.
inline bool check_definite(const ClassifierModel& c, FeatureSet x) {
  std::vector<std::optional<ValueId>> seen(c.state_count());
  for (std::size_t i = 0; i < c.state_count(); ++i) {
    const State s(static_cast<FeatureSet::Bits>(i));
    auto& slot = seen[(s & x).bits()];
    if (!slot) {
      slot = c.classify(s);
    } else if (*slot != c.classify(s)) {
      return false;
    }
  }
  return true;
}

/// The unique Y with ess(Y): p ∈ Y iff the model is not (features \ {p})-definite.
inline FeatureSet essential_set(const ClassifierModel& c) {
  const FeatureSet all = c.features();
  FeatureSet out;
  for (auto p : all.indices()) {
    if (!check_definite(c, all.without(p))) out.insert(p);
  }
  return out;
}

/// ntr(X): some pair of states disagreeing on X also disagrees on the value.
inline bool check_nontrivial(const ClassifierModel& c, FeatureSet x) {
  const State first{};
  const FeatureSet key0 = first & x;
  const ValueId v0 = c.classify(first);
  bool other_value_same_key = false;
  bool same_value_other_key = false;
  for (std::size_t i = 1; i < c.state_count(); ++i) {
    const State s(static_cast<FeatureSet::Bits>(i));
    const bool same_key = (s & x) == key0;
    const bool same_value = c.classify(s) == v0;
    if (!same_key && !same_value) return true;
    other_value_same_key |= same_key && !same_value;
    same_value_other_key |= !same_key && same_value;
  }
  return other_value_same_key && same_value_other_key;
}

template <typename Fn>
void for_each_state(const ClassifierModel& c, Fn&& fn) {
  for (std::size_t i = 0; i < c.state_count(); ++i) fn(State(static_cast<FeatureSet::Bits>(i)));
}

}  // namespace bcl
