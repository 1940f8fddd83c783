#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "bcl/error.hpp"
#include "bcl/feature_set.hpp"

namespace bcl {

using ValueId = std::size_t;

inline constexpr std::string_view kUnknownValue = "?";

/// Characters allowed in feature and value names of the concrete syntax.
inline bool is_name_char(char c) noexcept {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
         c == '_' || c == '?' || c == '\'';
}

inline bool is_name(std::string_view s) noexcept {
  return !s.empty() && std::all_of(s.begin(), s.end(), is_name_char);
}

/// The atom partition of a language: feature atoms (in a fixed order that
/// determines the state bitmask layout), decision values and, for epistemic
/// vocabularies, observability atoms o(p) for every basic atom p.
///
/// In an epistemic vocabulary the features are the basic atoms followed by
/// their observability atoms: feature i < basic_count() is basic atom i and
/// feature basic_count() + i is o(basic i).
class Vocabulary {
 public:
  Vocabulary() = default;

  static Vocabulary make(std::vector<std::string> features,
                         std::vector<std::string> values,
                         const std::vector<std::string>& protected_features = {}) {
    Vocabulary v;
    v.features_ = std::move(features);
    v.values_ = std::move(values);
    v.basic_count_ = v.features_.size();
    v.validate();
    v.set_protected(protected_features);
    return v;
  }

  static Vocabulary epistemic(std::vector<std::string> basic,
                              std::vector<std::string> values,
                              const std::vector<std::string>& protected_features = {}) {
    Vocabulary v;
    v.epistemic_ = true;
    v.basic_count_ = basic.size();
    v.features_ = std::move(basic);
    for (std::size_t i = 0; i < v.basic_count_; ++i) {
      v.features_.push_back("o(" + v.features_[i] + ")");
    }
    v.values_ = std::move(values);
    v.validate();
    v.set_protected(protected_features);
    return v;
  }

  std::size_t feature_count() const noexcept { return features_.size(); }
  std::size_t value_count() const noexcept { return values_.size(); }
  std::size_t state_count() const noexcept { return std::size_t{1} << features_.size(); }

  const std::string& feature_name(std::size_t i) const { return features_.at(i); }
  const std::string& value_name(ValueId v) const { return values_.at(v); }
  const std::vector<std::string>& features() const noexcept { return features_; }
  const std::vector<std::string>& values() const noexcept { return values_; }

  std::optional<std::size_t> find_feature(std::string_view name) const {
    auto it = std::find(features_.begin(), features_.end(), name);
    if (it == features_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - features_.begin());
  }
  std::size_t feature(std::string_view name) const {
    if (auto i = find_feature(name)) return *i;
    throw UnknownNameError("unknown feature '" + std::string(name) + "'");
  }

  std::optional<ValueId> find_value(std::string_view name) const {
    auto it = std::find(values_.begin(), values_.end(), name);
    if (it == values_.end()) return std::nullopt;
    return static_cast<ValueId>(it - values_.begin());
  }
  ValueId value(std::string_view name) const {
    if (auto v = find_value(name)) return *v;
    throw UnknownNameError("unknown decision value '" + std::string(name) + "'");
  }

  /// The reserved abstention value "?", when declared.
  std::optional<ValueId> unknown_value() const { return find_value(kUnknownValue); }

  FeatureSet all_features() const noexcept { return FeatureSet::first(features_.size()); }
  FeatureSet protected_features() const noexcept { return protected_; }

  Vocabulary with_protected(const std::vector<std::string>& names) const {
    Vocabulary v = *this;
    v.set_protected(names);
    return v;
  }

  bool is_epistemic() const noexcept { return epistemic_; }
  std::size_t basic_count() const noexcept { return basic_count_; }
  FeatureSet basic_features() const noexcept { return FeatureSet::first(basic_count_); }
  FeatureSet observability_features() const noexcept {
    return epistemic_ ? all_features().minus(basic_features()) : FeatureSet{};
  }
  bool is_observability(std::size_t feature) const noexcept {
    return epistemic_ && feature >= basic_count_;
  }
  /// Feature index of o(p) for basic feature p.
  std::size_t observability_of(std::size_t basic) const {
    if (!epistemic_ || basic >= basic_count_) {
      throw Error("observability atom requested outside the epistemic profile");
    }
    return basic_count_ + basic;
  }
  /// Basic part s ∩ Atm0 of a state.
  State basic_part(State s) const noexcept { return s & basic_features(); }
  /// Obs(s): basic atoms whose observability atom is true at s.
  FeatureSet visible(State s) const noexcept {
    if (!epistemic_) return {};
    return FeatureSet((s & observability_features()).bits() >> basic_count_);
  }

  friend bool operator==(const Vocabulary&, const Vocabulary&) = default;

 private:
  static bool reserved(std::string_view n) {
    return n == "K" || n == "true" || n == "false";
  }

  void validate() const {
    if (features_.size() > kMaxFeatures) {
      throw CapError("vocabulary declares " + std::to_string(features_.size()) +
                     " features; at most " + std::to_string(kMaxFeatures) + " are supported");
    }
    if (values_.empty()) throw Error("vocabulary needs at least one decision value");
    std::unordered_set<std::string_view> seen;
    for (std::size_t i = 0; i < basic_count_; ++i) {
      const auto& f = features_[i];
      if (!is_name(f) || reserved(f)) throw Error("invalid feature name '" + f + "'");
      if (!seen.insert(f).second) throw Error("duplicate feature '" + f + "'");
    }
    seen.clear();
    for (const auto& v : values_) {
      if (!is_name(v)) throw Error("invalid decision value name '" + v + "'");
      if (!seen.insert(v).second) throw Error("duplicate decision value '" + v + "'");
    }
  }

  void set_protected(const std::vector<std::string>& names) {
    protected_ = {};
    for (const auto& n : names) protected_.insert(feature(n));
  }

  std::vector<std::string> features_;
  std::vector<std::string> values_;
  FeatureSet protected_;
  bool epistemic_ = false;
  std::size_t basic_count_ = 0;
};

}  // namespace bcl
