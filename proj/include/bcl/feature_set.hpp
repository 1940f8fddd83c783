#pragma once

#include <bit>
#include <cassert>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace bcl {

inline constexpr std::size_t kMaxFeatures = 31;

/// A set of feature atoms, one bit per feature in vocabulary order.
///
/// States are feature sets too: a state is the set of features it makes true.
class FeatureSet {
 public:
  using Bits = std::uint32_t;

  constexpr FeatureSet() noexcept = default;
  constexpr explicit FeatureSet(Bits bits) noexcept : bits_(bits) {}

  static constexpr FeatureSet first(std::size_t n) noexcept {
    return FeatureSet(n == 0 ? 0u : (~Bits{0} >> (32 - n)));
  }
  static constexpr FeatureSet single(std::size_t i) noexcept {
    return FeatureSet(Bits{1} << i);
  }

  constexpr Bits bits() const noexcept { return bits_; }
  constexpr bool empty() const noexcept { return bits_ == 0; }
  constexpr std::size_t size() const noexcept {
    return static_cast<std::size_t>(std::popcount(bits_));
  }
  constexpr bool contains(std::size_t i) const noexcept {
    return (bits_ >> i) & 1u;
  }
  constexpr bool subset_of(FeatureSet other) const noexcept {
    return (bits_ & ~other.bits_) == 0;
  }

  constexpr FeatureSet& insert(std::size_t i) noexcept {
    bits_ |= Bits{1} << i;
    return *this;
  }
  constexpr FeatureSet& erase(std::size_t i) noexcept {
    bits_ &= ~(Bits{1} << i);
    return *this;
  }
  constexpr FeatureSet with(std::size_t i) const noexcept {
    return FeatureSet(bits_ | (Bits{1} << i));
  }
  constexpr FeatureSet without(std::size_t i) const noexcept {
    return FeatureSet(bits_ & ~(Bits{1} << i));
  }
  constexpr FeatureSet minus(FeatureSet other) const noexcept {
    return FeatureSet(bits_ & ~other.bits_);
  }

  friend constexpr FeatureSet operator&(FeatureSet a, FeatureSet b) noexcept {
    return FeatureSet(a.bits_ & b.bits_);
  }
  friend constexpr FeatureSet operator|(FeatureSet a, FeatureSet b) noexcept {
    return FeatureSet(a.bits_ | b.bits_);
  }
  friend constexpr FeatureSet operator^(FeatureSet a, FeatureSet b) noexcept {
    return FeatureSet(a.bits_ ^ b.bits_);
  }
  friend constexpr bool operator==(FeatureSet, FeatureSet) noexcept = default;
  friend constexpr auto operator<=>(FeatureSet a, FeatureSet b) noexcept {
    return a.bits_ <=> b.bits_;
  }

  /// Member indices in increasing order.
  std::vector<std::size_t> indices() const {
    std::vector<std::size_t> out;
    for (Bits b = bits_; b != 0; b &= b - 1) {
      out.push_back(static_cast<std::size_t>(std::countr_zero(b)));
    }
    return out;
  }

 private:
  Bits bits_ = 0;
};

using State = FeatureSet;

/// Calls fn(sub) for every subset of `mask`, in increasing numeric order.
template <typename Fn>
void for_each_subset(FeatureSet mask, Fn&& fn) {
  const auto m = mask.bits();
  FeatureSet::Bits sub = 0;
  while (true) {
    fn(FeatureSet(sub));
    if (sub == m) break;
    sub = (sub - m) & m;
  }
}

/// Subset-membership over all 2^n states of a vocabulary.
class StateSet {
 public:
  StateSet() = default;
  explicit StateSet(std::size_t state_count, bool value = false)
      : words_((state_count + 63) / 64, value ? ~std::uint64_t{0} : 0),
        count_(state_count) {
    trim();
  }

  std::size_t universe() const noexcept { return count_; }

  bool contains(State s) const noexcept {
    const auto i = s.bits();
    return (words_[i >> 6] >> (i & 63)) & 1u;
  }
  void set(State s, bool value = true) noexcept {
    const auto i = s.bits();
    if (value) {
      words_[i >> 6] |= std::uint64_t{1} << (i & 63);
    } else {
      words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63));
    }
  }

  std::size_t size() const noexcept {
    std::size_t n = 0;
    for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
  }
  bool empty() const noexcept {
    for (auto w : words_) {
      if (w != 0) return false;
    }
    return true;
  }
  bool full() const noexcept { return size() == count_; }

  StateSet& operator&=(const StateSet& o) noexcept {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    return *this;
  }
  StateSet& operator|=(const StateSet& o) noexcept {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
  }
  StateSet complement() const {
    StateSet out = *this;
    for (auto& w : out.words_) w = ~w;
    out.trim();
    return out;
  }
  bool subset_of(const StateSet& o) const noexcept {
    for (std::size_t i = 0; i < words_.size(); ++i) {
      if ((words_[i] & ~o.words_[i]) != 0) return false;
    }
    return true;
  }

  friend bool operator==(const StateSet&, const StateSet&) = default;

  /// Members in increasing state order.
  std::vector<State> members() const {
    std::vector<State> out;
    for (std::size_t w = 0; w < words_.size(); ++w) {
      for (auto bits = words_[w]; bits != 0; bits &= bits - 1) {
        out.emplace_back(static_cast<FeatureSet::Bits>(
            w * 64 + static_cast<std::size_t>(std::countr_zero(bits))));
      }
    }
    return out;
  }

 private:
  void trim() noexcept {
    if (count_ % 64 != 0 && !words_.empty()) {
      words_.back() &= (std::uint64_t{1} << (count_ % 64)) - 1;
    }
  }

  std::vector<std::uint64_t> words_;
  std::size_t count_ = 0;
};

}  // namespace bcl
