#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

#include "bcl/feature_set.hpp"
#include "bcl/formula.hpp"
#include "bcl/vocabulary.hpp"

namespace bcl {

struct FormulaGenOptions {
  std::size_t max_depth = 3;
  bool derived_connectives = true;
  bool modalities = true;
  bool counterfactuals = false;
  bool assignments = false;
  /// Only honored over epistemic vocabularies.
  bool knowledge = false;
};

/// Seeded generator of random formulas over a vocabulary.
class FormulaGenerator {
 public:
  FormulaGenerator(const Vocabulary& voc, std::uint64_t seed, FormulaGenOptions options = {})
      : voc_(voc), rng_(seed), options_(options) {}

  Formula operator()() { return gen(options_.max_depth); }

  Formula gen(std::size_t depth) {
    if (depth == 0 || pick(4) == 0) return leaf();
    std::vector<int> kinds{0, 1};  // not, and
    auto add = [&](std::initializer_list<int> ks) {
      for (int k : ks) kinds.push_back(k);
    };
    if (options_.derived_connectives) add({2, 3, 4});
    if (options_.modalities) add({5, 5, 6});
    if (options_.counterfactuals) add({7});
    if (options_.assignments) add({8});
    if (options_.knowledge && voc_.is_epistemic()) add({9, 9});
    const auto d = depth - 1;
    switch (kinds[pick(kinds.size())]) {
      case 0:
        return neg(gen(d));
      case 1:
        return conj(gen(d), gen(d));
      case 2:
        return disj(gen(d), gen(d));
      case 3:
        return implies(gen(d), gen(d));
      case 4:
        return iff(gen(d), gen(d));
      case 5:
        return box(index_set(), gen(d));
      case 6:
        return diamond(index_set(), gen(d));
      case 7:
        return counterfactual(index_set(), gen(d), gen(d));
      case 8:
        return assign(pick(voc_.value_count()), gen(d), gen(d));
      default:
        return know(gen(d));
    }
  }

  FeatureSet index_set() {
    const auto n = voc_.feature_count();
    std::uniform_int_distribution<FeatureSet::Bits> dist(0, (FeatureSet::Bits{1} << n) - 1);
    return FeatureSet(dist(rng_));
  }

  std::size_t pick(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_);
  }

  std::mt19937_64& rng() noexcept { return rng_; }

 private:
  Formula leaf() {
    const auto features = voc_.feature_count();
    const auto r = pick(features + voc_.value_count() + 1);
    if (r < features) return feature(r);
    if (r < features + voc_.value_count()) return decision(r - features);
    return pick(2) == 0 ? top() : bottom();
  }

  const Vocabulary& voc_;
  std::mt19937_64 rng_;
  FormulaGenOptions options_;
};

}  // namespace bcl
