#pragma once

#include <compare>
#include <string>
#include <string_view>
#include <vector>

#include "bcl/error.hpp"
#include "bcl/feature_set.hpp"
#include "bcl/formula.hpp"
#include "bcl/syntax.hpp"
#include "bcl/vocabulary.hpp"

namespace bcl {

/// A consistent conjunction of feature literals. The empty term is ⊤.
class Term {
 public:
  Term() = default;
  Term(FeatureSet positives, FeatureSet negatives) : pos_(positives), neg_(negatives) {
    if (!(pos_ & neg_).empty()) throw Error("inconsistent term: an atom occurs with both signs");
  }

  /// ŝ: the full instance term of state s over `features`.
  static Term instance(State s, FeatureSet features) { return Term(s & features, features.minus(s)); }

  /// The part of ŝ over `atoms`.
  static Term restrict_instance(State s, FeatureSet atoms) { return Term(s & atoms, atoms.minus(s)); }

  FeatureSet positives() const noexcept { return pos_; }
  FeatureSet negatives() const noexcept { return neg_; }
  FeatureSet atoms() const noexcept { return pos_ | neg_; }
  std::size_t size() const noexcept { return atoms().size(); }
  bool is_top() const noexcept { return atoms().empty(); }

  bool holds(State s) const noexcept { return (s & pos_) == pos_ && (s & neg_).empty(); }

  /// Literal-wise negation λ̄.
  Term flipped() const { return Term(neg_, pos_); }

  /// Literal-set inclusion λ ⊆ μ.
  bool subterm_of(const Term& other) const noexcept {
    return pos_.subset_of(other.pos_) && neg_.subset_of(other.neg_);
  }

  Term without(std::size_t atom) const { return Term(pos_.without(atom), neg_.without(atom)); }

  Formula to_formula() const {
    std::vector<Formula> lits;
    for (auto i : atoms().indices()) lits.push_back(pos_.contains(i) ? feature(i) : neg(feature(i)));
    return conj_all(lits);
  }

  std::string render(const Vocabulary& voc) const {
    if (is_top()) return "true";
    std::string out;
    for (auto i : atoms().indices()) {
      if (!out.empty()) out += " & ";
      if (neg_.contains(i)) out += '~';
      out += voc.feature_name(i);
    }
    return out;
  }

  friend bool operator==(const Term&, const Term&) = default;

 private:
  FeatureSet pos_;
  FeatureSet neg_;
};

/// Output order for explanation lists: by size, then lexicographically by
/// (atom index, sign) in vocabulary order.
inline bool term_order(const Term& a, const Term& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  const auto ia = a.atoms().indices();
  const auto ib = b.atoms().indices();
  for (std::size_t k = 0; k < ia.size(); ++k) {
    if (ia[k] != ib[k]) return ia[k] < ib[k];
    const bool pa = a.positives().contains(ia[k]);
    const bool pb = b.positives().contains(ib[k]);
    if (pa != pb) return !pa;
  }
  return false;
}

namespace detail {

inline void collect_literals(const Formula& f, FeatureSet& pos, FeatureSet& neg) {
  switch (f.op()) {
    case Op::kTrue:
      return;
    case Op::kAnd:
      collect_literals(f.lhs(), pos, neg);
      collect_literals(f.rhs(), pos, neg);
      return;
    case Op::kFeature:
      pos.insert(f.atom());
      return;
    case Op::kNot:
      if (f.lhs().op() == Op::kFeature) {
        neg.insert(f.lhs().atom());
        return;
      }
      break;
    default:
      break;
  }
  throw Error("a term is a conjunction of feature literals");
}

}  // namespace detail

/// Parses a conjunction of literals such as "~p1 & q2", or "true".
inline Term parse_term(std::string_view text, const Vocabulary& voc) {
  FeatureSet pos, neg;
  detail::collect_literals(parse_formula(text, voc), pos, neg);
  return Term(pos, neg);
}

}  // namespace bcl
