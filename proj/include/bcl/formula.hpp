#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <set>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bcl/feature_set.hpp"
#include "bcl/vocabulary.hpp"

namespace bcl {

enum class Op : std::uint8_t {
  kTrue,
  kFalse,
  kFeature,         // p, including observability atoms o(p)
  kDecision,        // t(x)
  kNot,
  kAnd,
  kOr,
  kImplies,
  kIff,
  kBox,             // [X] a
  kDiamond,         // <X> a
  kCounterfactual,  // a =>_X b
  kAssign,          // [x := a] b
  kKnow,            // K a
};

struct Node;

/// Immutable, structurally shared formula of the static, dynamic and
/// epistemic languages. Atoms are indices into a Vocabulary.
class Formula {
 public:
  Formula() = default;

  Op op() const noexcept;
  /// Feature index (kFeature) or decision value (kDecision, kAssign).
  std::size_t atom() const noexcept;
  /// Index set of kBox, kDiamond and kCounterfactual.
  FeatureSet index() const noexcept;
  /// First operand; for kCounterfactual the antecedent, for kAssign the context.
  const Formula& lhs() const noexcept;
  /// Second operand; for kCounterfactual the consequent, for kAssign the body.
  const Formula& rhs() const noexcept;

  bool empty() const noexcept { return node_ == nullptr; }
  const Node* id() const noexcept { return node_.get(); }

  friend bool operator==(const Formula& a, const Formula& b);

 private:
  friend Formula make_node(Op, std::size_t, FeatureSet, Formula, Formula);
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  std::shared_ptr<const Node> node_;
};

struct Node {
  Op op;
  std::size_t atom = 0;
  FeatureSet index;
  Formula a;
  Formula b;
};

inline Formula make_node(Op op, std::size_t atom, FeatureSet index, Formula a, Formula b) {
  return Formula(std::make_shared<const Node>(Node{op, atom, index, std::move(a), std::move(b)}));
}

inline Op Formula::op() const noexcept { return node_->op; }
inline std::size_t Formula::atom() const noexcept { return node_->atom; }
inline FeatureSet Formula::index() const noexcept { return node_->index; }
inline const Formula& Formula::lhs() const noexcept { return node_->a; }
inline const Formula& Formula::rhs() const noexcept { return node_->b; }

inline bool operator==(const Formula& x, const Formula& y) {
  if (x.node_ == y.node_) return true;
  if (!x.node_ || !y.node_) return false;
  const Node& a = *x.node_;
  const Node& b = *y.node_;
  return a.op == b.op && a.atom == b.atom && a.index == b.index && a.a == b.a && a.b == b.b;
}

inline bool is_binary(Op op) noexcept {
  return op == Op::kAnd || op == Op::kOr || op == Op::kImplies || op == Op::kIff ||
         op == Op::kCounterfactual || op == Op::kAssign;
}
inline bool is_unary(Op op) noexcept {
  return op == Op::kNot || op == Op::kBox || op == Op::kDiamond || op == Op::kKnow;
}

// Constructors.

inline Formula top() { return make_node(Op::kTrue, 0, {}, {}, {}); }
inline Formula bottom() { return make_node(Op::kFalse, 0, {}, {}, {}); }
inline Formula feature(std::size_t i) { return make_node(Op::kFeature, i, {}, {}, {}); }
inline Formula decision(ValueId x) { return make_node(Op::kDecision, x, {}, {}, {}); }
inline Formula neg(Formula a) { return make_node(Op::kNot, 0, {}, std::move(a), {}); }
inline Formula conj(Formula a, Formula b) {
  return make_node(Op::kAnd, 0, {}, std::move(a), std::move(b));
}
inline Formula disj(Formula a, Formula b) {
  return make_node(Op::kOr, 0, {}, std::move(a), std::move(b));
}
inline Formula implies(Formula a, Formula b) {
  return make_node(Op::kImplies, 0, {}, std::move(a), std::move(b));
}
inline Formula iff(Formula a, Formula b) {
  return make_node(Op::kIff, 0, {}, std::move(a), std::move(b));
}
inline Formula box(FeatureSet x, Formula a) {
  return make_node(Op::kBox, 0, x, std::move(a), {});
}
inline Formula diamond(FeatureSet x, Formula a) {
  return make_node(Op::kDiamond, 0, x, std::move(a), {});
}
inline Formula counterfactual(FeatureSet x, Formula antecedent, Formula consequent) {
  return make_node(Op::kCounterfactual, 0, x, std::move(antecedent), std::move(consequent));
}
inline Formula assign(ValueId x, Formula context, Formula body) {
  return make_node(Op::kAssign, x, {}, std::move(context), std::move(body));
}
inline Formula know(Formula a) { return make_node(Op::kKnow, 0, {}, std::move(a), {}); }

/// Left-nested conjunction; ⊤ when empty.
inline Formula conj_all(const std::vector<Formula>& fs) {
  if (fs.empty()) return top();
  Formula out = fs.front();
  for (std::size_t i = 1; i < fs.size(); ++i) out = conj(out, fs[i]);
  return out;
}

/// Left-nested disjunction; ⊥ when empty.
inline Formula disj_all(const std::vector<Formula>& fs) {
  if (fs.empty()) return bottom();
  Formula out = fs.front();
  for (std::size_t i = 1; i < fs.size(); ++i) out = disj(out, fs[i]);
  return out;
}

/// cn(Y, X): the conjunction fixing the atoms of Y true and those of X \ Y false.
inline Formula cn(FeatureSet y, FeatureSet x) {
  std::vector<Formula> lits;
  for (auto i : x.indices()) lits.push_back(y.contains(i) ? feature(i) : neg(feature(i)));
  return conj_all(lits);
}

/// ⋁ of t(x) over every value.
inline Formula some_decision(const Vocabulary& voc) {
  std::vector<Formula> ds;
  for (ValueId v = 0; v < voc.value_count(); ++v) ds.push_back(decision(v));
  return disj_all(ds);
}

namespace detail {

template <typename Fn>
Formula map_children(const Formula& f, Fn&& fn) {
  switch (f.op()) {
    case Op::kTrue:
    case Op::kFalse:
    case Op::kFeature:
    case Op::kDecision:
      return f;
    case Op::kNot:
    case Op::kBox:
    case Op::kDiamond:
    case Op::kKnow:
      return make_node(f.op(), f.atom(), f.index(), fn(f.lhs()), {});
    default:
      return make_node(f.op(), f.atom(), f.index(), fn(f.lhs()), fn(f.rhs()));
  }
}

}  // namespace detail

/// Rewrites the derived connectives ∨, →, ↔, ⟨X⟩ and ⊥ into ¬, ∧ and [X].
/// Counterfactual, assignment and knowledge nodes are kept; their operands
/// are normalized.
inline Formula normalize(const Formula& f) {
  switch (f.op()) {
    case Op::kFalse:
      return neg(top());
    case Op::kOr:
      return neg(conj(neg(normalize(f.lhs())), neg(normalize(f.rhs()))));
    case Op::kImplies:
      return neg(conj(normalize(f.lhs()), neg(normalize(f.rhs()))));
    case Op::kIff: {
      auto a = normalize(f.lhs());
      auto b = normalize(f.rhs());
      return conj(neg(conj(a, neg(b))), neg(conj(b, neg(a))));
    }
    case Op::kDiamond:
      return neg(box(f.index(), neg(normalize(f.lhs()))));
    default:
      return detail::map_children(f, [](const Formula& c) { return normalize(c); });
  }
}

/// Atm(f), split into atoms occurring in the body and atoms naming index sets.
struct AtomOccurrences {
  FeatureSet features;
  std::set<ValueId> decisions;
  FeatureSet index_features;

  bool empty() const { return features.empty() && decisions.empty() && index_features.empty(); }
  friend bool operator==(const AtomOccurrences&, const AtomOccurrences&) = default;
};

inline void collect_atoms(const Formula& f, AtomOccurrences& out) {
  switch (f.op()) {
    case Op::kTrue:
    case Op::kFalse:
      return;
    case Op::kFeature:
      out.features.insert(f.atom());
      return;
    case Op::kDecision:
      out.decisions.insert(f.atom());
      return;
    case Op::kBox:
    case Op::kDiamond:
    case Op::kCounterfactual:
      out.index_features = out.index_features | f.index();
      break;
    default:
      break;
  }
  if (!f.lhs().empty()) collect_atoms(f.lhs(), out);
  if (!f.rhs().empty()) collect_atoms(f.rhs(), out);
}

inline AtomOccurrences atoms_of(const Formula& f) {
  AtomOccurrences out;
  collect_atoms(f, out);
  return out;
}

/// True iff f has no assignment, knowledge or counterfactual node.
inline bool is_modal_core(const Formula& f) {
  if (f.op() == Op::kAssign || f.op() == Op::kKnow || f.op() == Op::kCounterfactual) return false;
  if (!f.lhs().empty() && !is_modal_core(f.lhs())) return false;
  if (!f.rhs().empty() && !is_modal_core(f.rhs())) return false;
  return true;
}

inline bool contains_op(const Formula& f, Op op) {
  if (f.op() == op) return true;
  return (!f.lhs().empty() && contains_op(f.lhs(), op)) ||
         (!f.rhs().empty() && contains_op(f.rhs(), op));
}

/// Tree size (shared subterms counted once per occurrence), saturating at `limit`.
inline std::size_t tree_size(const Formula& f, std::size_t limit = SIZE_MAX) {
  std::unordered_map<const Node*, std::size_t> memo;
  auto go = [&](auto&& self, const Formula& g) -> std::size_t {
    if (auto it = memo.find(g.id()); it != memo.end()) return it->second;
    std::size_t n = 1;
    for (const Formula* c : {&g.lhs(), &g.rhs()}) {
      if (c->empty()) continue;
      const std::size_t k = self(self, *c);
      n = (k >= limit - n) ? limit : n + k;
    }
    memo.emplace(g.id(), n);
    return n;
  };
  return go(go, f);
}

}  // namespace bcl
