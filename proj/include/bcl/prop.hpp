#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <ostream>
#include <string>
#include <unordered_map>
#include <vector>

#include "bcl/error.hpp"

namespace bcl {

/// Hash-consed propositional DAG over numbered variables, with conjunction
/// as the only internal node and negation carried on edges. Constants are
/// folded on construction, so TRUE and FALSE never occur below the root.
class PropDag {
 public:
  /// 2 * node + (1 if negated). Node 0 is TRUE.
  using Lit = std::uint32_t;
  static constexpr Lit kTrue = 0;
  static constexpr Lit kFalse = 1;

  PropDag() { nodes_.push_back({0, {}}); }

  static Lit negate(Lit l) noexcept { return l ^ 1u; }
  static bool negated(Lit l) noexcept { return (l & 1u) != 0; }
  static std::size_t node_of(Lit l) noexcept { return l >> 1; }

  /// The literal of SAT variable v (v ≥ 1).
  Lit var(std::uint32_t v) {
    auto [it, fresh] = vars_.try_emplace(v, 0);
    if (fresh) {
      it->second = static_cast<Lit>(nodes_.size()) << 1;
      nodes_.push_back({v, {}});
    }
    return it->second;
  }

  Lit conj(std::vector<Lit> kids) {
    std::erase(kids, kTrue);
    if (std::find(kids.begin(), kids.end(), kFalse) != kids.end()) return kFalse;
    std::sort(kids.begin(), kids.end());
    kids.erase(std::unique(kids.begin(), kids.end()), kids.end());
    for (std::size_t i = 1; i < kids.size(); ++i) {
      if ((kids[i] ^ kids[i - 1]) == 1u) return kFalse;
    }
    if (kids.empty()) return kTrue;
    if (kids.size() == 1) return kids.front();
    auto [it, fresh] = ands_.try_emplace(kids, 0);
    if (fresh) {
      it->second = static_cast<Lit>(nodes_.size()) << 1;
      nodes_.push_back({0, it->first});
    }
    return it->second;
  }
  Lit conj(Lit a, Lit b) { return conj(std::vector<Lit>{a, b}); }

  Lit disj(std::vector<Lit> kids) {
    for (auto& k : kids) k = negate(k);
    return negate(conj(std::move(kids)));
  }
  Lit disj(Lit a, Lit b) { return disj(std::vector<Lit>{a, b}); }

  std::size_t node_count() const noexcept { return nodes_.size(); }
  bool is_var(std::size_t node) const noexcept { return node != 0 && nodes_[node].var != 0; }
  std::uint32_t var_of(std::size_t node) const noexcept { return nodes_[node].var; }
  const std::vector<Lit>& kids(std::size_t node) const noexcept { return nodes_[node].kids; }

  /// Value of l under an assignment indexed by SAT variable.
  bool eval(Lit l, const std::vector<bool>& assignment) const {
    std::unordered_map<std::size_t, bool> memo;
    return eval_rec(l, assignment, memo);
  }

 private:
  struct NodeData {
    std::uint32_t var;
    std::vector<Lit> kids;
  };
  struct VecHash {
    std::size_t operator()(const std::vector<Lit>& v) const noexcept {
      std::size_t h = v.size();
      for (auto x : v) h ^= std::hash<Lit>{}(x) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
      return h;
    }
  };

  bool eval_rec(Lit l, const std::vector<bool>& a, std::unordered_map<std::size_t, bool>& memo) const {
    const auto n = node_of(l);
    bool v;
    if (auto it = memo.find(n); it != memo.end()) {
      v = it->second;
    } else {
      if (n == 0) {
        v = true;
      } else if (is_var(n)) {
        v = a.at(nodes_[n].var);
      } else {
        v = true;
        for (auto k : nodes_[n].kids) {
          if (!eval_rec(k, a, memo)) {
            v = false;
            break;
          }
        }
      }
      memo.emplace(n, v);
    }
    return v != negated(l);
  }

  std::vector<NodeData> nodes_;
  std::unordered_map<std::uint32_t, Lit> vars_;
  std::unordered_map<std::vector<Lit>, Lit, VecHash> ands_;
};

/// A CNF over variables 1..variables, clauses as DIMACS integers.
struct Cnf {
  std::uint32_t variables = 0;
  std::vector<std::vector<int>> clauses;
};

inline void write_dimacs(std::ostream& out, const Cnf& cnf) {
  out << "p cnf " << cnf.variables << ' ' << cnf.clauses.size() << '\n';
  for (const auto& c : cnf.clauses) {
    for (auto l : c) out << l << ' ';
    out << "0\n";
  }
}

/// Tseitin encoding: every conjunction node reachable from `root` gets a
/// fresh variable above `base_vars` and defining clauses; `root` is
/// asserted by a unit clause.
inline void append_tseitin(const PropDag& dag, PropDag::Lit root, Cnf& cnf) {
  if (root == PropDag::kTrue) return;
  if (root == PropDag::kFalse) {
    cnf.clauses.emplace_back();
    return;
  }
  std::unordered_map<std::size_t, std::uint32_t> names;
  std::vector<std::size_t> order;
  std::vector<std::size_t> stack{PropDag::node_of(root)};
  while (!stack.empty()) {
    const auto n = stack.back();
    stack.pop_back();
    if (dag.is_var(n) || names.count(n)) continue;
    names.emplace(n, ++cnf.variables);
    order.push_back(n);
    for (auto k : dag.kids(n)) stack.push_back(PropDag::node_of(k));
  }
  auto lit = [&](PropDag::Lit l) {
    const auto n = PropDag::node_of(l);
    const int v = static_cast<int>(dag.is_var(n) ? dag.var_of(n) : names.at(n));
    return PropDag::negated(l) ? -v : v;
  };
  for (auto n : order) {
    const int a = static_cast<int>(names.at(n));
    std::vector<int> back{a};
    for (auto k : dag.kids(n)) {
      cnf.clauses.push_back({-a, lit(k)});
      back.push_back(-lit(k));
    }
    cnf.clauses.push_back(std::move(back));
  }
  cnf.clauses.push_back({lit(root)});
}

struct PropResult {
  bool satisfiable = false;
  /// Indexed by variable; entry 0 unused.
  std::vector<bool> assignment;
  std::size_t decisions = 0;
};

/// DPLL with two-watched-literal unit propagation and chronological
/// backtracking. Branches on the lowest unassigned variable, false first,
/// so results are deterministic.
class Dpll {
 public:
  explicit Dpll(const Cnf& cnf) : n_(cnf.variables), value_(cnf.variables + 1, kUnset) {
    watches_.resize(2 * (static_cast<std::size_t>(n_) + 1));
    for (const auto& c : cnf.clauses) {
      std::vector<std::uint32_t> lits;
      for (auto l : c) {
        if (l == 0 || static_cast<std::uint32_t>(std::abs(l)) > n_) {
          throw Error("clause literal outside the declared variables");
        }
        lits.push_back(encode(l));
      }
      std::sort(lits.begin(), lits.end());
      lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
      bool tautology = false;
      for (std::size_t i = 1; i < lits.size(); ++i) tautology |= (lits[i] ^ lits[i - 1]) == 1u;
      if (tautology) continue;
      if (lits.empty()) {
        trivially_unsat_ = true;
      } else if (lits.size() == 1) {
        units_.push_back(lits.front());
      } else {
        watches_[lits[0]].push_back(clauses_.size());
        watches_[lits[1]].push_back(clauses_.size());
        clauses_.push_back(std::move(lits));
      }
    }
  }

  PropResult solve() {
    PropResult out;
    if (trivially_unsat_) return out;
    for (auto u : units_) {
      if (!assign(u)) return out;
    }
    std::uint32_t hint = 1;
    while (true) {
      if (!propagate()) {
        // Undo to the most recent decision not yet flipped and flip it.
        while (true) {
          if (levels_.empty()) return out;
          Level& top = levels_.back();
          undo_to(top.trail_size);
          if (!top.flipped) {
            top.flipped = true;
            hint = top.var;
            assign(2 * top.var);
            break;
          }
          levels_.pop_back();
        }
        continue;
      }
      while (hint <= n_ && value_[hint] != kUnset) ++hint;
      if (hint > n_) break;
      ++out.decisions;
      levels_.push_back({trail_.size(), hint, false});
      assign(2 * hint + 1);
    }
    out.satisfiable = true;
    out.assignment.assign(static_cast<std::size_t>(n_) + 1, false);
    for (std::uint32_t v = 1; v <= n_; ++v) out.assignment[v] = value_[v] == kTrueValue;
    return out;
  }

 private:
  static constexpr std::uint8_t kUnset = 2;
  static constexpr std::uint8_t kTrueValue = 1;

  // Literal encoding: 2v for v, 2v + 1 for ¬v.
  static std::uint32_t encode(int l) {
    return l > 0 ? 2u * static_cast<std::uint32_t>(l) : 2u * static_cast<std::uint32_t>(-l) + 1u;
  }
  std::uint8_t lit_value(std::uint32_t l) const {
    const auto v = value_[l >> 1];
    if (v == kUnset) return kUnset;
    return (l & 1u) ? static_cast<std::uint8_t>(1 - v) : v;
  }

  // False on conflict with an existing assignment.
  bool assign(std::uint32_t l) {
    const auto cur = lit_value(l);
    if (cur != kUnset) return cur == 1;
    value_[l >> 1] = (l & 1u) ? 0 : 1;
    trail_.push_back(l);
    return true;
  }

  void undo_to(std::size_t size) {
    while (trail_.size() > size) {
      value_[trail_.back() >> 1] = kUnset;
      trail_.pop_back();
    }
    head_ = std::min(head_, size);
  }

  bool propagate() {
    while (head_ < trail_.size()) {
      const std::uint32_t falsified = trail_[head_++] ^ 1u;
      auto& ws = watches_[falsified];
      std::size_t keep = 0;
      bool conflict = false;
      for (std::size_t i = 0; i < ws.size(); ++i) {
        const auto ci = ws[i];
        if (conflict) {
          ws[keep++] = ci;
          continue;
        }
        auto& c = clauses_[ci];
        if (c[0] == falsified) std::swap(c[0], c[1]);
        if (lit_value(c[0]) == 1) {
          ws[keep++] = ci;
          continue;
        }
        bool moved = false;
        for (std::size_t k = 2; k < c.size(); ++k) {
          if (lit_value(c[k]) != 0) {
            std::swap(c[1], c[k]);
            watches_[c[1]].push_back(ci);
            moved = true;
            break;
          }
        }
        if (moved) continue;
        ws[keep++] = ci;
        if (!assign(c[0])) conflict = true;
      }
      ws.resize(keep);
      if (conflict) return false;
    }
    return true;
  }

  struct Level {
    std::size_t trail_size;
    std::uint32_t var;
    bool flipped;
  };

  std::uint32_t n_;
  std::vector<std::uint8_t> value_;
  std::vector<std::vector<std::uint32_t>> clauses_;
  std::vector<std::vector<std::size_t>> watches_;
  std::vector<std::uint32_t> units_;
  std::vector<std::uint32_t> trail_;
  std::vector<Level> levels_;
  std::size_t head_ = 0;
  bool trivially_unsat_ = false;
};

inline PropResult solve_cnf(const Cnf& cnf) { return Dpll(cnf).solve(); }

}  // namespace bcl
