#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bcl/checker.hpp"
#include "bcl/counterfactual.hpp"
#include "bcl/dynamics.hpp"
#include "bcl/epistemic.hpp"
#include "bcl/error.hpp"
#include "bcl/formula.hpp"
#include "bcl/model.hpp"
#include "bcl/prop.hpp"
#include "bcl/random_formula.hpp"

namespace bcl {

struct SolverOptions {
  /// Vocabularies with more features are refused.
  std::size_t feature_cap = 10;
  /// Ground counterfactuals through their static expansion instead of the
  /// direct closest-state encoding.
  bool expand_counterfactuals = false;
  ExpansionOptions expansion{};
  RewriteOptions rewrite{};
  EpistemicRewriteOptions epistemic{};
};

/// A propositional encoding of "f holds at some state of some classifier
/// model". Variable v(s, x) means f(s) = x. Over an epistemic vocabulary
/// v(s, x) and v(s ∩ Atm0, x) are the same variable, which builds the
/// basic-atom dependence of the decision into every model.
struct Grounding {
  std::shared_ptr<const Vocabulary> vocabulary;
  FeatureSet tie_mask;
  PropDag dag;
  /// compile(f, s) for every state s.
  std::vector<PropDag::Lit> at_state;
  /// ⋁_s compile(f, s).
  PropDag::Lit root = PropDag::kFalse;

  std::uint32_t decision_var(State s, ValueId x) const {
    return static_cast<std::uint32_t>((s & tie_mask).bits() * vocabulary->value_count() + x + 1);
  }
  std::uint32_t variable_count() const {
    return static_cast<std::uint32_t>(vocabulary->state_count() * vocabulary->value_count());
  }

  /// Exactly one value per state: the AtLeast and AtMost axioms.
  std::vector<std::vector<int>> constraints() const {
    std::vector<std::vector<int>> out;
    const auto values = vocabulary->value_count();
    for (std::size_t i = 0; i < vocabulary->state_count(); ++i) {
      const State s(static_cast<FeatureSet::Bits>(i));
      if ((s & tie_mask) != s) continue;
      std::vector<int> at_least;
      for (ValueId x = 0; x < values; ++x) at_least.push_back(static_cast<int>(decision_var(s, x)));
      out.push_back(at_least);
      for (ValueId x = 0; x < values; ++x) {
        for (ValueId y = x + 1; y < values; ++y) {
          out.push_back({-static_cast<int>(decision_var(s, x)), -static_cast<int>(decision_var(s, y))});
        }
      }
    }
    return out;
  }

  Cnf to_cnf() const {
    Cnf cnf;
    cnf.variables = variable_count();
    cnf.clauses = constraints();
    append_tseitin(dag, root, cnf);
    return cnf;
  }
};

namespace detail {

class Grounder {
 public:
  explicit Grounder(Grounding& g) : g_(g), voc_(*g.vocabulary) {}

  PropDag::Lit compile(const Formula& f, State s) {
    const std::pair<const Node*, FeatureSet::Bits> key{f.id(), memo_state(f, s).bits()};
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    const PropDag::Lit out = compute(f, s);
    memo_.emplace(key, out);
    return out;
  }

 private:
  struct KeyHash {
    std::size_t operator()(const std::pair<const Node*, FeatureSet::Bits>& k) const noexcept {
      return std::hash<const Node*>{}(k.first) * 1000003u ^ k.second;
    }
  };

  // The part of s a node's value depends on.
  static State memo_state(const Formula& f, State s) {
    switch (f.op()) {
      case Op::kTrue:
      case Op::kFalse:
        return {};
      case Op::kBox:
      case Op::kDiamond:
      case Op::kCounterfactual:
        return s & f.index();
      default:
        return s;
    }
  }

  PropDag::Lit compute(const Formula& f, State s) {
    PropDag& d = g_.dag;
    switch (f.op()) {
      case Op::kTrue:
        return PropDag::kTrue;
      case Op::kFalse:
        return PropDag::kFalse;
      case Op::kFeature:
        if (f.atom() >= voc_.feature_count()) throw UnknownNameError("feature index outside the vocabulary");
        return s.contains(f.atom()) ? PropDag::kTrue : PropDag::kFalse;
      case Op::kDecision:
        if (f.atom() >= voc_.value_count()) throw UnknownNameError("decision value outside the vocabulary");
        return d.var(g_.decision_var(s, f.atom()));
      case Op::kNot:
        return PropDag::negate(compile(f.lhs(), s));
      case Op::kAnd:
        return d.conj(compile(f.lhs(), s), compile(f.rhs(), s));
      case Op::kOr:
        return d.disj(compile(f.lhs(), s), compile(f.rhs(), s));
      case Op::kImplies:
        return d.disj(PropDag::negate(compile(f.lhs(), s)), compile(f.rhs(), s));
      case Op::kIff: {
        const auto a = compile(f.lhs(), s);
        const auto b = compile(f.rhs(), s);
        return d.conj(d.disj(PropDag::negate(a), b), d.disj(a, PropDag::negate(b)));
      }
      case Op::kBox:
      case Op::kDiamond: {
        const bool universal = f.op() == Op::kBox;
        const FeatureSet free = voc_.all_features().minus(f.index());
        const State fixed = s & f.index();
        std::vector<PropDag::Lit> parts;
        for_each_subset(free, [&](FeatureSet sub) { parts.push_back(compile(f.lhs(), fixed | sub)); });
        return universal ? d.conj(std::move(parts)) : d.disj(std::move(parts));
      }
      case Op::kCounterfactual:
        return counterfactual(f, s);
      case Op::kAssign:
      case Op::kKnow:
        break;
    }
    throw Error("grounding needs assignment and knowledge operators rewritten first");
  }

  // s ⊨ φ ⇒_X ψ iff every φ ∧ ¬ψ state has a φ-state strictly closer to s on X.
  PropDag::Lit counterfactual(const Formula& f, State s) {
    PropDag& d = g_.dag;
    const FeatureSet x = f.index();
    const auto n = voc_.state_count();
    std::vector<std::vector<State>> by_distance(x.size() + 1);
    for (std::size_t i = 0; i < n; ++i) {
      const State t(static_cast<FeatureSet::Bits>(i));
      by_distance[((s ^ t) & x).size()].push_back(t);
    }
    std::vector<PropDag::Lit> parts;
    PropDag::Lit closer = PropDag::kFalse;
    for (const auto& level : by_distance) {
      std::vector<PropDag::Lit> here;
      for (auto t : level) {
        const auto a = compile(f.lhs(), t);
        const auto b = compile(f.rhs(), t);
        parts.push_back(d.disj({PropDag::negate(a), b, closer}));
        here.push_back(a);
      }
      here.push_back(closer);
      closer = d.disj(std::move(here));
    }
    return d.conj(std::move(parts));
  }

  Grounding& g_;
  const Vocabulary& voc_;
  std::unordered_map<std::pair<const Node*, FeatureSet::Bits>, PropDag::Lit, KeyHash> memo_;
};

inline void check_solver_cap(const Vocabulary& voc, const SolverOptions& options) {
  if (voc.feature_count() > options.feature_cap) {
    throw CapError("vocabulary has " + std::to_string(voc.feature_count()) +
                   " features; the solver cap is " + std::to_string(options.feature_cap));
  }
}

}  // namespace detail

/// Rewrites assignments, then knowledge, then (optionally) counterfactuals,
/// leaving a formula the grounder accepts.
inline Formula prepare_for_grounding(const Formula& f, const Vocabulary& voc,
                                     const SolverOptions& options = {}) {
  Formula g = rewrite_dynamic(f, options.rewrite);
  g = rewrite_epistemic(voc, g, options.epistemic);
  if (options.expand_counterfactuals) g = expand_counterfactuals(g, options.expansion);
  return g;
}

/// Grounds a formula without assignment or knowledge nodes.
inline Grounding ground(const Formula& f, std::shared_ptr<const Vocabulary> voc,
                        const SolverOptions& options = {}) {
  detail::check_solver_cap(*voc, options);
  Grounding g;
  g.tie_mask = voc->is_epistemic() ? voc->basic_features() : voc->all_features();
  g.vocabulary = std::move(voc);
  detail::Grounder grounder(g);
  const auto n = g.vocabulary->state_count();
  g.at_state.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    g.at_state.push_back(grounder.compile(f, State(static_cast<FeatureSet::Bits>(i))));
  }
  g.root = g.dag.disj(g.at_state);
  return g;
}

struct Witness {
  ClassifierModel model;
  State state;
};

struct SatResult {
  bool satisfiable = false;
  std::optional<Witness> witness;
  std::size_t variables = 0;
  std::size_t clauses = 0;
};

namespace detail {

inline Witness decode(const Grounding& g, const std::vector<bool>& assignment) {
  const Vocabulary& voc = *g.vocabulary;
  std::vector<ValueId> table(voc.state_count(), 0);
  for (std::size_t i = 0; i < table.size(); ++i) {
    const State s(static_cast<FeatureSet::Bits>(i));
    for (ValueId x = 0; x < voc.value_count(); ++x) {
      if (assignment[g.decision_var(s, x)]) table[i] = x;
    }
  }
  State where;
  for (std::size_t i = 0; i < g.at_state.size(); ++i) {
    if (g.dag.eval(g.at_state[i], assignment)) {
      where = State(static_cast<FeatureSet::Bits>(i));
      break;
    }
  }
  return {ClassifierModel(g.vocabulary, std::move(table)), where};
}

}  // namespace detail

/// The CNF handed to the backend for f, for export.
inline Cnf ground_cnf(const Formula& f, std::shared_ptr<const Vocabulary> voc,
                      const SolverOptions& options = {}) {
  detail::check_solver_cap(*voc, options);
  const Formula prepared = prepare_for_grounding(f, *voc, options);
  return ground(prepared, std::move(voc), options).to_cnf();
}

/// Satisfiability relative to all classifier models over the vocabulary
/// (epistemic classifier models over an epistemic vocabulary).
inline SatResult sat(const Formula& f, std::shared_ptr<const Vocabulary> voc,
                     const SolverOptions& options = {}) {
  detail::check_solver_cap(*voc, options);
  const Formula prepared = prepare_for_grounding(f, *voc, options);
  const Grounding g = ground(prepared, std::move(voc), options);
  const Cnf cnf = g.to_cnf();
  SatResult out;
  out.variables = cnf.variables;
  out.clauses = cnf.clauses.size();
  const PropResult r = solve_cnf(cnf);
  out.satisfiable = r.satisfiable;
  if (r.satisfiable) out.witness = detail::decode(g, r.assignment);
  return out;
}

inline SatResult sat(const Formula& f, const Vocabulary& voc, const SolverOptions& options = {}) {
  return sat(f, std::make_shared<const Vocabulary>(voc), options);
}

struct ValidityResult {
  bool valid = false;
  /// A pointed model falsifying the formula, when not valid.
  std::optional<Witness> counterexample;
};

inline ValidityResult valid(const Formula& f, std::shared_ptr<const Vocabulary> voc,
                            const SolverOptions& options = {}) {
  SatResult r = sat(neg(f), std::move(voc), options);
  return {!r.satisfiable, std::move(r.witness)};
}

inline ValidityResult valid(const Formula& f, const Vocabulary& voc, const SolverOptions& options = {}) {
  return valid(f, std::make_shared<const Vocabulary>(voc), options);
}

struct BruteForceOptions {
  /// Refuse when more decision tables than this would be enumerated.
  std::uint64_t table_cap = std::uint64_t{1} << 22;
};

/// Satisfiability by enumerating every decision table (every table
/// depending only on Atm0 over an epistemic vocabulary) and evaluating f with
/// the model checker. Tables are visited in counting order with state 0 as
/// the least significant digit.
inline SatResult brute_force_sat(const Formula& f, std::shared_ptr<const Vocabulary> voc,
                                 BruteForceOptions options = {}) {
  const FeatureSet tie = voc->is_epistemic() ? voc->basic_features() : voc->all_features();
  // digit_of[i]: position of the state i ∩ tie among the free states.
  std::vector<std::size_t> digit_of(voc->state_count());
  std::size_t free_states = 0;
  for (std::size_t i = 0; i < voc->state_count(); ++i) {
    const auto key = (State(static_cast<FeatureSet::Bits>(i)) & tie).bits();
    digit_of[i] = key == i ? free_states++ : digit_of[key];
  }
  const auto values = voc->value_count();
  const double count = std::pow(static_cast<double>(values), static_cast<double>(free_states));
  if (count > static_cast<double>(options.table_cap)) {
    throw CapError("brute-force enumeration would visit more than " +
                   std::to_string(options.table_cap) + " decision tables");
  }
  std::vector<ValueId> digits(free_states, 0);
  SatResult out;
  while (true) {
    std::vector<ValueId> table(voc->state_count());
    for (std::size_t i = 0; i < table.size(); ++i) table[i] = digits[digit_of[i]];
    ClassifierModel c(voc, std::move(table));
    const StateSet ext = extension(c, f, EvalOptions{voc->feature_count()});
    if (!ext.empty()) {
      out.satisfiable = true;
      out.witness = Witness{std::move(c), ext.members().front()};
      return out;
    }
    std::size_t k = 0;
    while (k < digits.size() && ++digits[k] == values) digits[k++] = 0;
    if (k == digits.size()) return out;
  }
}

inline SatResult brute_force_sat(const Formula& f, const Vocabulary& voc, BruteForceOptions options = {}) {
  return brute_force_sat(f, std::make_shared<const Vocabulary>(voc), options);
}

inline bool brute_force_valid(const Formula& f, std::shared_ptr<const Vocabulary> voc,
                              BruteForceOptions options = {}) {
  return !brute_force_sat(neg(f), std::move(voc), options).satisfiable;
}

/// One checked instance of an axiom schema or rule.
struct AxiomInstance {
  std::string schema;
  Formula formula;
  bool valid;
};

struct AxiomReport {
  std::vector<AxiomInstance> instances;

  bool all_valid() const {
    for (const auto& i : instances) {
      if (!i.valid) return false;
    }
    return true;
  }
  std::vector<AxiomInstance> failures() const {
    std::vector<AxiomInstance> out;
    for (const auto& i : instances) {
      if (!i.valid) out.push_back(i);
    }
    return out;
  }
};

struct AxiomSuiteOptions {
  std::uint64_t seed = 1;
  /// Random instances per schema (schemas without subformulas get one per
  /// choice of their parameters).
  std::size_t instances = 8;
  std::size_t depth = 2;
  SolverOptions solver{};
};

/// Instances of K, T, 4, B, Red (for [∅]), AtLeast, AtMost, Def and Comp
/// with random subformulas, each checked for validity, plus spot checks of
/// the Nec and MP rules on valid instances.
inline AxiomReport axiom_suite(std::shared_ptr<const Vocabulary> voc, AxiomSuiteOptions options = {}) {
  const Vocabulary& v = *voc;
  FormulaGenOptions gen_options;
  gen_options.max_depth = options.depth;
  FormulaGenerator gen(v, options.seed, gen_options);
  AxiomReport report;
  auto check = [&](std::string schema, Formula f) {
    const bool ok = valid(f, voc, options.solver).valid;
    report.instances.push_back({std::move(schema), std::move(f), ok});
  };
  const FeatureSet features = v.all_features();
  const FeatureSet none{};

  for (std::size_t i = 0; i < options.instances; ++i) {
    const Formula phi = gen();
    const Formula psi = gen();
    check("K", implies(conj(box(none, phi), box(none, implies(phi, psi))), box(none, psi)));
    check("T", implies(box(none, phi), phi));
    check("4", implies(box(none, phi), box(none, box(none, phi))));
    check("B", implies(phi, box(none, diamond(none, phi))));
    const FeatureSet x = gen.index_set();
    std::vector<Formula> red;
    for_each_subset(x, [&](FeatureSet y) {
      red.push_back(implies(cn(y, x), box(none, implies(cn(y, x), phi))));
    });
    check("Red", iff(box(x, phi), conj_all(red)));
  }
  check("AtLeast", some_decision(v));
  for (ValueId x = 0; x < v.value_count(); ++x) {
    for (ValueId y = 0; y < v.value_count(); ++y) {
      if (x != y) check("AtMost", implies(decision(x), neg(decision(y))));
    }
    std::vector<Formula> def;
    for_each_subset(features, [&](FeatureSet y) {
      def.push_back(implies(conj(cn(y, features), decision(x)),
                            box(none, implies(cn(y, features), decision(x)))));
    });
    check("Def", conj_all(def));
  }
  std::vector<Formula> comp;
  for_each_subset(features, [&](FeatureSet y) { comp.push_back(diamond(none, cn(y, features))); });
  check("Comp", conj_all(comp));

  // Rules: every instance found valid above must stay valid under [∅], and
  // modus ponens from a valid φ and a valid φ → ψ must give a valid ψ.
  const std::size_t axioms = report.instances.size();
  for (std::size_t i = 0; i < axioms; ++i) {
    if (!report.instances[i].valid || i % 3 != 0) continue;
    check("Nec", box(none, report.instances[i].formula));
    const Formula phi = report.instances[i].formula;
    const Formula psi = disj(gen(), phi);
    if (valid(implies(phi, psi), voc, options.solver).valid) check("MP", psi);
  }
  return report;
}

inline AxiomReport axiom_suite(const Vocabulary& voc, AxiomSuiteOptions options = {}) {
  return axiom_suite(std::make_shared<const Vocabulary>(voc), options);
}

}  // namespace bcl
