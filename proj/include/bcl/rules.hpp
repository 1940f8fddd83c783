#pragma once

#include <utility>
#include <vector>

#include "bcl/checker.hpp"
#include "bcl/error.hpp"
#include "bcl/formula.hpp"
#include "bcl/model.hpp"

namespace bcl {

struct Rule {
  Formula condition;
  ValueId value;
};

/// Each state takes the value of the first rule whose condition it
/// satisfies, else `fallback`. Conditions may only mention basic features.
inline ClassifierModel build_from_rules(Vocabulary voc, const std::vector<Rule>& rules,
                                        ValueId fallback, EvalOptions options = {}) {
  if (fallback >= voc.value_count()) throw UnknownNameError("default value is not declared");
  for (const auto& r : rules) {
    if (r.value >= voc.value_count()) throw UnknownNameError("rule value is not declared");
    const auto atoms = atoms_of(r.condition);
    if (!atoms.decisions.empty()) throw Error("rule condition mentions a decision atom");
    if (!((atoms.features | atoms.index_features) & voc.observability_features()).empty()) {
      throw Error("rule condition mentions an observability atom");
    }
    if (contains_op(r.condition, Op::kAssign) || contains_op(r.condition, Op::kKnow)) {
      throw Error("rule conditions must be static formulas over features");
    }
  }
  // Feature-only conditions do not depend on the decision table.
  const auto base = ClassifierModel::constant(std::move(voc), fallback);
  Evaluator eval(base, options);
  std::vector<ValueId> table(base.state_count(), fallback);
  std::vector<bool> assigned(base.state_count(), false);
  for (const auto& r : rules) {
    const StateSet& ext = eval.extension(r.condition);
    for (auto s : ext.members()) {
      if (assigned[s.bits()]) continue;
      assigned[s.bits()] = true;
      table[s.bits()] = r.value;
    }
  }
  return base.with_table(std::move(table));
}

}  // namespace bcl
