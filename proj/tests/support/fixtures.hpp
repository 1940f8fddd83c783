#pragma once

#include <memory>
#include <string>
#include <vector>

#include "bcl/bcl.hpp"

namespace fixtures {

using namespace bcl;

inline std::string model_path(const std::string& name) {
  return std::string(BCL_SOURCE_DIR) + "/models/" + name;
}

/// pq → yellow, q → red, p → blue, ∅ → blue.
inline ClassifierModel colours() {
  Vocabulary voc = Vocabulary::make({"p", "q"}, {"yellow", "red", "blue"});
  const ValueId yellow = 0, red = 1, blue = 2;
  return build_from_table(voc, {{State(0b11), yellow}, {State(0b10), red},
                                {State(0b01), blue}, {State(0b00), blue}});
}

/// t(x) ↔ (q1 ∧ q2) ∨ (p1 ∧ q1), features p1, p2, q1, q2, PF = {p1, p2}.
inline ClassifierModel alice() {
  Vocabulary voc = Vocabulary::make({"p1", "p2", "q1", "q2"}, {"x", "y"}, {"p1", "p2"});
  const Formula rule = parse_formula("(q1 & q2) | (p1 & q1)", voc);
  return build_from_rules(voc, {{rule, voc.value("x")}}, voc.value("y"));
}

/// Alice's state {p2, q1}.
inline State alice_state() { return State(0b0110); }

/// Six receptors; "exactly three of p0, p3, p4, p5" is a triangle, all four
/// a quadrilateral, anything else other.
inline ClassifierModel eye() {
  Vocabulary voc = Vocabulary::make({"p0", "p1", "p2", "p3", "p4", "p5"},
                                    {"triangle", "quadrilateral", "other"});
  const FeatureSet core = FeatureSet(0b111001);
  std::vector<ValueId> table(voc.state_count());
  for (std::size_t i = 0; i < table.size(); ++i) {
    const auto k = (State(static_cast<FeatureSet::Bits>(i)) & core).size();
    table[i] = k == 4 ? 1 : k == 3 ? 0 : 2;
  }
  return ClassifierModel(voc, table);
}

/// Four states over p, q; only {p, q} gets x.
inline ClassifierModel centering() {
  Vocabulary voc = Vocabulary::make({"p", "q"}, {"x", "y"});
  return ClassifierModel(voc, {1, 1, 1, 0});
}

inline ClassifierModel constant(std::size_t width, std::size_t values, ValueId x) {
  std::vector<std::string> fs, vs;
  for (std::size_t i = 0; i < width; ++i) fs.push_back("f" + std::to_string(i));
  for (std::size_t i = 0; i < values; ++i) vs.push_back("v" + std::to_string(i));
  return ClassifierModel::constant(Vocabulary::make(fs, vs), x);
}

inline std::shared_ptr<const Vocabulary> plain_vocabulary(std::size_t width, std::size_t values) {
  std::vector<std::string> fs, vs;
  for (std::size_t i = 0; i < width; ++i) fs.push_back("f" + std::to_string(i));
  for (std::size_t i = 0; i < values; ++i) vs.push_back("v" + std::to_string(i));
  return std::make_shared<const Vocabulary>(Vocabulary::make(fs, vs));
}

inline std::shared_ptr<const Vocabulary> epistemic_vocabulary(std::size_t basic, std::size_t values) {
  std::vector<std::string> fs, vs;
  for (std::size_t i = 0; i < basic; ++i) fs.push_back("b" + std::to_string(i));
  for (std::size_t i = 0; i < values; ++i) vs.push_back("v" + std::to_string(i));
  return std::make_shared<const Vocabulary>(Vocabulary::epistemic(fs, vs));
}

/// Every model over a vocabulary, in table counting order.
template <typename Fn>
void for_each_model(const std::shared_ptr<const Vocabulary>& voc, Fn&& fn) {
  const std::size_t n = voc->state_count();
  std::vector<ValueId> t(n, 0);
  while (true) {
    fn(ClassifierModel(voc, t));
    std::size_t k = 0;
    while (k < n && ++t[k] == voc->value_count()) t[k++] = 0;
    if (k == n) return;
  }
}

/// Every epistemic model: tables over the basic states, lifted.
template <typename Fn>
void for_each_ecm(const std::shared_ptr<const Vocabulary>& voc, Fn&& fn) {
  const std::size_t nb = std::size_t{1} << voc->basic_count();
  std::vector<ValueId> t(nb, 0);
  while (true) {
    std::vector<ValueId> full(voc->state_count());
    for (std::size_t i = 0; i < full.size(); ++i) full[i] = t[i & (nb - 1)];
    fn(build_ecm(ClassifierModel(voc, full)));
    std::size_t k = 0;
    while (k < nb && ++t[k] == voc->value_count()) t[k++] = 0;
    if (k == nb) return;
  }
}

inline Term term(const std::string& text, const Vocabulary& voc) { return parse_term(text, voc); }

}  // namespace fixtures
