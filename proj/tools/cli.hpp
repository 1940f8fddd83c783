#pragma once

#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bcl/bcl.hpp"

namespace bcl::cli {

using Json = nlohmann::ordered_json;

enum ExitCode { kTrue = 0, kFalse = 1, kUsage = 2 };

struct Options {
  std::string model;
  std::string state;
  std::string formula;
  std::string kind = "axp";
  std::string value;
  std::string protected_list;
  std::string emit_cnf;
  std::string data;
  std::size_t cap = 0;
  bool json = false;
};

namespace detail {

struct Context {
  const Options& opt;
  std::ostream& out;
  ModelDocument doc;

  const Vocabulary& voc() const { return *doc.vocabulary; }
  std::size_t width() const { return voc().feature_count(); }
  std::string bits(State s) const { return state_bits(s, width()); }

  const ClassifierModel& model() const {
    if (!doc.model) throw Error(opt.model + ": the file declares a vocabulary but no table or rules");
    return *doc.model;
  }
  State state() const {
    if (opt.state.empty()) throw Error("this command needs -s/--state");
    return parse_state(opt.state, width());
  }
  Formula formula() const {
    if (opt.formula.empty()) throw Error("this command needs -f/--formula");
    try {
      return parse_formula(opt.formula, voc());
    } catch (const Error& e) {
      throw Error("formula '" + opt.formula + "': " + e.what());
    }
  }
  EvalOptions eval_options() const {
    EvalOptions o;
    if (opt.cap) o.feature_cap = opt.cap;
    return o;
  }
  SolverOptions solver_options() const {
    SolverOptions o;
    if (opt.cap) o.feature_cap = opt.cap;
    return o;
  }
  ValueId value_or(ValueId fallback) const {
    return opt.value.empty() ? fallback : voc().value(opt.value);
  }
  FeatureSet protected_set() const {
    if (opt.protected_list.empty()) return voc().protected_features();
    FeatureSet out;
    for (const auto& n : bcl::detail::split_names(opt.protected_list)) out.insert(voc().feature(n));
    return out;
  }
  std::string render(const Formula& f) const { return render_formula(f, voc()); }

  Json table_json(const ClassifierModel& c) const {
    Json t = Json::object();
    for_each_state(c, [&](State s) { t[bits(s)] = voc().value_name(c.classify(s)); });
    return t;
  }
  void print_table(const ClassifierModel& c) const {
    for_each_state(c, [&](State s) {
      out << "  " << bits(s) << " -> " << voc().value_name(c.classify(s)) << '\n';
    });
  }

  int emit(const Json& j, const std::string& text, bool verdict) const {
    if (opt.json) {
      out << j.dump(2) << '\n';
    } else {
      out << text;
      if (!text.empty() && text.back() != '\n') out << '\n';
    }
    return verdict ? kTrue : kFalse;
  }
};

inline Json base_json(const std::string& command) {
  Json j;
  j["command"] = command;
  return j;
}

inline int cmd_check(Context& cx) {
  const State s = cx.state();
  const Formula f = cx.formula();
  const bool r = satisfies(cx.model(), s, f, cx.eval_options());
  Json j = base_json("check");
  j["state"] = cx.bits(s);
  j["formula"] = cx.render(f);
  j["result"] = r;
  return cx.emit(j, r ? "true" : "false", r);
}

inline int cmd_valid_in_model(Context& cx) {
  const Formula f = cx.formula();
  const StateSet ext = extension(cx.model(), f, cx.eval_options());
  std::vector<std::string> counter;
  for (auto s : ext.complement().members()) counter.push_back(cx.bits(s));
  const bool r = counter.empty();
  Json j = base_json("valid-in-model");
  j["formula"] = cx.render(f);
  j["result"] = r;
  j["counterexamples"] = counter;
  return cx.emit(j, r ? "true" : "false; counterexample " + counter.front(), r);
}

inline void write_cnf(const Context& cx, const Formula& f) {
  if (cx.opt.emit_cnf.empty()) return;
  std::ofstream file(cx.opt.emit_cnf);
  if (!file) throw Error("cannot write '" + cx.opt.emit_cnf + "'");
  write_dimacs(file, ground_cnf(f, cx.doc.vocabulary, cx.solver_options()));
}

inline Json witness_json(const Context& cx, const Witness& w) {
  Json j;
  j["state"] = cx.bits(w.state);
  j["table"] = cx.table_json(w.model);
  return j;
}

inline std::string witness_text(const Context& cx, const Witness& w, const std::string& label) {
  std::ostringstream t;
  t << label << " state " << cx.bits(w.state) << '\n' << "table:\n";
  for_each_state(w.model, [&](State s) {
    t << "  " << cx.bits(s) << " -> " << cx.voc().value_name(w.model.classify(s)) << '\n';
  });
  return t.str();
}

inline int cmd_sat(Context& cx) {
  const Formula f = cx.formula();
  write_cnf(cx, f);
  const SatResult r = sat(f, cx.doc.vocabulary, cx.solver_options());
  Json j = base_json("sat");
  j["formula"] = cx.render(f);
  j["result"] = r.satisfiable ? "SAT" : "UNSAT";
  j["variables"] = r.variables;
  j["clauses"] = r.clauses;
  if (r.witness) j["witness"] = witness_json(cx, *r.witness);
  std::string text = r.satisfiable ? "SAT\n" + witness_text(cx, *r.witness, "witness") : "UNSAT";
  return cx.emit(j, text, r.satisfiable);
}

inline int cmd_valid(Context& cx) {
  const Formula f = cx.formula();
  write_cnf(cx, neg(f));
  const ValidityResult r = valid(f, cx.doc.vocabulary, cx.solver_options());
  Json j = base_json("valid");
  j["formula"] = cx.render(f);
  j["result"] = r.valid;
  if (r.counterexample) j["counterexample"] = witness_json(cx, *r.counterexample);
  std::string text = r.valid ? "valid" : "not valid\n" + witness_text(cx, *r.counterexample, "counterexample");
  return cx.emit(j, text, r.valid);
}

inline int cmd_cf(Context& cx) {
  const ClassifierModel& c = cx.model();
  const State s = cx.state();
  Json j = base_json("cf");
  j["state"] = cx.bits(s);
  if (cx.opt.formula.empty()) {
    if (cx.opt.value.empty()) throw Error("cf needs -f with a counterfactual, or --x for an approximate decision");
    const ValueId x = cx.voc().value(cx.opt.value);
    const bool r = appr_dec(c, s, x, cx.eval_options());
    j["approximate_decision"] = cx.voc().value_name(x);
    j["result"] = r;
    return cx.emit(j, r ? "true" : "false", r);
  }
  const Formula f = cx.formula();
  if (f.op() != Op::kCounterfactual) throw Error("cf needs a counterfactual formula such as '(p => t(x))'");
  const auto near = closest(c, s, f.lhs(), f.index(), cx.eval_options());
  const bool r = eval_counterfactual(c, s, f.lhs(), f.rhs(), f.index(), cx.eval_options());
  std::vector<std::string> near_bits;
  for (auto t : near) near_bits.push_back(cx.bits(t));
  j["formula"] = cx.render(f);
  j["closest"] = near_bits;
  j["result"] = r;
  std::string text = r ? "true" : "false";
  text += "; closest";
  if (near_bits.empty()) text += " (none)";
  for (const auto& b : near_bits) text += " " + b;
  return cx.emit(j, text, r);
}

inline int cmd_explain(Context& cx) {
  const ClassifierModel& c = cx.model();
  const std::string& kind = cx.opt.kind;
  std::vector<Term> terms;
  Json j = base_json("explain");
  j["kind"] = kind;
  ValueId x;
  if (kind == "pimp") {
    if (cx.opt.value.empty() && cx.opt.state.empty()) throw Error("explain --kind pimp needs --x or -s");
    x = cx.opt.state.empty() ? cx.voc().value(cx.opt.value) : cx.value_or(c.classify(cx.state()));
    terms = prime_implicants(c, x);
  } else if (kind == "axp" || kind == "cxp") {
    const State s = cx.state();
    x = cx.value_or(c.classify(s));
    j["state"] = cx.bits(s);
    for (const auto& e : kind == "axp" ? enumerate_axp(c, s, x) : enumerate_cxp(c, s, x)) {
      terms.push_back(e.term);
    }
  } else {
    throw Error("unknown --kind '" + kind + "'; expected axp, cxp or pimp");
  }
  j["value"] = cx.voc().value_name(x);
  std::vector<std::string> rendered;
  for (const auto& t : terms) rendered.push_back(t.render(cx.voc()));
  j["terms"] = rendered;
  std::string text;
  for (const auto& r : rendered) text += r + "\n";
  if (rendered.empty()) text = "(none)";
  return cx.emit(j, text, !rendered.empty());
}

inline int cmd_bias(Context& cx) {
  const ClassifierModel& c = cx.model();
  const State s = cx.state();
  const FeatureSet pf = cx.protected_set();
  const auto witnesses = bias_witnesses(c, s, pf);
  const auto nearest = nearest_bias_witness(c, s, pf);
  std::vector<std::string> names, bits;
  for (auto i : pf.indices()) names.push_back(cx.voc().feature_name(i));
  for (auto w : witnesses) bits.push_back(cx.bits(w));
  const bool r = !witnesses.empty();
  Json j = base_json("bias");
  j["state"] = cx.bits(s);
  j["value"] = cx.voc().value_name(c.classify(s));
  j["protected"] = names;
  j["biased"] = r;
  j["witnesses"] = bits;
  if (nearest) j["nearest"] = cx.bits(*nearest);
  return cx.emit(j, r ? "biased: true; witness " + cx.bits(*nearest) : "biased: false", r);
}

inline int cmd_props(Context& cx) {
  const ClassifierModel& c = cx.model();
  const FeatureSet ess = essential_set(c);
  std::vector<std::string> names;
  for (auto i : ess.indices()) names.push_back(cx.voc().feature_name(i));
  const bool nontrivial = check_nontrivial(c, c.features());
  Json counts = Json::object();
  for (ValueId v = 0; v < cx.voc().value_count(); ++v) {
    std::size_t n = 0;
    for (auto w : c.table()) n += w == v;
    counts[cx.voc().value_name(v)] = n;
  }
  Json j = base_json("props");
  j["features"] = cx.voc().features();
  j["essential"] = names;
  j["nontrivial"] = nontrivial;
  j["value_counts"] = counts;
  std::string text = "essential: " + (names.empty() ? std::string("(none)") : bcl::detail::join(names)) +
                     "\nnontrivial: " + (nontrivial ? "true" : "false") + "\n";
  for (auto it = counts.begin(); it != counts.end(); ++it) {
    text += "value " + it.key() + ": " + std::to_string(it.value().get<std::size_t>()) + " states\n";
  }
  return cx.emit(j, text, true);
}

inline int cmd_update(Context& cx) {
  const ClassifierModel& c = cx.model();
  if (cx.opt.value.empty()) throw Error("update needs --x VALUE");
  const ValueId x = cx.voc().value(cx.opt.value);
  const Formula f = cx.formula();
  const ClassifierModel updated = apply_assignment(c, x, f, cx.eval_options());
  std::vector<std::string> changed;
  for_each_state(c, [&](State s) {
    if (c.classify(s) != updated.classify(s)) changed.push_back(cx.bits(s));
  });
  Json j = base_json("update");
  j["value"] = cx.voc().value_name(x);
  j["context"] = cx.render(f);
  j["reclassified"] = changed;
  j["table"] = cx.table_json(updated);
  std::ostringstream text;
  text << "# reclassified " << changed.size() << " state" << (changed.size() == 1 ? "" : "s") << '\n';
  write_model(text, updated);
  return cx.emit(j, text.str(), true);
}

inline int cmd_train(Context& cx) {
  if (cx.opt.data.empty()) throw Error("train needs --data FILE");
  std::vector<TrainingPair> pairs;
  try {
    pairs = parse_training(read_file(cx.opt.data), cx.voc());
  } catch (const Error& e) {
    throw Error(cx.opt.data + ": " + e.what());
  }
  const TrainingResult r = train(cx.voc(), pairs, cx.eval_options());
  Json j = base_json("train");
  j["pairs"] = pairs.size();
  j["trained"] = cx.table_json(r.trained);
  j["induced"] = cx.table_json(r.induced);
  std::ostringstream text;
  text << "trained:\n";
  for_each_state(r.trained, [&](State s) {
    text << "  " << cx.bits(s) << " -> " << cx.voc().value_name(r.trained.classify(s)) << '\n';
  });
  text << "induced:\n";
  for_each_state(r.induced, [&](State s) {
    text << "  " << cx.bits(s) << " -> " << cx.voc().value_name(r.induced.classify(s)) << '\n';
  });
  return cx.emit(j, text.str(), true);
}

inline int cmd_ecm_check(Context& cx) {
  const ClassifierModel& c = cx.model();
  if (!cx.voc().is_epistemic()) throw Error(cx.opt.model + ": ecm-check needs a 'basic:' vocabulary");
  Json j = base_json("ecm-check");
  const auto violation = find_dependence_violation(c);
  j["valid_ecm"] = !violation;
  if (violation) {
    j["witness"] = {cx.bits(violation->first), cx.bits(violation->second)};
    return cx.emit(j,
                   "ecm: invalid; states " + cx.bits(violation->first) + " and " +
                       cx.bits(violation->second) + " agree on the basic atoms but differ in value",
                   false);
  }
  const EpistemicClassifierModel e = build_ecm(c);
  std::map<std::string, std::vector<std::string>> classes;
  for_each_state(c, [&](State s) { classes[cx.bits(e.class_key(s))].push_back(cx.bits(s)); });
  Json cls = Json::array();
  for (const auto& [key, members] : classes) cls.push_back(members);
  j["classes"] = cls;
  std::string text = "ecm: ok; " + std::to_string(classes.size()) + " indistinguishability classes";
  if (cx.opt.formula.empty()) return cx.emit(j, text, true);
  const State s = cx.state();
  const Formula f = cx.formula();
  const bool r = satisfies_epistemic(e, s, f, cx.eval_options());
  j["state"] = cx.bits(s);
  j["formula"] = cx.render(f);
  j["result"] = r;
  return cx.emit(j, text + "\n" + (r ? "true" : "false"), r);
}

}  // namespace detail

/// Runs one command line. Returns 0 when the query is answered true or
/// SAT, 1 when false or UNSAT, 2 on usage or input errors.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Reason about classifiers as logical models"};
  app.require_subcommand(1);
  Options opt;

  struct Spec {
    const char* name;
    const char* help;
    int (*fn)(detail::Context&);
  };
  const Spec specs[] = {
      {"check", "evaluate a formula at a state", detail::cmd_check},
      {"valid-in-model", "check a formula at every state", detail::cmd_valid_in_model},
      {"sat", "decide satisfiability over all models of the vocabulary", detail::cmd_sat},
      {"valid", "decide validity over all models of the vocabulary", detail::cmd_valid},
      {"cf", "evaluate a counterfactual or an approximate decision", detail::cmd_cf},
      {"explain", "list abductive or contrastive explanations, or prime implicants", detail::cmd_explain},
      {"bias", "check whether the decision at a state is biased", detail::cmd_bias},
      {"props", "report the essential features of a model", detail::cmd_props},
      {"update", "apply an assignment and print the updated model", detail::cmd_update},
      {"train", "train an ignorant model and induce approximate decisions", detail::cmd_train},
      {"ecm-check", "validate an epistemic model and evaluate K formulas", detail::cmd_ecm_check},
  };
  std::vector<std::pair<CLI::App*, int (*)(detail::Context&)>> subs;
  for (const auto& spec : specs) {
    CLI::App* sub = app.add_subcommand(spec.name, spec.help);
    sub->add_option("-m,--model", opt.model, "model file")->required();
    sub->add_option("-s,--state", opt.state, "state as a bitstring in feature order");
    sub->add_option("-f,--formula", opt.formula, "formula");
    sub->add_option("--kind", opt.kind, "axp, cxp or pimp");
    sub->add_option("--x", opt.value, "decision value");
    sub->add_option("--protected", opt.protected_list, "comma-separated protected features");
    sub->add_option("--emit-cnf", opt.emit_cnf, "write the grounded CNF in DIMACS format");
    sub->add_option("--data", opt.data, "training file");
    sub->add_option("--cap", opt.cap, "feature-count cap");
    sub->add_flag("--json", opt.json, "structured output");
    subs.emplace_back(sub, spec.fn);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kTrue : kUsage;
  }
  try {
    for (auto& [sub, fn] : subs) {
      if (!sub->parsed()) continue;
      detail::Context cx{opt, out, load_model(opt.model)};
      return fn(cx);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace bcl::cli
