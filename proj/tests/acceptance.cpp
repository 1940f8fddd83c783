// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails. Every comparison is exact.

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "bcl/bcl.hpp"
#include "cli.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace bcl;

namespace {

// Collects the first few failures of a criterion.
class Check {
 public:
  void expect(bool ok, const std::string& what) {
    ++checks_;
    if (!ok && failures_.size() < 5) failures_.push_back(what);
    if (!ok) ++failed_;
  }
  bool ok() const { return failed_ == 0; }
  std::size_t checks() const { return checks_; }
  std::string summary() const {
    std::string out = std::to_string(failed_) + " of " + std::to_string(checks_) + " checks failed";
    for (const auto& f : failures_) out += "\n    " + f;
    return out;
  }

 private:
  std::size_t checks_ = 0, failed_ = 0;
  std::vector<std::string> failures_;
};

template <typename Fn>
void over_models(std::size_t max_width, std::size_t values, Fn&& fn) {
  for (std::size_t w = 0; w <= max_width; ++w) fixtures::for_each_model(fixtures::plain_vocabulary(w, values), fn);
}

std::vector<std::string> rendered(const std::vector<Explanation>& xs, const Vocabulary& voc) {
  std::vector<std::string> out;
  for (const auto& x : xs) out.push_back(x.term.render(voc));
  return out;
}

void worked_examples(Check& ck) {
  const auto fig = fixtures::colours();
  const auto& fv = fig.vocabulary();
  ck.expect(satisfies(fig, State(0b00), parse_formula("[q] t(blue)", fv)), "colours: {} |= [q] t(blue)");
  ck.expect(is_prime_implicant(fig, fixtures::term("~q", fv), fv.value("blue")), "colours: PImp(~q, blue)");

  const auto a = fixtures::alice();
  const auto& av = a.vocabulary();
  const State s = fixtures::alice_state();
  ck.expect(a.classify(s) == av.value("y"), "alice: f(s) = y");
  ck.expect(rendered(enumerate_axp(a, s), av) == std::vector<std::string>{"~p1 & ~q2"}, "alice: AXp");
  ck.expect(rendered(enumerate_cxp(a, s), av) == std::vector<std::string>{"~p1", "~q2"}, "alice: CXp");
  ck.expect(av.protected_features() == FeatureSet(0b0011) && check_bias(a, s), "alice: Bias(y)");
  ck.expect(satisfies(a, s, parse_formula("(p1 => t(x))", av)), "alice: p1 => t(x)");

  const auto eye = fixtures::eye();
  ck.expect(essential_set(eye) == FeatureSet(0b111001), "eye: essential set {p0, p3, p4, p5}");

  const auto f5 = fixtures::centering();
  ck.expect(closest(f5, State(0b11), feature(0), {}) == std::vector<State>{State(0b01), State(0b11)},
            "centering: Closest = {s, s'}");
}

void propositions(Check& ck) {
  // Definite, essential and non-trivial sets over every table with at most 3
  // features and 2 values.
  over_models(3, 2, [&](const ClassifierModel& c) {
    const auto m = oracle::raw(c);
    const FeatureSet all = c.features();
    const FeatureSet ess = essential_set(c);
    ck.expect(check_definite(c, all), "the full set is definite");
    ck.expect(check_definite(c, ess), "the essential set is definite");
    std::size_t minimal_definite = 0;
    bool some_nontrivial = false;
    for_each_subset(all, [&](FeatureSet x) {
      const bool def = check_definite(c, x);
      ck.expect(def == oracle::definite(m, x), "definite agrees with the pair scan");
      ck.expect(check_nontrivial(c, x) == oracle::nontrivial(m, x), "nontrivial agrees with the pair scan");
      some_nontrivial = some_nontrivial || check_nontrivial(c, x);
      if (!def) return;
      bool minimal = true;
      for (auto i : x.indices()) minimal = minimal && !check_definite(c, x.without(i));
      minimal_definite += minimal;
      ck.expect(ess.subset_of(x), "the essential set is below every definite set");
      for_each_subset(all, [&](FeatureSet y) {
        if (x.subset_of(y)) ck.expect(check_definite(c, y), "definiteness is upward closed");
        if (!c.is_constant() && (x & y).empty()) ck.expect(!check_definite(c, y), "disjoint sets are not both definite");
      });
    });
    ck.expect(minimal_definite == 1, "the essential set is unique");
    for_each_subset(all, [&](FeatureSet y) {
      if (!y.empty()) ck.expect(check_nontrivial(c, y) == some_nontrivial, "non-triviality is all or nothing");
    });
  });

  // Direct and expanded counterfactuals agree for every index.
  for (std::size_t w = 1; w <= 3; ++w) {
    auto voc = fixtures::plain_vocabulary(w, 2);
    FormulaGenerator gen(*voc, 200 + w, FormulaGenOptions{2});
    std::vector<std::pair<Formula, Formula>> pairs;
    for (int i = 0; i < 6; ++i) pairs.emplace_back(gen(), gen());
    fixtures::for_each_model(voc, [&](const ClassifierModel& c) {
      for (const auto& [f, g] : pairs) {
        for_each_subset(c.features(), [&](FeatureSet x) {
          const Formula cf = counterfactual(x, f, g);
          ck.expect(extension(c, cf) == extension(c, expand_counterfactual(cf)), "expansion: " + render_formula(cf, *voc));
        });
      }
    });
  }

  over_models(3, 2, [&](const ClassifierModel& c) {
    const FeatureSet all = c.features();
    for_each_state(c, [&](State s) {
      const auto axps = enumerate_axp(c, s);
      ck.expect(!axps.empty(), "an AXp exists");
      for (const auto& e : axps) ck.expect(check_axp(c, s, e.term, c.classify(s)), "enumerated AXps check");
      const auto cxps = enumerate_cxp(c, s);
      for (const auto& e : cxps) {
        ck.expect(eval_counterfactual(c, s, e.term.flipped().to_formula(), neg(decision(e.value)), all), "a CXp flip is a counterfactual");
      }
      for_each_subset(all, [&](FeatureSet pf) {
        if (pf.empty()) return;
        bool protected_cxp = false;
        for (const auto& e : cxps) protected_cxp = protected_cxp || e.term.atoms().subset_of(pf);
        ck.expect(check_bias(c, s, pf) == protected_cxp, "bias iff a protected CXp");
      });
    });
  });

  // The converse fails on Alice.
  const auto a = fixtures::alice();
  const auto& av = a.vocabulary();
  const Term wider = fixtures::term("~p1 & ~q2", av);
  ck.expect(eval_counterfactual(a, fixtures::alice_state(), wider.flipped().to_formula(), neg(decision(av.value("y"))),
                                a.features()) &&
                !check_cxp(a, fixtures::alice_state(), wider, av.value("y")),
            "counterfactual without a CXp");

  // Compiled formulas against the direct procedures.
  for (std::size_t w = 0; w <= 3; ++w) {
    auto voc = fixtures::plain_vocabulary(w, 2);
    const auto terms = oracle::all_terms(w);
    fixtures::for_each_model(voc, [&](const ClassifierModel& c) {
      for (ValueId x = 0; x < 2; ++x) {
        for (const auto& rt : terms) {
          const Term t(rt.pos, rt.neg);
          const auto pimp = extension(c, compile_characterization(ExplanationKind::kPImp, *voc, t, x));
          const auto axp = extension(c, compile_characterization(ExplanationKind::kAXp, *voc, t, x));
          const auto cxp = extension(c, compile_characterization(ExplanationKind::kCXp, *voc, t, x));
          for_each_state(c, [&](State s) {
            ck.expect(pimp.contains(s) == is_prime_implicant(c, t, x), "PImp compiled");
            ck.expect(axp.contains(s) == check_axp(c, s, t, x), "AXp compiled");
            ck.expect(cxp.contains(s) == check_cxp(c, s, t, x), "CXp compiled");
          });
        }
        for_each_subset(c.features(), [&](FeatureSet pf) {
          if (pf.empty()) return;
          const auto bias = extension(c, compile_characterization(ExplanationKind::kBias, *voc, Term(), x, pf));
          for_each_state(c, [&](State s) {
            ck.expect(bias.contains(s) == (c.classify(s) == x && check_bias(c, s, pf)), "Bias compiled");
          });
        });
      }
    });
  }
}

std::vector<Formula> epistemic_validities(const Vocabulary& voc) {
  std::vector<Formula> out, seen;
  for (std::size_t p = 0; p < voc.basic_count(); ++p) {
    const Formula atom = feature(p), o = feature(voc.observability_of(p));
    out.push_back(implies(o, conj(implies(atom, know(atom)), implies(neg(atom), know(neg(atom))))));
    out.push_back(iff(o, know(o)));
    seen.push_back(o);
  }
  for (ValueId x = 0; x < voc.value_count(); ++x) {
    out.push_back(implies(conj(conj_all(seen), decision(x)), know(decision(x))));
  }
  return out;
}

void soundness(Check& ck) {
  const char* schemas[] = {"K", "T", "4", "B", "Red", "AtLeast", "AtMost", "Def", "Comp", "Nec"};
  for (std::size_t w = 1; w <= 3; ++w) {
    for (std::size_t v = 2; v <= 3; ++v) {
      AxiomSuiteOptions opt;
      opt.seed = 10 * w + v;
      const auto report = axiom_suite(fixtures::plain_vocabulary(w, v), opt);
      for (const auto& i : report.instances) ck.expect(i.valid, "axiom " + i.schema);
      for (const char* s : schemas) {
        bool present = false;
        for (const auto& i : report.instances) present = present || i.schema == s;
        ck.expect(present, std::string("axiom schema present: ") + s);
      }
    }
  }

  // Reduction axioms for assignments, instance by instance and by rewriting.
  for (std::size_t w = 1; w <= 3; ++w) {
    auto voc = fixtures::plain_vocabulary(w, 2);
    FormulaGenOptions opt;
    opt.max_depth = 3;
    opt.assignments = true;
    opt.counterfactuals = true;
    FormulaGenerator gen(*voc, 300 + w, opt);
    std::vector<Formula> laws, corpus;
    for (int i = 0; i < 4; ++i) {
      const Formula phi = gen(), psi = gen(), chi = gen();
      const FeatureSet x = gen.index_set();
      laws.push_back(iff(assign(0, phi, decision(0)), disj(phi, decision(0))));
      laws.push_back(iff(assign(0, phi, decision(1)), conj(neg(phi), decision(1))));
      laws.push_back(iff(assign(1, phi, feature(0)), feature(0)));
      laws.push_back(iff(assign(0, phi, neg(psi)), neg(assign(0, phi, psi))));
      laws.push_back(iff(assign(1, phi, conj(psi, chi)), conj(assign(1, phi, psi), assign(1, phi, chi))));
      laws.push_back(iff(assign(0, phi, box(x, psi)), box(x, assign(0, phi, psi))));
    }
    while (corpus.size() < 20) {
      const Formula f = gen();
      if (contains_op(f, Op::kAssign)) corpus.push_back(f);
    }
    fixtures::for_each_model(voc, [&](const ClassifierModel& c) {
      for (const auto& law : laws) ck.expect(valid_in_model(c, law), "reduction axiom " + render_formula(law, *voc));
      for (const auto& f : corpus) {
        ck.expect(extension(c, f) == extension(c, rewrite_dynamic(f)), "rewrite " + render_formula(f, *voc));
      }
    });
  }

  // Observability validities and the K reduction on every ECM with at most 2 basic atoms.
  for (std::size_t basic = 1; basic <= 2; ++basic) {
    auto voc = fixtures::epistemic_vocabulary(basic, 2);
    const auto laws = epistemic_validities(*voc);
    FormulaGenOptions opt;
    opt.knowledge = true;
    FormulaGenerator gen(*voc, 400 + basic, opt);
    std::vector<Formula> phis;
    for (int i = 0; i < 15; ++i) phis.push_back(gen());
    fixtures::for_each_ecm(voc, [&](const EpistemicClassifierModel& e) {
      for (const auto& law : laws) ck.expect(valid_in_model(e.model(), law), "validity " + render_formula(law, *voc));
      for (const auto& phi : phis) {
        ck.expect(valid_in_model(e.model(), iff(know(phi), reduce_knowledge(*voc, phi))),
                  "K reduction " + render_formula(phi, *voc));
        ck.expect(extension(e.model(), know(phi)) == extension(e.model(), rewrite_epistemic(*voc, know(phi))),
                  "K rewrite " + render_formula(phi, *voc));
      }
    });
  }
}

void solver_agreement(Check& ck) {
  std::size_t formulas = 0;
  for (std::size_t w = 2; w <= 3; ++w) {
    auto voc = fixtures::plain_vocabulary(w, 2);
    FormulaGenOptions opt;
    opt.max_depth = 3;
    opt.counterfactuals = true;
    opt.assignments = true;
    FormulaGenerator gen(*voc, 500 + w, opt);
    for (int i = 0; i < 500; ++i, ++formulas) {
      const Formula f = gen();
      const std::string text = render_formula(f, *voc);
      const auto r = sat(f, voc);
      ck.expect(r.satisfiable == brute_force_sat(f, voc).satisfiable, "sat vs brute force: " + text);
      ck.expect(r.satisfiable == oracle::satisfiable(*voc, f), "sat vs enumeration: " + text);
      if (r.satisfiable) ck.expect(satisfies(r.witness->model, r.witness->state, f), "witness replay: " + text);
      const auto v = valid(f, voc);
      ck.expect(v.valid == brute_force_valid(f, voc), "valid vs brute force: " + text);
      if (!v.valid) {
        ck.expect(!satisfies(v.counterexample->model, v.counterexample->state, f), "counterexample replay: " + text);
      }
    }
  }
  ck.expect(formulas >= 1000, "at least 1000 formulas");
}

void approximate_decisions(Check& ck) {
  for (std::size_t w = 1; w <= 2; ++w) {
    std::vector<std::string> fs;
    for (std::size_t i = 0; i < w; ++i) fs.push_back("f" + std::to_string(i));
    auto voc = std::make_shared<const Vocabulary>(Vocabulary::make(fs, {"x", "y", "?"}));
    const ValueId x = 0, y = 1, u = 2;
    const Formula ax = appr_dec_formula(*voc, x), ay = appr_dec_formula(*voc, y);
    fixtures::for_each_model(voc, [&](const ClassifierModel& c) {
      for (ValueId v : {x, y}) ck.expect(valid_in_model(c, implies(decision(v), appr_dec_formula(*voc, v))), "t(x) -> apprDec(x)");
      const bool decided = !c.is_constant() || c.table()[0] != u;
      if (decided) {
        ck.expect(valid_in_model(c, neg(conj(ax, ay))), "apprDec(x) & apprDec(y) is unsatisfiable");
      } else {
        // Every state abstains: both approximate decisions hold vacuously.
        ck.expect(valid_in_model(c, conj(ax, ay)), "all-? model is vacuous");
      }
    });
  }
  auto voc = std::make_shared<const Vocabulary>(Vocabulary::make({"p", "q"}, {"x", "y", "?"}));
  const ClassifierModel split(voc, {1, 2, 2, 0});
  const Formula any = disj(appr_dec_formula(*voc, 0), appr_dec_formula(*voc, 1));
  ck.expect(!satisfies(split, State(0b01), any), "stored non-validity witness");
}

std::string run_cli(std::vector<std::string> args, int& code) {
  args.insert(args.begin(), "bcl");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return out.str();
}

void determinism(Check& ck) {
  const auto m = fixtures::model_path;
  const std::vector<std::pair<std::vector<std::string>, std::string>> cases{
      {{"check", "-m", m("colours.bcl"), "-s", "00", "-f", "[q] t(blue)"}, "colours_check.json"},
      {{"explain", "-m", m("colours.bcl"), "--kind", "pimp", "--x", "yellow"}, "colours_pimp.json"},
      {{"explain", "-m", m("alice.bcl"), "-s", "0110", "--kind", "axp"}, "alice_axp.json"},
      {{"explain", "-m", m("alice.bcl"), "-s", "0110", "--kind", "cxp"}, "alice_cxp.json"},
      {{"bias", "-m", m("alice.bcl"), "-s", "0110"}, "alice_bias.json"},
      {{"props", "-m", m("eye.bcl")}, "eye_props.json"},
      {{"ecm-check", "-m", m("lamp.bcl"), "-s", "1010", "-f", "K p"}, "lamp_ecm.json"},
  };
  for (auto [args, file] : cases) {
    args.push_back("--json");
    const std::string want = read_file(std::string(BCL_SOURCE_DIR) + "/tests/golden/" + file);
    for (int run = 0; run < 5; ++run) {
      int code = 0;
      const std::string got = run_cli(args, code);
      ck.expect(code == 0 && got == want, file + " run " + std::to_string(run));
    }
  }
}

struct Criterion {
  const char* id;
  const char* name;
  double budget_seconds;
  void (*body)(Check&);
};

}  // namespace

int main() {
  const Criterion criteria[] = {
      {"AC1", "worked-example regression", 1, worked_examples},
      {"AC2", "proposition suite", 60, propositions},
      {"AC3", "soundness suite", 60, soundness},
      {"AC4", "solver oracle equivalence", 120, solver_agreement},
      {"AC5", "approximate decisions", 0, approximate_decisions},
      {"AC6", "CLI determinism", 0, determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Check ck;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.body(ck);
    } catch (const std::exception& e) {
      ck.expect(false, std::string("exception: ") + e.what());
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_budget = c.budget_seconds == 0 || seconds <= c.budget_seconds;
    const bool pass = ck.ok() && in_budget;
    failed += !pass;
    std::printf("%s %s: %s (%zu checks, %.2f s", pass ? "PASS" : "FAIL", c.id, c.name, ck.checks(), seconds);
    if (c.budget_seconds > 0) std::printf(", budget %.0f s", c.budget_seconds);
    std::printf(")\n");
    if (!ck.ok()) std::printf("  %s\n", ck.summary().c_str());
    if (!in_budget) std::printf("  over the time budget\n");
  }
  return failed == 0 ? 0 : 1;
}
