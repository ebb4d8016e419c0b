// Acceptance runner: prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails.
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "support.hpp"

using namespace testing_support;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

const Obligation* find(const Report& r, const std::string& name) {
  for (const auto& o : r.obligations)
    if (o.name == name) return &o;
  return nullptr;
}

// ---------------------------------------------------------------------- 1

Outcome shopping_correctness() {
  Outcome out;
  auto t0 = Clock::now();
  Agent a = load_fixture("shopping");
  Report r = verify_agent(a);
  std::vector<std::string> required{"correct", "correct/oracle", "buy_T_first", "buy_I_first", "start", "step1",
                                    "step2", "done"};
  for (const char* book : {"T", "I"})
    for (const char* s : {"step3_", "carted_", "step4_", "step5_", "step6_", "step7_"})
      required.push_back(std::string(s) + book);
  std::size_t missing = 0, failing = 0;
  for (const auto& name : required) {
    const Obligation* o = find(r, name);
    if (!o) ++missing;
    else if (!o->holds) ++failing;
  }
  const Obligation* root = find(r, "correct");
  bool root_ok = root && root->holds && root->rule == "leadsto-trans";

  Formula both = parse_formula("bought_T & bought_I", *a.vocabulary());
  auto first_hit = [&](const TracePrefix& t) -> long {
    for (std::size_t i = 0; i < t.states.size(); ++i)
      if (t.states[i].believes(both)) return static_cast<long>(i);
    return -1;
  };
  long worst = first_hit(run(a, {SchedulerKind::RoundRobin, 0}, 64));
  std::size_t misses = worst < 0 ? 1 : 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    long hit = first_hit(run(a, {SchedulerKind::FairRandom, seed}, 64));
    if (hit < 0) ++misses;
    worst = std::max(worst, hit);
  }
  double secs = seconds_since(t0);
  out.pass = missing == 0 && failing == 0 && root_ok && r.all_hold() && misses == 0 && secs < 10.0;
  std::ostringstream d;
  d << required.size() << " proof obligations (" << missing << " missing, " << failing << " failing), root rule "
    << (root ? root->rule : "none") << "; 101 traces, " << misses << " without both books, latest purchase at step "
    << worst << "; " << secs << " s";
  out.detail = d.str();
  return out;
}

// ---------------------------------------------------------------------- 2

Outcome invariant_and_status() {
  Outcome out;
  Agent a = load_fixture("shopping");
  VerifyOptions opt;
  opt.only = {"inv", "status_T", "status_I"};
  for (const auto& p : a.properties())
    if (p.kind == PropertyDecl::Kind::Hoare) opt.only.push_back(p.name);
  Report r = verify_agent(a, opt);
  std::size_t per_action = 0, hoare = 0, bad = 0;
  for (const auto& o : r.obligations) {
    if (!o.holds) ++bad;
    if (o.name.find("[") != std::string::npos) ++per_action;
    if (o.rule == "hoare-basic") ++hoare;
  }
  std::size_t n = a.program().size();
  bool has_all = find(r, "inv/init") && find(r, "inv/stable") && find(r, "status_T") && find(r, "status_I");
  // One per-action obligation per program entry for each of the three stable properties.
  out.pass = has_all && bad == 0 && per_action == 3 * n && hoare >= 6;
  out.detail = std::to_string(r.obligations.size()) + " obligations reported individually (" +
               std::to_string(per_action) + " per-action stability triples, " + std::to_string(hoare) +
               " capability triples), " + std::to_string(bad) + " failing";
  return out;
}

// ---------------------------------------------------------------------- 3

Formula random_formula(std::mt19937& rng, const VocabPtr& v, int depth) {
  int k = std::uniform_int_distribution<int>(0, depth <= 0 ? 3 : 8)(rng);
  if (k == 0) return Formula::truth();
  if (k == 1) return Formula::falsity();
  if (k <= 3 || depth <= 0) {
    std::size_t i = rng() % v->size();
    return Formula::atom(i, v->name(i));
  }
  if (k == 4) return Formula::negation(random_formula(rng, v, depth - 1));
  static constexpr Op ops[] = {Op::And, Op::Or, Op::Implies, Op::Iff};
  return Formula::binary(ops[k - 5], random_formula(rng, v, depth - 1), random_formula(rng, v, depth - 1));
}

Outcome goal_weakness() {
  Outcome out;
  auto v = vocab({"p", "q"});
  std::size_t refuted = 0;
  for (const char* text : {"G(p -> q) -> (G(p) -> G(q))", "G(p & (p -> q)) -> G(q)", "(G(p) & G(q)) -> G(p & q)"}) {
    MSFormula phi = M(v, text);
    OracleVerdict r = validity_oracle(phi);
    if (!r.valid && r.countermodel && !eval_msf(*r.countermodel, phi) && r.countermodel->atoms() <= 2) ++refuted;
  }

  // Random syntactically different but equivalent pairs, grouped by model set.
  std::mt19937 rng(1);
  std::map<std::uint64_t, std::vector<Formula>> buckets;
  auto universe = enumerate_universe(v, 2);
  std::size_t pairs = 0, failures = 0;
  while (pairs < 1000) {
    Formula f = random_formula(rng, v, 3);
    ModelSet m = ModelSet::of(f, 2);
    std::uint64_t key = 0;
    m.for_each([&](std::uint64_t val) { key |= std::uint64_t{1} << val; });
    auto& bucket = buckets[key];
    for (const auto& g : bucket) {
      if (g == f || pairs >= 1000) continue;
      ++pairs;
      OracleVerdict r = validity_oracle(MSFormula::iff(MSFormula::goal(f), MSFormula::goal(g)));
      bool same = true;
      for (const auto& s : universe) same = same && goal_holds(s, f) == goal_holds(s, g);
      if (!r.valid || !same) ++failures;
      break;
    }
    if (bucket.size() < 8) bucket.push_back(f);
  }
  out.pass = refuted == 3 && failures == 0;
  out.detail = std::to_string(refuted) + "/3 non-validities refuted with verified countermodels; " +
               std::to_string(pairs) + " equivalent pairs, " + std::to_string(failures) + " failures";
  return out;
}

// ---------------------------------------------------------------------- 4

Outcome axiom_suites() {
  Outcome out;
  auto v = vocab({"p", "q"});
  auto all = distinct_formulas(v);
  auto universe = enumerate_universe(v, 2);
  std::vector<MSFormula> conditions{M(v, "true"), M(v, "B(p)"), M(v, "!B(q)"), M(v, "G(p) | B(q)"), M(v, "G(p & q)")};
  std::size_t checks = 0, violations = 0;
  auto expect = [&](bool ok) {
    ++checks;
    if (!ok) ++violations;
  };
  for (const auto& s : universe) {
    expect(!s.believes(Formula::falsity()));                             // A2
    expect(!goal_holds(s, Formula::falsity()));                          // A3
    for (const auto& phi : all) {
      expect(!(s.believes(phi) && goal_holds(s, phi)));                  // A4
      for (const auto& psi : all) {
        bool bimp = s.believes(Formula::implies(phi, psi));
        expect(!(bimp && s.believes(phi)) || s.believes(psi));          // A1
        if (tautology(Formula::implies(phi, psi)))                      // A5
          expect(s.believes(psi) || !goal_holds(s, phi) || goal_holds(s, psi));
      }
      ActionRef adopt = ActionRef::adopt(phi), drop = ActionRef::drop(phi);
      bool adopt_on = builtin_enabled(adopt, s);
      expect(builtin_enabled(drop, s));                                   // E2
      expect(adopt_on == apply_M(Action::adopt(phi), s).has_value());
      if (!tautology(Formula::negation(phi))) expect(adopt_on == !s.believes(phi));  // R3
      else expect(!adopt_on);                                                        // R4
      for (const auto& c : conditions) {                                  // E1
        for (const Action& act : {Action::adopt(phi), Action::drop(phi), Action::ins(phi), Action::del(phi)}) {
          ConditionalAction b{"b", c, act};
          expect(enabled_cond(b, s) == (eval_msf(s, c) && builtin_enabled(act.ref(), s)));
        }
      }
    }
  }
  out.pass = violations == 0;
  out.detail = std::to_string(universe.size()) + " states, " + std::to_string(checks) + " axiom instances, " +
               std::to_string(violations) + " violations";
  return out;
}

// ---------------------------------------------------------------------- 5

// States, their successors under one action, and the matching truth tables.
struct Image {
  std::vector<MentalState> sources, targets;
  std::unique_ptr<TruthTable> before, after;
};

Image image(const std::vector<MentalState>& universe, const Action& a, bool enabled_only) {
  Image im;
  for (const auto& s : universe) {
    auto next = apply_M(a, s);
    if (!next && enabled_only) continue;
    im.sources.push_back(s);
    im.targets.push_back(next ? *next : s);
  }
  im.before = std::make_unique<TruthTable>(&im.sources);
  im.after = std::make_unique<TruthTable>(&im.targets);
  return im;
}

Outcome substitution_lemma() {
  Outcome out;
  auto v = vocab({"p", "q"});
  auto universe = enumerate_universe(v, 2);
  auto grammar = ms_grammar(v, {"p", "q", "p & q", "p | q", "!p"}, 3);
  std::size_t checks = 0, failures = 0;
  for (const auto& phi : distinct_formulas(v)) {
    Image ad = image(universe, Action::adopt(phi), true);
    Image dr = image(universe, Action::drop(phi), false);
    for (const auto& sigma : grammar) {
      if (!ad.sources.empty()) {
        ++checks;
        if (ad.before->eval(substitute_adopt(sigma, phi)) != ad.after->eval(sigma)) ++failures;
      }
      ++checks;
      if (dr.before->eval(substitute_drop(sigma, phi)) != dr.after->eval(sigma)) ++failures;
    }
  }
  out.pass = failures == 0;
  out.detail = std::to_string(grammar.size()) + " formulas of depth <= 3 x 16 arguments x " +
               std::to_string(universe.size()) + " states; " + std::to_string(checks) + " formula/argument checks, " +
               std::to_string(failures) + " mismatches";
  return out;
}

// ---------------------------------------------------------------------- 6

Outcome hoare_agreement() {
  Outcome out;
  auto v = vocab({"p", "q"});
  auto universe = enumerate_universe(v, 2);
  auto family = ms_grammar(v, {"p", "q", "p & q", "p | q"}, 2);
  auto deep = ms_grammar(v, {"p", "q", "p & q", "p | q", "!p"}, 3);
  std::vector<Action> statements{Action::ins(F(v, "p")),   Action::ins(F(v, "!p")),  Action::ins(F(v, "p & q")),
                                 Action::del(F(v, "p")),   Action::del(F(v, "q")),   Action::adopt(F(v, "p")),
                                 Action::adopt(F(v, "p | q")), Action::adopt(F(v, "!q")), Action::drop(F(v, "p")),
                                 Action::drop(F(v, "p & q"))};
  std::size_t triples = 0, disagreements = 0, library_checks = 0, library_mismatch = 0, holding = 0;
  std::mt19937 rng(6);
  for (const auto& act : statements) {
    Image im = image(universe, act, false);
    auto semantic = [&](const MSFormula& pre, const MSFormula& post) {
      auto a = im.before->eval(pre), b = im.after->eval(post);
      for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] & ~b[i]) return false;
      return true;
    };
    auto compare = [&](const MSFormula& pre, const MSFormula& post, bool with_library) {
      bool sem = semantic(pre, post);
      bool derived = derive_hoare(pre, act, post, *v).holds;
      ++triples;
      holding += sem;
      if (sem != derived) ++disagreements;
      if (with_library) {
        ++library_checks;
        if (check_hoare_basic(pre, act, post, universe, "universe").holds != sem) ++library_mismatch;
      }
    };
    std::size_t k = 0;
    for (const auto& pre : family)
      for (const auto& post : family) compare(pre, post, ++k % 29 == 0);
    for (int i = 0; i < 300; ++i) compare(deep[rng() % deep.size()], deep[rng() % deep.size()], i % 3 == 0);
  }
  out.pass = disagreements == 0 && library_mismatch == 0 && holding > 0 && holding < triples;
  out.detail = std::to_string(triples) + " triples (" + std::to_string(holding) + " valid), " +
               std::to_string(disagreements) + " derivation/semantics disagreements; " +
               std::to_string(library_checks) + " re-checked state by state, " + std::to_string(library_mismatch) +
               " mismatches";
  return out;
}

// ------------------------------------------------------------------ 7, 8

// Every agent built from the fixed pools below, in a fixed order, filtered to
// valid initial states; then a seeded selection of `count` of them.
std::vector<Agent> micro_agents(std::size_t count) {
  const std::vector<std::pair<std::string, std::string>> starts{
      {"", ""}, {"", "q;"}, {"p;", "q;"}, {"", "p & q;"}, {"q;", "p;"}, {"", "p; !p;"}};
  const std::vector<std::string> conds{"true", "B(p)", "!B(p)", "G(q)", "B(q) | G(p)"};
  const std::vector<std::string> acts{"ins(p)", "ins(q)", "del(p)", "del(q)", "ins(!p)",
                                      "adopt(p)", "adopt(q)", "drop(p)", "drop(q)"};
  std::vector<std::string> entries;
  for (const auto& c : conds)
    for (const auto& a : acts) entries.push_back(c + " -> do(" + a + ")");
  std::mt19937 rng(42);
  std::vector<Agent> out;
  std::set<std::string> seen;
  while (out.size() < count) {
    const auto& st = starts[rng() % starts.size()];
    std::size_t n = 1 + rng() % 3;
    std::vector<std::string> prog;
    for (std::size_t i = 0; i < n; ++i) prog.push_back(entries[rng() % entries.size()]);
    std::string key = st.first + "|" + st.second;
    for (const auto& p : prog) key += "|" + p;
    if (!seen.insert(key).second) continue;
    out.push_back(micro_agent(st.first, st.second, prog));
  }
  return out;
}

struct TemporalStats {
  std::size_t agents = 0, questions = 0, unless_holds = 0, unless_disagree = 0, trace_conflicts = 0;
  std::size_t ensures_accepted = 0, ensures_nonvacuous = 0, ensures_false_positive = 0;
};

TemporalStats temporal_agreement() {
  TemporalStats st;
  auto agents = micro_agents(600);
  st.agents = agents.size();
  const std::vector<std::string> phis{"B(p)", "G(q)", "B(p) | G(q)", "!B(q)", "B(p) & !B(q)", "!G(p)"};
  const std::vector<std::string> psis{"false", "B(q)", "G(p)", "B(p) & B(q)", "!B(p)"};
  for (const auto& a : agents) {
    StateGraph g = reachable(a);
    TracePrefix rr = run(a, {SchedulerKind::RoundRobin, 0}, 4 * a.program().size() * (g.nodes.size() + 1));
    for (const auto& x : phis) {
      for (const auto& y : psis) {
        MSFormula phi = M(a.vocabulary(), x), psi = M(a.vocabulary(), y);
        ++st.questions;
        bool hoare = check_unless(a, g, phi, psi).overall.holds;
        auto unless = TemporalFormula::unless(phi, psi);
        bool traces = graph_valid(a, g, unless).holds;
        st.unless_holds += hoare;
        if (hoare != traces) ++st.unless_disagree;
        if (traces && rr.lasso && eval_temporal(a, rr, unless, 0) == Tri::False) ++st.trace_conflicts;

        if (check_ensures(a, g, phi, psi).overall.holds) {
          ++st.ensures_accepted;
          for (const auto& n : g.nodes)
            if (eval_msf(n, phi, &a) && !eval_msf(n, psi, &a)) {
              ++st.ensures_nonvacuous;
              break;
            }
          auto ens = TemporalFormula::ensures(phi, psi);
          bool ok = graph_valid(a, g, ens).holds;
          if (rr.lasso)
            for (std::size_t i = 0; i <= rr.length(); ++i) ok = ok && eval_temporal(a, rr, ens, i) == Tri::True;
          if (!ok) ++st.ensures_false_positive;
        }
      }
    }
  }
  return st;
}

// ---------------------------------------------------------------------- 9

Outcome blind_commitment() {
  Outcome out;
  std::mt19937 rng(9);
  auto v = vocab({"p", "q", "r"});
  auto pool = Fs(v, {"p", "q", "r", "!p", "!q", "!r", "p & q", "p | r", "q -> r", "p <-> q", "true", "p & !r"});
  auto pick = [&] { return pool[rng() % pool.size()]; };
  std::size_t cases = 0, executed = 0, violations = 0, invalid = 0;
  while (cases < 12000) {
    std::vector<Formula> beliefs;
    for (int i = static_cast<int>(rng() % 3); i > 0; --i) beliefs.push_back(pick());
    std::vector<GoalEntry> goals;
    for (int i = static_cast<int>(rng() % 3); i > 0; --i) {
      std::vector<Formula> dropped;
      if (rng() % 4 == 0) dropped.push_back(pick());
      goals.emplace_back(pick(), dropped);
    }
    auto s = MentalState::try_make(v, beliefs, goals);
    if (!s) continue;
    Action act = Action::ins(pick());
    switch (rng() % 4) {
      case 0: {
        auto spec = std::make_shared<CapabilitySpec>();
        spec->name = "random";
        for (int c = 1 + static_cast<int>(rng() % 3); c > 0; --c) {
          EffectClause ec;
          ec.guard = rng() % 3 ? pick() : Formula::truth();
          for (int i = static_cast<int>(rng() % 3); i > 0; --i) ec.add.push_back(pick());
          for (int i = static_cast<int>(rng() % 2); i > 0; --i) ec.remove.push_back(pick());
          spec->clauses.push_back(ec);
        }
        act = Action::capability(spec);
        break;
      }
      case 1: act = Action::del(pick()); break;
      case 2: act = Action::adopt(pick()); break;
      default: break;
    }
    ++cases;
    for (const auto& phi : pool) {
      MSFormula pre = MSFormula::goal(phi);
      MSFormula post = MSFormula::disj(MSFormula::belief(phi), MSFormula::goal(phi));
      if (!check_hoare_basic(pre, act, post, {*s}, "case").holds) ++violations;
    }
    if (auto next = apply_M(act, *s)) {
      ++executed;
      if (state_violation(*v, next->beliefs(), next->goals())) ++invalid;
    }
  }
  out.pass = violations == 0 && invalid == 0;
  out.detail = std::to_string(cases) + " action/state cases (" + std::to_string(executed) + " executed) x " +
               std::to_string(pool.size()) + " goals: " + std::to_string(violations) + " persistence violations, " +
               std::to_string(invalid) + " invalid successor states";
  return out;
}

// --------------------------------------------------------------------- 10

Outcome fairness_surrogate() {
  Outcome out;
  std::size_t rr_prefixes = 0, rr_bad = 0, random_runs = 0, random_bad = 0;
  std::vector<Agent> agents = micro_agents(100);
  agents.push_back(load_fixture("shopping"));
  for (const auto& a : agents) {
    for (std::size_t len : {0, 1, 7, 64, 200}) {
      ++rr_prefixes;
      if (!fairness_check(run(a, {SchedulerKind::RoundRobin, 0}, len))) ++rr_bad;
    }
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      TracePrefix t = run(a, {SchedulerKind::FairRandom, seed}, 10 * a.program().size() + 50);
      ++random_runs;
      if (max_omission_streak(t) > a.program().size() || !fairness_check(t)) ++random_bad;
    }
  }
  // The scheduler alone, over many program sizes and long horizons.
  for (std::size_t n = 1; n <= 16; ++n) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      Scheduler sched({SchedulerKind::FairRandom, seed}, n);
      std::vector<std::size_t> last(n, 0);
      ++random_runs;
      bool bad = false;
      for (std::size_t t = 1; t <= 5000; ++t) {
        std::size_t pick = sched.next();
        last[pick] = t;
        for (std::size_t b = 0; b < n; ++b) {
          if (t - last[b] > n) bad = true;
        }
      }
      random_bad += bad;
    }
  }
  out.pass = rr_bad == 0 && random_bad == 0;
  out.detail = std::to_string(rr_prefixes) + " round-robin prefixes (" + std::to_string(rr_bad) + " unfair); " +
               std::to_string(random_runs) + " random schedules (" + std::to_string(random_bad) +
               " with an omission streak above |program|)";
  return out;
}

}  // namespace

int main() {
  int failed = 0;
  auto report = [&](int id, const char* title, const std::function<Outcome()>& fn) {
    auto t0 = Clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    char secs[32];
    std::snprintf(secs, sizeof secs, "%.2fs", seconds_since(t0));
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << id << ": " << title << " -- " << o.detail << " ["
              << secs << "]" << std::endl;
    failed += !o.pass;
  };

  report(1, "shopping agent correctness", shopping_correctness);
  report(2, "invariant and stable status", invariant_and_status);
  report(3, "goal operator weakness and replacement of equivalents", goal_weakness);
  report(4, "belief, goal and enabledness axioms", axiom_suites);
  report(5, "substitution lemma", substitution_lemma);
  report(6, "wlp derivation agrees with Hoare semantics", hoare_agreement);

  TemporalStats ts;
  std::string temporal_error;
  auto t0 = Clock::now();
  try {
    ts = temporal_agreement();
  } catch (const std::exception& e) {
    temporal_error = e.what();
  }
  double tsecs = seconds_since(t0);
  report(7, "unless by per-action triples agrees with fair traces", [&] {
    Outcome o;
    o.pass = temporal_error.empty() && ts.agents >= 500 && ts.unless_disagree == 0 && ts.trace_conflicts == 0 &&
             ts.unless_holds > 0 && ts.unless_holds < ts.questions;
    o.detail = temporal_error.empty()
                   ? std::to_string(ts.agents) + " agents, " + std::to_string(ts.questions) + " unless questions (" +
                         std::to_string(ts.unless_holds) + " hold), " + std::to_string(ts.unless_disagree) +
                         " disagreements, " + std::to_string(ts.trace_conflicts) + " lasso-trace conflicts; " +
                         std::to_string(tsecs) + " s shared with criterion 8"
                   : "exception: " + temporal_error;
    return o;
  });
  report(8, "ensures by witness action is sound on fair traces", [&] {
    Outcome o;
    o.pass = temporal_error.empty() && ts.ensures_nonvacuous > 0 && ts.ensures_false_positive == 0;
    o.detail = std::to_string(ts.ensures_accepted) + " accepted ensures claims (" +
               std::to_string(ts.ensures_nonvacuous) + " with a reachable phi & !psi state), " +
               std::to_string(ts.ensures_false_positive) + " refuted by fair traces";
    return o;
  });
  report(9, "blind commitment and mental-state validity", blind_commitment);
  report(10, "fairness surrogate", fairness_surrogate);

  std::cout << (failed ? "FAIL" : "PASS") << " overall: " << (10 - failed) << "/10 criteria" << std::endl;
  return failed ? 1 : 0;
}
