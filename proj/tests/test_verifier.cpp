#include <set>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "support.hpp"

using namespace testing_support;

namespace {

Action capability(const Agent& a, std::string_view name) {
  for (const auto& c : a.capabilities())
    if (c->name == name) return Action::capability(c);
  throw std::runtime_error("no capability");
}

const char* kChain =
    "vocab { p, q }\n"
    "beliefs { }\n"
    "goals { q; }\n"
    "program {\n"
    "  first: !B(p) -> do(ins(p));\n"
    "  second: B(p) -> do(ins(q));\n"
    "}\n"
    "properties {\n"
    "  ensures e1: !B(p), B(p);\n"
    "  ensures e2: B(p), B(q);\n"
    "  leadsto one: !B(p), B(p) by e1;\n"
    "  leadsto chain: !B(p), B(q) by trans(e1, e2);\n"
    "  leadsto either: !B(p) | B(p), B(q) by disj(chain, e2);\n"
    "}\n";

}  // namespace

TEST_CASE("Hoare triples over the shopping reachable states") {
  Agent a = load_fixture("shopping");
  StateGraph g = reachable(a);
  const Vocabulary& v = *a.vocabulary();
  Verdict r = check_hoare_basic(parse_msf("B(hpage_user)", v), capability(a, "goto_website_Am_com"),
                                parse_msf("B(Am_com)", v), g.nodes, "reachable", &a);
  CHECK(r.holds);
  CHECK(r.states_checked == 1);

  const PropertyDecl* inv = a.find_property("inv");
  REQUIRE(inv);
  for (std::size_t b = 0; b < a.program().size(); ++b) CHECK(check_hoare_conditional(a, g, inv->lhs, b, inv->lhs).holds);
}

TEST_CASE("persistence of goals over the bounded universe") {
  auto v = vocab({"p", "q"});
  for (const auto& phi : distinct_formulas(v)) {
    MSFormula pre = MSFormula::goal(phi);
    MSFormula post = MSFormula::disj(MSFormula::belief(phi), MSFormula::goal(phi));
    for (const auto& arg : distinct_formulas(v)) {
      CHECK(check_hoare_universe(pre, Action::ins(arg), post, v).holds);
      CHECK(check_hoare_universe(pre, Action::del(arg), post, v).holds);
      CHECK(check_hoare_universe(pre, Action::adopt(arg), post, v).holds);
    }
  }
}

TEST_CASE("unguarded adopt fails where the goal is already believed") {
  auto v = vocab({"p", "q"});
  Verdict r = check_hoare_universe(M(v, "true"), Action::adopt(F(v, "p")), M(v, "G(p)"), v);
  REQUIRE_FALSE(r.holds);
  REQUIRE(r.witness);
  CHECK(r.witness->believes(F(v, "p")));
  CHECK(check_hoare_universe(M(v, "!B(p)"), Action::adopt(F(v, "p")), M(v, "G(p)"), v).holds);
}

TEST_CASE("rule for conditional actions, both routes") {
  auto v = vocab({"p", "q"});
  auto universe = enumerate_universe(v, 2);
  auto grammar = ms_grammar(v, {"p", "q"}, 2);
  std::vector<Action> actions{Action::ins(F(v, "p")), Action::adopt(F(v, "q")), Action::drop(F(v, "p"))};
  int instances = 0;
  for (const auto& act : actions) {
    for (std::size_t i = 0; i < grammar.size(); i += 5) {
      for (std::size_t j = 0; j < grammar.size(); j += 7) {
        const MSFormula& phi = grammar[i];
        const MSFormula& post = grammar[j];
        MSFormula guard = M(v, "B(q) | G(p)");
        bool premise1 = check_hoare_basic(MSFormula::conj(phi, guard), act, post, universe, "u").holds;
        bool premise2 = validity_oracle(MSFormula::implies(MSFormula::conj(phi, MSFormula::negation(guard)), post)).valid;
        ConditionalAction b{"b", guard, act};
        bool conclusion = check_hoare_conditional(phi, b, post, universe, "u").holds;
        if (premise1 && premise2) {
          CHECK(conclusion);
          ++instances;
        }
        // The wlp route decides the same triple.
        CHECK(derive_hoare(phi, b, post, *v).holds == conclusion);
      }
    }
  }
  CHECK(instances > 0);
}

TEST_CASE("wlp examples") {
  auto v = vocab({"p", "q"});
  MSFormula w = wlp(Action::drop(F(v, "p")), M(v, "!G(p)"), *v);
  CHECK(validity_oracle(w).valid);

  MSFormula adopt = wlp(Action::adopt(F(v, "p")), M(v, "G(p)"), *v);
  MSFormula expected = M(v, "(enabled(adopt(p)) & !B(p)) | (!enabled(adopt(p)) & G(p))");
  for (const auto& s : enumerate_universe(v, 2)) {
    CHECK(eval_msf(s, adopt) == eval_msf(s, expected));
    // Backward image computed directly.
    auto next = apply_M(Action::adopt(F(v, "p")), s);
    CHECK(eval_msf(s, adopt) == eval_msf(next ? *next : s, M(v, "G(p)")));
  }

  ConditionalAction b{"b", M(v, "B(q)"), Action::ins(F(v, "p"))};
  MSFormula sigma = M(v, "B(p) | G(q)");
  MSFormula wc = wlp(b, sigma, *v);
  for (const auto& s : enumerate_universe(v, 2))
    if (!eval_msf(s, M(v, "B(q)"))) CHECK(eval_msf(s, wc) == eval_msf(s, sigma));
}

TEST_CASE("the substitution example rewrites exactly the leaves entailed by the argument") {
  auto v = vocab({"p", "q", "r", "s"});
  MSFormula sigma = M(v, "G(p) & !G(q) & G(s)");
  MSFormula got = substitute_adopt(sigma, F(v, "p & q"));
  CHECK(got == M(v, "!B(p) & !!B(q) & G(s)"));
  MSFormula dropped = substitute_drop(M(v, "G(p & q) | G(s) | G(p)"), F(v, "p"));
  CHECK(dropped == M(v, "false | G(s) | false"));
}

TEST_CASE("derivable effect and non-effect instances") {
  auto v = vocab({"p", "q"});
  for (const auto& phi : distinct_formulas(v)) {
    if (!satisfiable(phi)) continue;
    CAPTURE(phi.text());
    auto nb = MSFormula::negation(MSFormula::belief(phi));
    CHECK(derive_hoare(nb, Action::adopt(phi), MSFormula::goal(phi), *v).holds);
    for (const auto& psi : distinct_formulas(v)) {
      auto gpsi = MSFormula::goal(psi);
      CHECK(derive_hoare(gpsi, Action::adopt(phi), gpsi, *v).holds);
      if (tautology(Formula::implies(psi, phi)))
        CHECK(derive_hoare(M(v, "true"), Action::drop(phi), MSFormula::negation(gpsi), *v).holds);
      CHECK(derive_hoare(MSFormula::negation(gpsi), Action::drop(phi), MSFormula::negation(gpsi), *v).holds);
    }
  }
}

TEST_CASE("a non-derivable triple comes with a countermodel that also fails the semantic check") {
  auto v = vocab({"p", "q"});
  MSFormula pre = M(v, "true"), post = M(v, "G(p)");
  Verdict d = derive_hoare(pre, Action::adopt(F(v, "p")), post, *v);
  REQUIRE_FALSE(d.holds);
  REQUIRE(d.witness);
  CHECK_FALSE(check_hoare_basic(pre, Action::adopt(F(v, "p")), post, {*d.witness}, "witness").holds);
  CHECK_FALSE(check_hoare_universe(pre, Action::adopt(F(v, "p")), post, v).holds);
}

TEST_CASE("unless on the shopping agent and a counterexample") {
  Agent a = load_fixture("shopping");
  StateGraph g = reachable(a);
  const PropertyDecl* inv = a.find_property("inv");
  CHECK(check_unless(a, g, inv->lhs, MSFormula::falsity()).overall.holds);
  for (const char* name : {"status_T", "status_I"}) {
    const PropertyDecl* st = a.find_property(name);
    REQUIRE(st);
    UnlessVerdict u = check_unless(a, g, st->lhs, st->rhs);
    CHECK(u.overall.holds);
    CHECK(u.per_action.size() == a.program().size());
  }

  Agent del = micro_agent("p;", "q;", {"B(p) -> do(del(p))", "true -> do(ins(q))"});
  StateGraph dg = reachable(del);
  UnlessVerdict u = check_unless(del, dg, M(del.vocabulary(), "B(p)"), MSFormula::falsity());
  CHECK_FALSE(u.overall.holds);
  REQUIRE(u.overall.witness);
  bool blamed = false;
  for (const auto& c : u.per_action)
    if (!c.verdict.holds) blamed = blamed || c.label == "b0";
  CHECK(blamed);
  CHECK(u.per_action[1].verdict.holds);
}

TEST_CASE("ensures steps of the shopping proof") {
  Agent a = load_fixture("shopping");
  StateGraph g = reachable(a);
  const PropertyDecl* s1 = a.find_property("step1");
  REQUIRE(s1);
  EnsuresVerdict e = check_ensures(a, g, s1->lhs, s1->rhs);
  CHECK(e.overall.holds);
  REQUIRE(e.witness_action);
  CHECK(a.program()[*e.witness_action].action.spec().name == "goto_website_Am_com");
  for (const auto& p : a.properties()) {
    if (p.kind != PropertyDecl::Kind::Ensures) continue;
    CAPTURE(p.name);
    CHECK(check_ensures(a, g, p.lhs, p.rhs).overall.holds);
  }
}

TEST_CASE("ensures abstains when the only progress action is sometimes disabled") {
  Agent a = micro_agent("", "", {"B(q) -> do(ins(p))", "true -> do(ins(q))"});
  StateGraph g = reachable(a);
  MSFormula phi = M(a.vocabulary(), "!B(p)"), psi = M(a.vocabulary(), "B(p)");
  EnsuresVerdict e = check_ensures(a, g, phi, psi);
  CHECK(e.unless.overall.holds);
  CHECK_FALSE(e.witness_action);
  CHECK_FALSE(e.overall.holds);
  // The trace semantics still confirms progress.
  CHECK(graph_valid(a, g, TemporalFormula::ensures(phi, psi)).holds);
}

TEST_CASE("leads-to proof trees") {
  Agent a = parse_agent(kChain);
  StateGraph g = reachable(a);
  for (const char* name : {"one", "chain", "either"}) {
    CAPTURE(name);
    const PropertyDecl* p = a.find_property(name);
    REQUIRE(p);
    LeadsToVerdict v = check_leadsto(a, g, *p->proof);
    CHECK(v.overall.holds);
    CHECK(v.conclusion.lhs == p->lhs);
    CHECK(v.conclusion.rhs == p->rhs);
  }
  CHECK(check_leadsto(a, g, *a.find_property("one")->proof).rule == "leadsto-ensures");
  CHECK(check_leadsto(a, g, *a.find_property("chain")->proof).rule == "leadsto-trans");
  CHECK(check_leadsto(a, g, *a.find_property("either")->proof).rule == "leadsto-disj");

  ProofTerm bad{ProofTerm::Kind::Trans, "", {ProofTerm{ProofTerm::Kind::Ref, "e2", {}}, ProofTerm{ProofTerm::Kind::Ref, "e1", {}}}};
  CHECK_THROWS_WITH_AS(check_leadsto(a, g, bad), doctest::Contains("malformed leads-to proof"), ValidationError);
}

TEST_CASE("the shopping report") {
  Agent a = load_fixture("shopping");
  Report r = verify_agent(a);
  CHECK(r.all_hold());
  CHECK(r.reachable_states == 13);
  std::set<std::string> names;
  for (const auto& o : r.obligations) names.insert(o.name);
  for (const char* n : {"inv/init", "inv/stable", "status_T", "status_I", "step1", "step1/progress", "correct",
                        "correct/oracle", "goto_effect"})
    CHECK(names.count(n) == 1);
  VerifyOptions par;
  par.jobs = 4;
  CHECK(verify_agent(a, par).text() == r.text());
  CHECK(r.text().find("[FAILS]") == std::string::npos);
}

TEST_CASE("the broken agent reports failures with witnesses") {
  Agent a = load_fixture("broken");
  Report r = verify_agent(a);
  CHECK_FALSE(r.all_hold());
  std::istringstream lines(r.records());
  std::string line;
  std::size_t failures = 0;
  while (std::getline(lines, line)) {
    auto j = nlohmann::json::parse(line);
    CHECK(j.contains("obligation"));
    CHECK(j.contains("rule"));
    CHECK(j.contains("scope"));
    if (j["verdict"] == "fails") {
      ++failures;
      CHECK(j["witness_state_digest"].is_string());
    } else {
      CHECK(j["verdict"] == "holds");
      CHECK(j["witness_state_digest"].is_null());
    }
  }
  CHECK(failures == 3);
}

TEST_CASE("selected properties and triples against an agent") {
  Agent a = load_fixture("shopping");
  VerifyOptions only;
  only.only = {"correct"};
  Report r = verify_agent(a, only);
  CHECK(r.all_hold());
  bool cites_step = false;
  for (const auto& o : r.obligations) cites_step = cites_step || o.name == "step3_T";
  CHECK(cites_step);

  CHECK(check_triple(a, "{ B(hpage_user) } goto_website_Am_com { B(Am_com) }", TripleMode::Semantic).all_hold());
  CHECK(check_triple(a, "{ B(hpage_user) } goto_website_Am_com { B(Am_com) }", TripleMode::Wlp).all_hold());
  CHECK_FALSE(check_triple(a, "{ true } goto_website_Am_com { B(Am_com) }", TripleMode::Semantic).all_hold());
}

TEST_CASE("wlp derivations decide the same as the semantics on the universe") {
  auto v = vocab({"p", "q"});
  auto grammar = ms_grammar(v, {"p", "q", "p & q"}, 2);
  std::vector<Action> actions{Action::ins(F(v, "p")), Action::del(F(v, "q")), Action::adopt(F(v, "p | q")),
                              Action::drop(F(v, "p"))};
  for (const auto& act : actions) {
    for (std::size_t i = 0; i < grammar.size(); i += 3)
      for (std::size_t j = 0; j < grammar.size(); j += 4) {
        CAPTURE(act.label());
        CAPTURE(grammar[i].text());
        CAPTURE(grammar[j].text());
        CHECK(derive_hoare(grammar[i], act, grammar[j], *v).holds ==
              check_hoare_universe(grammar[i], act, grammar[j], v).holds);
      }
  }
}
