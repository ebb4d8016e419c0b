#include "goal/verifier.hpp"

#include <algorithm>
#include <atomic>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace goal {

// ----------------------------------------------------------- Hoare triples

Verdict check_hoare_basic(const MSFormula& pre, const Action& a, const MSFormula& post,
                          const std::vector<MentalState>& states, const std::string& scope, const EnabledOracle* ctx) {
  Verdict v;
  v.scope = scope;
  for (const auto& s : states) {
    if (!eval_msf(s, pre, ctx)) continue;
    ++v.states_checked;
    auto next = apply_M(a, s);
    const MentalState& after = next ? *next : s;
    if (!eval_msf(after, post, ctx)) {
      v.holds = false;
      v.witness = s;
      v.detail = next ? "postcondition fails after " + a.label() : a.label() + " is not enabled and the postcondition fails in place";
      return v;
    }
  }
  return v;
}

Verdict check_hoare_universe(const MSFormula& pre, const Action& a, const MSFormula& post, const VocabPtr& vocab,
                             std::size_t max_generators) {
  auto states = enumerate_universe(vocab, max_generators);
  return check_hoare_basic(pre, a, post, states,
                           "universe (" + std::to_string(vocab->size()) + " atoms, <= " + std::to_string(max_generators) +
                               " generators, " + std::to_string(states.size()) + " states)");
}

Verdict check_hoare_conditional(const MSFormula& pre, const ConditionalAction& b, const MSFormula& post,
                                const std::vector<MentalState>& states, const std::string& scope,
                                const EnabledOracle* ctx) {
  Verdict v;
  v.scope = scope;
  for (const auto& s : states) {
    if (!eval_msf(s, pre, ctx)) continue;
    ++v.states_checked;
    std::optional<MentalState> next;
    if (eval_msf(s, b.condition, ctx)) next = apply_M(b.action, s);
    const MentalState& after = next ? *next : s;
    if (!eval_msf(after, post, ctx)) {
      v.holds = false;
      v.witness = s;
      v.detail = next ? "postcondition fails after " + b.label + " executes" : b.label + " idles and the postcondition fails in place";
      return v;
    }
  }
  return v;
}

namespace {

std::string reachable_scope(const StateGraph& g) { return "reachable (" + std::to_string(g.nodes.size()) + " states)"; }

}  // namespace

Verdict check_hoare_conditional(const Agent& agent, const StateGraph& g, const MSFormula& pre, std::size_t action,
                                const MSFormula& post) {
  Verdict v;
  v.scope = reachable_scope(g);
  const auto& label = agent.program().at(action).label;
  for (std::size_t n = 0; n < g.nodes.size(); ++n) {
    if (!eval_msf(g.nodes[n], pre, &agent)) continue;
    ++v.states_checked;
    const Edge& e = g.edge(n, action);
    if (!eval_msf(g.nodes[e.to], post, &agent)) {
      v.holds = false;
      v.witness = g.nodes[n];
      v.detail = e.executed ? "postcondition fails after " + label + " executes" : label + " idles and the postcondition fails in place";
      return v;
    }
  }
  return v;
}

// ---------------------------------------------------------------------- wlp

MSFormula substitute_adopt(const MSFormula& sigma, const Formula& phi) {
  return map_leaves(sigma, [&](const MSFormula& leaf) {
    if (leaf.op() == MsOp::G && tautology(Formula::implies(phi, leaf.arg())))
      return MSFormula::negation(MSFormula::belief(leaf.arg()));
    return leaf;
  });
}

MSFormula substitute_drop(const MSFormula& sigma, const Formula& phi) {
  return map_leaves(sigma, [&](const MSFormula& leaf) {
    if (leaf.op() == MsOp::G && tautology(Formula::implies(leaf.arg(), phi))) return MSFormula::falsity();
    return leaf;
  });
}

namespace {

MSFormula constant(bool b) { return b ? MSFormula::truth() : MSFormula::falsity(); }

// (en & then) | (!en & otherwise)
MSFormula branch(const MSFormula& en, MSFormula then, const MSFormula& otherwise) {
  return MSFormula::disj(MSFormula::conj(en, std::move(then)), MSFormula::conj(MSFormula::negation(en), otherwise));
}

[[noreturn]] void named_unsupported(const MSFormula& leaf) {
  throw UnsupportedError("wlp cannot rewrite '" + leaf.text() + "' (capability enabledness)");
}

MSFormula wlp_ins(const Formula& phi, const MSFormula& sigma) {
  MSFormula after = map_leaves(sigma, [&](const MSFormula& leaf) -> MSFormula {
    switch (leaf.op()) {
      case MsOp::B: return MSFormula::belief(Formula::implies(phi, leaf.arg()));
      case MsOp::G:
        return MSFormula::conj(MSFormula::negation(MSFormula::belief(Formula::implies(phi, leaf.arg()))), leaf);
      case MsOp::Enabled: {
        const ActionRef& t = leaf.target();
        switch (t.kind) {
          case ActionRef::Kind::Adopt:
            if (!satisfiable(t.arg)) return MSFormula::falsity();
            return MSFormula::negation(MSFormula::belief(Formula::implies(phi, t.arg)));
          case ActionRef::Kind::Ins:
            return MSFormula::negation(MSFormula::belief(Formula::implies(phi, Formula::negation(t.arg))));
          case ActionRef::Kind::Drop:
          case ActionRef::Kind::Del: return leaf;
          case ActionRef::Kind::Named: named_unsupported(leaf);
        }
        return leaf;
      }
      default: return leaf;
    }
  });
  MSFormula en = MSFormula::negation(MSFormula::belief(Formula::negation(phi)));
  return branch(en, after, sigma);
}

// Only the canonical base {formula_of_models(mask)} can contain phi, and it
// does exactly when the beliefs have the models of phi.
MSFormula wlp_del(const Formula& phi, const MSFormula& sigma, const Vocabulary& vocab) {
  const std::size_t n = vocab.size();
  const ModelSet mask = ModelSet::of(phi, n);
  if (mask.full() || mask.empty() || formula_of_models(mask, vocab).text() != phi.text()) return sigma;
  std::vector<MSFormula> parts{MSFormula::belief(phi)};
  mask.for_each([&](std::uint64_t v) {
    parts.push_back(MSFormula::negation(MSFormula::belief(Formula::negation(minterm(v, vocab)))));
  });
  MSFormula in_base = ms_conj_all(parts);

  MSFormula after = map_leaves(sigma, [&](const MSFormula& leaf) -> MSFormula {
    switch (leaf.op()) {
      case MsOp::B: return constant(tautology(leaf.arg()));
      case MsOp::G: {
        const Formula& chi = leaf.arg();
        if (!satisfiable(chi) || tautology(chi)) return MSFormula::falsity();
        // With empty beliefs chi is a goal iff some generator entails it,
        // i.e. iff some formula entailing chi was a goal before.
        ModelSet cm = ModelSet::of(chi, n);
        std::vector<std::uint64_t> models;
        cm.for_each([&](std::uint64_t v) { models.push_back(v); });
        if (models.size() > 10) throw BoundsError("wlp(del) over a goal with more than 10 models");
        std::vector<MSFormula> alts;
        for (std::uint64_t sub = 1; sub < (std::uint64_t{1} << models.size()); ++sub) {
          ModelSet ms(n, false);
          for (std::size_t k = 0; k < models.size(); ++k)
            if ((sub >> k) & 1) ms.set(models[k], true);
          alts.push_back(MSFormula::goal(formula_of_models(ms, vocab)));
        }
        return ms_disj_all(alts);
      }
      case MsOp::Enabled: {
        const ActionRef& t = leaf.target();
        switch (t.kind) {
          case ActionRef::Kind::Adopt: return constant(satisfiable(t.arg) && !tautology(t.arg));
          case ActionRef::Kind::Ins: return constant(satisfiable(t.arg));
          case ActionRef::Kind::Drop:
          case ActionRef::Kind::Del: return leaf;
          case ActionRef::Kind::Named: named_unsupported(leaf);
        }
        return leaf;
      }
      default: return leaf;
    }
  });
  return branch(in_base, after, sigma);
}

void reject_named(const MSFormula& f) {
  map_leaves(f, [](const MSFormula& leaf) {
    if (leaf.op() == MsOp::Enabled && !leaf.target().builtin()) named_unsupported(leaf);
    return leaf;
  });
}

}  // namespace

MSFormula wlp(const Action& a, const MSFormula& sigma, const Vocabulary& vocab, const std::vector<HoareAxiom>& axioms) {
  switch (a.kind()) {
    case Action::Kind::Adopt: {
      reject_named(sigma);
      MSFormula en = MSFormula::enabled(ActionRef::adopt(a.argument()));
      return branch(en, substitute_adopt(sigma, a.argument()), sigma);
    }
    case Action::Kind::Drop: reject_named(sigma); return substitute_drop(sigma, a.argument());
    case Action::Kind::Ins: return wlp_ins(a.argument(), sigma);
    case Action::Kind::Del: return wlp_del(a.argument(), sigma, vocab);
    case Action::Kind::Capability:
      for (const auto& ax : axioms)
        if (ax.capability == a.spec().name && ax.post == sigma) return ax.pre;
      throw ValidationError("no Hoare axiom for capability '" + a.spec().name + "' with postcondition " + sigma.text());
  }
  return sigma;
}

MSFormula wlp(const ConditionalAction& b, const MSFormula& sigma, const Vocabulary& vocab,
              const std::vector<HoareAxiom>& axioms) {
  return branch(b.condition, wlp(b.action, sigma, vocab, axioms), sigma);
}

Verdict derive_hoare(const MSFormula& pre, const Statement& statement, const MSFormula& post, const Vocabulary& vocab,
                     const std::vector<HoareAxiom>& axioms, OracleBounds bounds) {
  MSFormula w = std::visit([&](const auto& s) { return wlp(s, post, vocab, axioms); }, statement);
  const Action& basic = std::holds_alternative<Action>(statement) ? std::get<Action>(statement)
                                                                   : std::get<ConditionalAction>(statement).action;
  // The del rule refers to canonical bases of the full vocabulary.
  if (basic.kind() == Action::Kind::Del && !bounds.vocabulary) bounds.vocabulary = vocab;
  OracleVerdict ov = validity_oracle(MSFormula::implies(pre, w), bounds);
  Verdict v;
  v.holds = ov.valid;
  v.witness = ov.countermodel;
  v.scope = ov.bounds;
  v.states_checked = ov.states_examined;
  if (!ov.valid) v.detail = "precondition does not entail wlp = " + w.text();
  return v;
}

// ------------------------------------------------------- temporal reduction

namespace {

bool is_false(const MSFormula& f) { return f.op() == MsOp::False; }

MSFormula and_not(const MSFormula& phi, const MSFormula& psi) {
  return is_false(psi) ? phi : MSFormula::conj(phi, MSFormula::negation(psi));
}

MSFormula or_else(const MSFormula& phi, const MSFormula& psi) { return is_false(psi) ? phi : MSFormula::disj(phi, psi); }

}  // namespace

UnlessVerdict check_unless(const Agent& agent, const StateGraph& g, const MSFormula& phi, const MSFormula& psi) {
  UnlessVerdict out;
  out.overall.scope = reachable_scope(g);
  MSFormula pre = and_not(phi, psi), post = or_else(phi, psi);
  for (std::size_t b = 0; b < agent.program().size(); ++b) {
    Verdict v = check_hoare_conditional(agent, g, pre, b, post);
    if (!v.holds && out.overall.holds) {
      out.overall.holds = false;
      out.overall.witness = v.witness;
      out.overall.detail = "{" + pre.text() + "} " + agent.program()[b].label + " {" + post.text() + "} fails";
    }
    out.overall.states_checked += v.states_checked;
    out.per_action.push_back({agent.program()[b].label, pre, post, std::move(v)});
  }
  return out;
}

EnsuresVerdict check_ensures(const Agent& agent, const StateGraph& g, const MSFormula& phi, const MSFormula& psi) {
  EnsuresVerdict out;
  out.unless = check_unless(agent, g, phi, psi);
  MSFormula pre = and_not(phi, psi);
  out.progress.scope = reachable_scope(g);
  std::optional<MentalState> first_blocker;
  for (std::size_t b = 0; b < agent.program().size() && !out.witness_action; ++b) {
    const ConditionalAction& act = agent.program()[b];
    Verdict v = check_hoare_conditional(agent, g, pre, b, psi);
    if (!v.holds) {
      if (!first_blocker) first_blocker = v.witness;
      continue;
    }
    bool always_enabled = true;
    for (const auto& s : g.nodes)
      if (eval_msf(s, pre, &agent) && !enabled_cond(act, s)) {
        always_enabled = false;
        if (!first_blocker) first_blocker = s;
        break;
      }
    if (always_enabled) out.witness_action = b;
  }
  if (out.witness_action) {
    out.progress.detail = "witness " + agent.program()[*out.witness_action].label;
  } else {
    out.progress.holds = false;
    out.progress.witness = first_blocker ? first_blocker : std::optional<MentalState>(g.nodes.front());
    out.progress.detail = "no action is enabled at every reachable " + pre.text() + " state and establishes " + psi.text();
  }
  out.overall.scope = out.progress.scope;
  out.overall.holds = out.unless.overall.holds && out.progress.holds;
  if (!out.unless.overall.holds) {
    out.overall.witness = out.unless.overall.witness;
    out.overall.detail = out.unless.overall.detail;
  } else {
    out.overall.witness = out.progress.witness;
    out.overall.detail = out.progress.detail;
  }
  return out;
}

LeadsToVerdict check_leadsto(const ProofTerm& proof, const LeafLookup& lookup) {
  LeadsToVerdict out;
  auto absorb = [&](const LeadsToVerdict& child) {
    out.overall.states_checked += child.overall.states_checked;
    if (!child.overall.holds && out.overall.holds) {
      out.overall.holds = false;
      out.overall.witness = child.overall.witness;
      out.overall.detail = child.overall.detail;
    }
  };
  switch (proof.kind) {
    case ProofTerm::Kind::Ref: {
      auto [conclusion, verdict] = lookup(proof.name);
      out.conclusion = conclusion;
      out.overall = verdict;
      if (!verdict.holds) out.overall.detail = proof.name + ": " + verdict.detail;
      out.rule = "leadsto-ensures";
      return out;
    }
    case ProofTerm::Kind::Trans: {
      if (proof.children.empty()) throw ValidationError("malformed leads-to proof: empty trans()");
      std::vector<LeadsToVerdict> parts;
      for (const auto& c : proof.children) parts.push_back(check_leadsto(c, lookup));
      for (std::size_t i = 0; i + 1 < parts.size(); ++i)
        if (parts[i].conclusion.rhs != parts[i + 1].conclusion.lhs)
          throw ValidationError("malformed leads-to proof: in " + proof.text() + " step " + std::to_string(i + 1) +
                                " ends in " + parts[i].conclusion.rhs.text() + " but step " + std::to_string(i + 2) +
                                " starts from " + parts[i + 1].conclusion.lhs.text());
      for (const auto& p : parts) absorb(p);
      out.conclusion = {parts.front().conclusion.lhs, parts.back().conclusion.rhs};
      out.rule = "leadsto-trans";
      return out;
    }
    case ProofTerm::Kind::Disj: {
      if (proof.children.empty()) throw ValidationError("malformed leads-to proof: empty disj()");
      std::vector<LeadsToVerdict> parts;
      for (const auto& c : proof.children) parts.push_back(check_leadsto(c, lookup));
      MSFormula lhs = parts.front().conclusion.lhs;
      for (std::size_t i = 1; i < parts.size(); ++i) {
        if (parts[i].conclusion.rhs != parts[0].conclusion.rhs)
          throw ValidationError("malformed leads-to proof: in " + proof.text() + " the branches lead to different formulas " +
                                parts[0].conclusion.rhs.text() + " and " + parts[i].conclusion.rhs.text());
        lhs = MSFormula::disj(lhs, parts[i].conclusion.lhs);
      }
      for (const auto& p : parts) absorb(p);
      out.conclusion = {lhs, parts.front().conclusion.rhs};
      out.rule = "leadsto-disj";
      return out;
    }
  }
  return out;
}

namespace {

Verdict oracle_verdict(const Agent& agent, const StateGraph& g, const TemporalFormula& f) {
  TemporalVerdict tv = graph_valid(agent, g, f);
  Verdict v;
  v.holds = tv.holds;
  v.scope = "fair traces over " + reachable_scope(g);
  v.states_checked = g.nodes.size();
  if (tv.node) v.witness = g.nodes[*tv.node];
  v.detail = tv.holds ? "" : tv.detail;
  return v;
}

}  // namespace

LeadsToVerdict check_leadsto(const Agent& agent, const StateGraph& g, const ProofTerm& proof) {
  std::map<std::string, std::pair<LeadsToConclusion, Verdict>> memo;
  std::function<std::pair<LeadsToConclusion, Verdict>(const std::string&)> lookup =
      [&](const std::string& name) -> std::pair<LeadsToConclusion, Verdict> {
    if (auto it = memo.find(name); it != memo.end()) return it->second;
    const PropertyDecl* p = agent.find_property(name);
    if (!p) throw ValidationError("malformed leads-to proof: unknown step '" + name + "'");
    std::pair<LeadsToConclusion, Verdict> r{{p->lhs, p->rhs}, {}};
    if (p->kind == PropertyDecl::Kind::Ensures) {
      r.second = check_ensures(agent, g, p->lhs, p->rhs).overall;
    } else if (p->kind == PropertyDecl::Kind::LeadsTo) {
      r.second = p->proof ? check_leadsto(*p->proof, lookup).overall
                          : oracle_verdict(agent, g, TemporalFormula::leads_to(p->lhs, p->rhs));
    } else {
      throw ValidationError("malformed leads-to proof: '" + name + "' is not an ensures or leadsto property");
    }
    return memo.emplace(name, r).first->second;
  };
  return check_leadsto(proof, lookup);
}

// ------------------------------------------------------------------ reports

bool Report::all_hold() const {
  return std::all_of(obligations.begin(), obligations.end(), [](const Obligation& o) { return o.holds; });
}

std::string Report::text() const {
  std::ostringstream out;
  std::size_t failed = 0;
  for (const auto& o : obligations) {
    out << (o.holds ? "[holds] " : "[FAILS] ") << o.name << "  (" << o.rule << "; " << o.scope << ")";
    if (!o.detail.empty()) out << "  " << o.detail;
    out << "\n";
    if (!o.holds) {
      ++failed;
      if (o.witness) out << "        witness " << o.witness->digest_hex() << ": " << o.witness->canonical() << "\n";
    }
  }
  out << obligations.size() << " obligations, " << failed << " failed\n";
  return out.str();
}

std::string Report::records() const {
  std::ostringstream out;
  for (const auto& o : obligations) {
    nlohmann::ordered_json j;
    j["obligation"] = o.name;
    j["rule"] = o.rule;
    j["verdict"] = o.holds ? "holds" : "fails";
    j["witness_state_digest"] = o.witness ? nlohmann::ordered_json(o.witness->digest_hex()) : nlohmann::ordered_json(nullptr);
    j["scope"] = o.scope;
    j["detail"] = o.detail;
    if (o.witness) j["witness_state"] = o.witness->canonical();
    out << j.dump() << "\n";
  }
  return out.str();
}

namespace {

Obligation from_verdict(std::string name, std::string rule, const Verdict& v, std::string detail = {}) {
  Obligation o;
  o.name = std::move(name);
  o.rule = std::move(rule);
  o.scope = v.scope;
  o.holds = v.holds;
  if (!v.holds) o.witness = v.witness;
  o.detail = detail.empty() ? v.detail : detail + (v.detail.empty() ? "" : "; " + v.detail);
  return o;
}

void add_unless(std::vector<Obligation>& out, const std::string& prefix, const UnlessVerdict& u) {
  for (const auto& a : u.per_action)
    out.push_back(from_verdict(prefix + "[" + a.label + "]", "hoare-conditional", a.verdict,
                               "{" + a.pre.text() + "} " + a.label + " {" + a.post.text() + "}"));
}

Action statement_action(const Agent& agent, const ActionRef& ref) {
  switch (ref.kind) {
    case ActionRef::Kind::Adopt: return Action::adopt(ref.arg);
    case ActionRef::Kind::Drop: return Action::drop(ref.arg);
    case ActionRef::Kind::Ins: return Action::ins(ref.arg);
    case ActionRef::Kind::Del: return Action::del(ref.arg);
    case ActionRef::Kind::Named: break;
  }
  for (const auto& c : agent.capabilities())
    if (c->name == ref.name) return Action::capability(c);
  throw ValidationError("unknown action '" + ref.name + "'");
}

std::vector<Obligation> property_obligations(const Agent& agent, const StateGraph& g, const PropertyDecl& p) {
  std::vector<Obligation> out;
  using K = PropertyDecl::Kind;
  switch (p.kind) {
    case K::Invariant: {
      Verdict init;
      init.scope = "initial state";
      init.states_checked = 1;
      init.holds = eval_msf(agent.initial(), p.lhs, &agent);
      if (!init.holds) {
        init.witness = agent.initial();
        init.detail = "the initial state violates " + p.lhs.text();
      }
      out.push_back(from_verdict(p.name + "/init", "initial-state", init));
      UnlessVerdict u = check_unless(agent, g, p.lhs, MSFormula::falsity());
      add_unless(out, p.name + "/stable", u);
      out.push_back(from_verdict(p.name + "/stable", "unless-by-hoare", u.overall, p.lhs.text() + " unless false"));
      break;
    }
    case K::Unless: {
      UnlessVerdict u = check_unless(agent, g, p.lhs, p.rhs);
      add_unless(out, p.name, u);
      out.push_back(from_verdict(p.name, "unless-by-hoare", u.overall, p.lhs.text() + " unless " + p.rhs.text()));
      break;
    }
    case K::Ensures: {
      EnsuresVerdict e = check_ensures(agent, g, p.lhs, p.rhs);
      add_unless(out, p.name + "/unless", e.unless);
      out.push_back(from_verdict(p.name + "/progress", "hoare-conditional", e.progress));
      out.push_back(from_verdict(p.name, "ensures-by-hoare", e.overall,
                                 e.overall.holds ? p.lhs.text() + " ensures " + p.rhs.text() : std::string()));
      break;
    }
    case K::Hoare: {
      const ActionRef& ref = *p.statement;
      if (!ref.builtin()) {
        if (auto idx = agent.action_index(ref.name)) {
          Verdict v = check_hoare_conditional(agent, g, p.lhs, *idx, p.rhs);
          out.push_back(from_verdict(p.name, "hoare-conditional", v, v.holds ? p.text() : std::string()));
          break;
        }
      }
      Verdict v = check_hoare_basic(p.lhs, statement_action(agent, ref), p.rhs, g.nodes, reachable_scope(g), &agent);
      out.push_back(from_verdict(p.name, "hoare-basic", v, v.holds ? p.text() : std::string()));
      break;
    }
    case K::LeadsTo: break;  // handled after the ensures results exist
  }
  return out;
}

template <class Fn>
void parallel_for(std::size_t count, std::size_t jobs, Fn&& fn) {
  jobs = std::min(std::max<std::size_t>(jobs, 1), count);
  if (jobs <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> cursor{0};
  std::vector<std::exception_ptr> errors(count);
  std::vector<std::thread> pool;
  for (std::size_t j = 0; j < jobs; ++j)
    pool.emplace_back([&] {
      for (std::size_t i; (i = cursor.fetch_add(1)) < count;) {
        try {
          fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  // Rethrow the first failure in task order so errors are deterministic too.
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace

Report verify_agent(const Agent& agent, const VerifyOptions& options) {
  const auto& props = agent.properties();
  std::vector<bool> selected(props.size(), options.only.empty());
  for (const auto& name : options.only) {
    auto it = std::find_if(props.begin(), props.end(), [&](const PropertyDecl& p) { return p.name == name; });
    if (it == props.end()) throw ValidationError("unknown property '" + name + "'");
    selected[static_cast<std::size_t>(it - props.begin())] = true;
  }
  // Pull in the proof steps cited by selected leads-to properties.
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < props.size(); ++i) {
      if (!selected[i] || !props[i].proof) continue;
      std::function<void(const ProofTerm&)> mark = [&](const ProofTerm& t) {
        if (t.kind != ProofTerm::Kind::Ref) {
          for (const auto& c : t.children) mark(c);
          return;
        }
        for (std::size_t q = 0; q < props.size(); ++q)
          if (props[q].name == t.name && !selected[q]) selected[q] = changed = true;
      };
      mark(*props[i].proof);
    }
  }

  StateGraph g = reachable(agent, {options.budget, options.jobs});
  Report report;
  report.reachable_states = g.nodes.size();

  const std::size_t n_axioms = options.check_axioms ? agent.axioms().size() : 0;
  std::vector<std::vector<Obligation>> axiom_results(n_axioms), results(props.size());
  std::vector<std::size_t> tasks;
  for (std::size_t i = 0; i < props.size(); ++i)
    if (selected[i] && props[i].kind != PropertyDecl::Kind::LeadsTo) tasks.push_back(i);

  parallel_for(n_axioms + tasks.size(), options.jobs, [&](std::size_t k) {
    if (k < n_axioms) {
      const HoareAxiom& ax = agent.axioms()[k];
      Verdict v = check_hoare_basic(ax.pre, Action::capability([&] {
                                      for (const auto& c : agent.capabilities())
                                        if (c->name == ax.capability) return c;
                                      throw ValidationError("axiom for unknown capability '" + ax.capability + "'");
                                    }()),
                                    ax.post, g.nodes, reachable_scope(g), &agent);
      axiom_results[k].push_back(
          from_verdict("axiom/" + ax.capability + "#" + std::to_string(k), "axiom-check", v, v.holds ? ax.text() : ""));
    } else {
      std::size_t i = tasks[k - n_axioms];
      results[i] = property_obligations(agent, g, props[i]);
    }
  });

  // Leads-to properties reuse the verdicts computed above.
  std::map<std::string, std::pair<LeadsToConclusion, Verdict>> established;
  for (std::size_t i = 0; i < props.size(); ++i) {
    if (!selected[i]) continue;
    const PropertyDecl& p = props[i];
    if (p.kind == PropertyDecl::Kind::Ensures) {
      Verdict v;
      const Obligation& o = results[i].back();
      v.holds = o.holds;
      v.witness = o.witness;
      v.scope = o.scope;
      v.detail = o.detail;
      established[p.name] = {{p.lhs, p.rhs}, v};
    }
  }
  auto lookup = [&](const std::string& name) {
    auto it = established.find(name);
    if (it == established.end()) throw ValidationError("malformed leads-to proof: step '" + name + "' is unavailable");
    return it->second;
  };
  for (std::size_t i = 0; i < props.size(); ++i) {
    const PropertyDecl& p = props[i];
    if (!selected[i] || p.kind != PropertyDecl::Kind::LeadsTo) continue;
    Verdict oracle = oracle_verdict(agent, g, TemporalFormula::leads_to(p.lhs, p.rhs));
    Verdict final_verdict = oracle;
    if (p.proof) {
      LeadsToVerdict lv = check_leadsto(*p.proof, lookup);
      if (lv.conclusion.lhs != p.lhs || lv.conclusion.rhs != p.rhs)
        throw ValidationError("malformed leads-to proof for '" + p.name + "': it concludes " + lv.conclusion.lhs.text() +
                              " leadsto " + lv.conclusion.rhs.text());
      results[i].push_back(from_verdict(p.name, lv.rule, lv.overall,
                                        lv.overall.holds ? p.lhs.text() + " leadsto " + p.rhs.text() : std::string()));
      results[i].push_back(from_verdict(p.name + "/oracle", "fair-trace-oracle", oracle,
                                        oracle.holds ? "every fair trace satisfies " + p.lhs.text() + " -> <>" + p.rhs.text()
                                                     : std::string()));
      final_verdict = lv.overall;
    } else {
      results[i].push_back(from_verdict(p.name, "fair-trace-oracle", oracle,
                                        oracle.holds ? "every fair trace satisfies " + p.lhs.text() + " -> <>" + p.rhs.text()
                                                     : std::string()));
    }
    established[p.name] = {{p.lhs, p.rhs}, final_verdict};
  }

  for (auto& r : axiom_results)
    for (auto& o : r) report.obligations.push_back(std::move(o));
  for (auto& r : results)
    for (auto& o : r) report.obligations.push_back(std::move(o));
  return report;
}

Report check_triple(const Agent& agent, std::string_view triple, TripleMode mode, const VerifyOptions& options) {
  PropertyDecl p = parse_property("hoare triple: " + std::string(triple), agent);
  const ActionRef& ref = *p.statement;
  std::optional<std::size_t> label;
  if (!ref.builtin()) label = agent.action_index(ref.name);
  Report report;
  if (mode == TripleMode::Semantic) {
    StateGraph g = reachable(agent, {options.budget, options.jobs});
    report.reachable_states = g.nodes.size();
    Verdict v = label ? check_hoare_conditional(agent, g, p.lhs, *label, p.rhs)
                      : check_hoare_basic(p.lhs, statement_action(agent, ref), p.rhs, g.nodes, reachable_scope(g), &agent);
    report.obligations.push_back(from_verdict(p.text().substr(std::string("hoare triple: ").size()),
                                              label ? "hoare-conditional" : "hoare-basic", v));
    return report;
  }
  Statement st = label ? Statement(agent.program()[*label]) : Statement(statement_action(agent, ref));
  Verdict v = derive_hoare(p.lhs, st, p.rhs, *agent.vocabulary(), agent.axioms());
  report.obligations.push_back(from_verdict(p.text().substr(std::string("hoare triple: ").size()), "wlp-derivation", v));
  return report;
}

}  // namespace goal
