#include "goal/temporal.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>

namespace goal {

struct TemporalFormula::Node {
  Op op;
  MSFormula state;
  std::optional<TemporalFormula> lhs, rhs;
  bool pure;
  std::string text;
};

namespace {

int prec(TemporalFormula::Op op) {
  using O = TemporalFormula::Op;
  switch (op) {
    case O::Not: return 5;
    case O::And: return 4;
    case O::Or: return 3;
    case O::Implies: return 2;
    default: return 6;
  }
}

std::string wrap(const TemporalFormula& f, int min_prec) {
  return prec(f.op()) < min_prec ? "(" + f.text() + ")" : f.text();
}

}  // namespace

TemporalFormula TemporalFormula::state(MSFormula f) {
  std::string t = f.op() >= MsOp::Not ? "[" + f.text() + "]" : f.text();
  return TemporalFormula(std::make_shared<const Node>(Node{Op::State, std::move(f), {}, {}, true, std::move(t)}));
}

TemporalFormula TemporalFormula::init() {
  return TemporalFormula(std::make_shared<const Node>(Node{Op::Init, MSFormula(), {}, {}, false, "init"}));
}

TemporalFormula TemporalFormula::negation(TemporalFormula f) {
  std::string t = "!" + wrap(f, prec(Op::Not));
  bool pure = f.is_state();
  return TemporalFormula(std::make_shared<const Node>(Node{Op::Not, MSFormula(), std::move(f), {}, pure, std::move(t)}));
}

TemporalFormula TemporalFormula::binary(Op op, TemporalFormula a, TemporalFormula b) {
  std::string t;
  switch (op) {
    case Op::Until: t = "(" + a.text() + " U " + b.text() + ")"; break;
    case Op::And: t = wrap(a, prec(Op::And)) + " & " + wrap(b, prec(Op::And) + 1); break;
    case Op::Or: t = wrap(a, prec(Op::Or)) + " | " + wrap(b, prec(Op::Or) + 1); break;
    default: t = wrap(a, prec(Op::Implies) + 1) + " -> " + wrap(b, prec(Op::Implies)); break;
  }
  bool pure = op != Op::Until && a.is_state() && b.is_state();
  return TemporalFormula(
      std::make_shared<const Node>(Node{op, MSFormula(), std::move(a), std::move(b), pure, std::move(t)}));
}

TemporalFormula TemporalFormula::conj(TemporalFormula a, TemporalFormula b) { return binary(Op::And, std::move(a), std::move(b)); }
TemporalFormula TemporalFormula::disj(TemporalFormula a, TemporalFormula b) { return binary(Op::Or, std::move(a), std::move(b)); }
TemporalFormula TemporalFormula::implies(TemporalFormula a, TemporalFormula b) {
  return binary(Op::Implies, std::move(a), std::move(b));
}
TemporalFormula TemporalFormula::until(TemporalFormula a, TemporalFormula b) {
  return binary(Op::Until, std::move(a), std::move(b));
}

TemporalFormula TemporalFormula::always(TemporalFormula f) { return until(std::move(f), state(MSFormula::falsity())); }

TemporalFormula TemporalFormula::eventually(TemporalFormula f) {
  return negation(until(negation(std::move(f)), state(MSFormula::falsity())));
}

TemporalFormula TemporalFormula::unless(const MSFormula& phi, const MSFormula& psi) {
  return implies(state(phi), until(state(phi), state(psi)));
}

TemporalFormula TemporalFormula::ensures(const MSFormula& phi, const MSFormula& psi) {
  return conj(unless(phi, psi), leads_to(phi, psi));
}

TemporalFormula TemporalFormula::leads_to(const MSFormula& phi, const MSFormula& psi) {
  return implies(state(phi), eventually(state(psi)));
}

TemporalFormula::Op TemporalFormula::op() const { return n_->op; }
const MSFormula& TemporalFormula::state_formula() const { return n_->state; }
const TemporalFormula& TemporalFormula::lhs() const { return *n_->lhs; }
const TemporalFormula& TemporalFormula::rhs() const { return *n_->rhs; }
bool TemporalFormula::is_state() const { return n_->pure; }
std::string TemporalFormula::text() const { return n_->text; }

const char* tri_name(Tri v) {
  switch (v) {
    case Tri::False: return "false";
    case Tri::True: return "true";
    case Tri::Undetermined: return "undetermined";
  }
  return "?";
}

// ------------------------------------------------------------------ traces

namespace {

Tri tri(bool b) { return b ? Tri::True : Tri::False; }

Tri tri_not(Tri a) { return a == Tri::Undetermined ? a : tri(a == Tri::False); }

Tri tri_and(Tri a, Tri b) {
  if (a == Tri::False || b == Tri::False) return Tri::False;
  if (a == Tri::True && b == Tri::True) return Tri::True;
  return Tri::Undetermined;
}

Tri tri_or(Tri a, Tri b) { return tri_not(tri_and(tri_not(a), tri_not(b))); }

struct TraceEval {
  const Agent& agent;
  const TracePrefix& prefix;

  Tri at(const TemporalFormula& f, std::size_t i) const {
    using O = TemporalFormula::Op;
    switch (f.op()) {
      case O::State: {
        const MentalState* s = prefix.state_at(i);
        return s ? tri(eval_msf(*s, f.state_formula(), &agent)) : Tri::Undetermined;
      }
      case O::Init: return tri(i == 0);
      case O::Not: return tri_not(at(f.lhs(), i));
      case O::And: return tri_and(at(f.lhs(), i), at(f.rhs(), i));
      case O::Or: return tri_or(at(f.lhs(), i), at(f.rhs(), i));
      case O::Implies: return tri_or(tri_not(at(f.lhs(), i)), at(f.rhs(), i));
      case O::Until: return until(f.lhs(), f.rhs(), i);
    }
    return Tri::Undetermined;
  }

  // (exists j >= i: b at j and a on [i, j)) or a at every k >= i.
  Tri until(const TemporalFormula& a, const TemporalFormula& b, std::size_t i) const {
    std::size_t horizon;
    if (prefix.lasso) {
      // Beyond max(start, 1) every suffix recurs with the lasso period.
      horizon = std::max({i, prefix.lasso->start, std::size_t{1}}) + prefix.lasso->period;
    } else {
      horizon = prefix.states.size();
    }
    Tri found = Tri::False, all_a = Tri::True;
    for (std::size_t k = i; k < horizon; ++k) {
      found = tri_or(found, tri_and(all_a, at(b, k)));
      all_a = tri_and(all_a, at(a, k));
      if (found == Tri::True) return Tri::True;
      if (all_a == Tri::False) return found;
    }
    if (prefix.lasso) return tri_or(found, all_a);
    return tri_or(found, tri_and(all_a, Tri::Undetermined));
  }
};

}  // namespace

Tri eval_temporal(const Agent& agent, const TracePrefix& prefix, const TemporalFormula& phi, std::size_t position) {
  return TraceEval{agent, prefix}.at(phi, position);
}

// ------------------------------------------------------------------ graphs

namespace {

MSFormula to_state(const TemporalFormula& f) {
  using O = TemporalFormula::Op;
  switch (f.op()) {
    case O::State: return f.state_formula();
    case O::Not: return MSFormula::negation(to_state(f.lhs()));
    case O::And: return MSFormula::conj(to_state(f.lhs()), to_state(f.rhs()));
    case O::Or: return MSFormula::disj(to_state(f.lhs()), to_state(f.rhs()));
    case O::Implies: return MSFormula::implies(to_state(f.lhs()), to_state(f.rhs()));
    default: throw UnsupportedError("until arguments must be state formulas on graphs: " + f.text());
  }
}

// Each until subformula is decided by the path taken from the current node.
// Along a path an until atom is pending while `a & !b` holds and resolves
// to true at the first b or to false at the first !a & !b; staying pending
// forever means true. A path is a fair trace suffix iff it ends in a cycle
// that schedules every action.
class GraphEval {
 public:
  GraphEval(const Agent& agent, const StateGraph& g, const TemporalFormula& phi) : agent_(agent), g_(g), phi_(phi) {
    collect(phi);
    if (atoms_.size() > 12) throw UnsupportedError("too many until subformulas");
    for (auto& [a, b] : atoms_) {
      a_vals_.push_back(values(a));
      b_vals_.push_back(values(b));
    }
  }

  // A truth assignment to the until atoms under which phi fails, if a fair
  // path from `node` realizes one.
  std::optional<std::uint32_t> refute(std::size_t node, bool initial) {
    for (std::uint32_t alpha : realizable(node))
      if (!skeleton(phi_, node, initial, alpha)) return alpha;
    return std::nullopt;
  }

  std::string describe(std::uint32_t alpha) const {
    std::string s;
    for (std::size_t j = 0; j < atoms_.size(); ++j)
      s += (j ? ", " : "") + atom_text_[j] + " = " + ((alpha >> j) & 1 ? "true" : "false");
    return s;
  }

 private:
  void collect(const TemporalFormula& f) {
    using O = TemporalFormula::Op;
    switch (f.op()) {
      case O::State:
      case O::Init: return;
      case O::Not: collect(f.lhs()); return;
      case O::Until: {
        if (atom_index_.count(f.text())) return;
        atom_index_[f.text()] = atoms_.size();
        atom_text_.push_back(f.text());
        atoms_.emplace_back(to_state(f.lhs()), to_state(f.rhs()));
        return;
      }
      default:
        collect(f.lhs());
        collect(f.rhs());
    }
  }

  const std::vector<bool>& values(const MSFormula& f) {
    auto it = leaf_cache_.find(f.text());
    if (it != leaf_cache_.end()) return it->second;
    std::vector<bool> v(g_.nodes.size());
    for (std::size_t n = 0; n < g_.nodes.size(); ++n) v[n] = eval_msf(g_.nodes[n], f, &agent_);
    return leaf_cache_.emplace(f.text(), std::move(v)).first->second;
  }

  bool skeleton(const TemporalFormula& f, std::size_t node, bool initial, std::uint32_t alpha) {
    using O = TemporalFormula::Op;
    switch (f.op()) {
      case O::State: return values(f.state_formula())[node];
      case O::Init: return initial;
      case O::Not: return !skeleton(f.lhs(), node, initial, alpha);
      case O::And: return skeleton(f.lhs(), node, initial, alpha) && skeleton(f.rhs(), node, initial, alpha);
      case O::Or: return skeleton(f.lhs(), node, initial, alpha) || skeleton(f.rhs(), node, initial, alpha);
      case O::Implies: return !skeleton(f.lhs(), node, initial, alpha) || skeleton(f.rhs(), node, initial, alpha);
      case O::Until: return (alpha >> atom_index_.at(f.text())) & 1;
    }
    return false;
  }

  // Resolution vector: two bits per atom, 0 pending, 1 true, 2 false.
  std::uint32_t update(std::uint32_t vec, std::size_t node) const {
    for (std::size_t j = 0; j < atoms_.size(); ++j) {
      if (((vec >> (2 * j)) & 3) != 0) continue;
      if (b_vals_[j][node])
        vec |= 1u << (2 * j);
      else if (!a_vals_[j][node])
        vec |= 2u << (2 * j);
    }
    return vec;
  }

  std::uint32_t final_alpha(std::uint32_t vec) const {
    std::uint32_t alpha = 0;
    for (std::size_t j = 0; j < atoms_.size(); ++j)
      if (((vec >> (2 * j)) & 3) != 2) alpha |= 1u << j;
    return alpha;
  }

  // Nodes lying on a fair cycle that keeps every pending atom of vec pending.
  const std::vector<bool>& fair_core(std::uint32_t vec) {
    auto it = core_cache_.find(vec);
    if (it != core_cache_.end()) return it->second;
    const std::size_t n = g_.nodes.size();
    std::vector<bool> keep(n);
    for (std::size_t v = 0; v < n; ++v) keep[v] = update(vec, v) == vec;
    std::vector<std::vector<std::size_t>> adj(n);
    for (const auto& e : g_.edges)
      if (keep[e.from] && keep[e.to]) adj[e.from].push_back(e.to);
    std::vector<bool> core(n, false);
    std::vector<std::size_t> comp_of(n, SIZE_MAX);
    auto comps = strongly_connected(adj);
    for (std::size_t c = 0; c < comps.size(); ++c)
      for (auto v : comps[c]) comp_of[v] = c;
    std::vector<std::vector<bool>> labels(comps.size(), std::vector<bool>(g_.actions, false));
    for (const auto& e : g_.edges)
      if (keep[e.from] && keep[e.to] && comp_of[e.from] == comp_of[e.to]) labels[comp_of[e.from]][e.action] = true;
    for (std::size_t c = 0; c < comps.size(); ++c) {
      if (!keep[comps[c][0]]) continue;
      if (std::all_of(labels[c].begin(), labels[c].end(), [](bool x) { return x; }))
        for (auto v : comps[c]) core[v] = true;
    }
    return core_cache_.emplace(vec, std::move(core)).first->second;
  }

  std::set<std::uint32_t> realizable(std::size_t start) {
    std::set<std::uint32_t> out;
    std::set<std::pair<std::size_t, std::uint32_t>> seen;
    std::vector<std::pair<std::size_t, std::uint32_t>> queue{{start, update(0, start)}};
    seen.insert(queue[0]);
    for (std::size_t q = 0; q < queue.size(); ++q) {
      auto [v, vec] = queue[q];
      if (fair_core(vec)[v]) out.insert(final_alpha(vec));
      for (std::size_t a = 0; a < g_.actions; ++a) {
        std::size_t w = g_.edge(v, a).to;
        std::pair<std::size_t, std::uint32_t> next{w, update(vec, w)};
        if (seen.insert(next).second) queue.push_back(next);
      }
    }
    return out;
  }

  const Agent& agent_;
  const StateGraph& g_;
  TemporalFormula phi_;
  std::vector<std::pair<MSFormula, MSFormula>> atoms_;
  std::vector<std::string> atom_text_;
  std::map<std::string, std::size_t> atom_index_;
  std::vector<std::vector<bool>> a_vals_, b_vals_;
  std::unordered_map<std::string, std::vector<bool>> leaf_cache_;
  std::unordered_map<std::uint32_t, std::vector<bool>> core_cache_;
};

}  // namespace

bool eval_temporal(const Agent& agent, const StateGraph& graph, const TemporalFormula& phi, std::size_t node,
                   bool initial) {
  return !GraphEval(agent, graph, phi).refute(node, initial);
}

TemporalVerdict graph_valid(const Agent& agent, const StateGraph& graph, const TemporalFormula& phi) {
  GraphEval ev(agent, graph, phi);
  // Position 0 is the initial node; later positions are edge targets.
  std::vector<bool> later(graph.nodes.size(), false);
  for (const auto& e : graph.edges) later[e.to] = true;
  TemporalVerdict out;
  auto fail = [&](std::size_t node, bool initial, std::uint32_t alpha) {
    out.holds = false;
    out.node = node;
    out.initial = initial;
    out.detail = "fails at " + std::string(initial ? "the initial position" : "a later position") + " in state " +
                 graph.nodes[node].digest_hex() + (ev.describe(alpha).empty() ? "" : " with " + ev.describe(alpha));
  };
  if (auto alpha = ev.refute(0, true)) {
    fail(0, true, *alpha);
    return out;
  }
  for (std::size_t v = 0; v < graph.nodes.size(); ++v) {
    if (!later[v]) continue;
    if (auto alpha = ev.refute(v, false)) {
      fail(v, false, *alpha);
      return out;
    }
  }
  return out;
}

}  // namespace goal
