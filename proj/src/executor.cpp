#include "goal/executor.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <functional>
#include <map>
#include <sstream>
#include <thread>

namespace goal {

const char* scheduler_name(SchedulerKind kind) {
  switch (kind) {
    case SchedulerKind::RoundRobin: return "rr";
    case SchedulerKind::FairRandom: return "random";
    case SchedulerKind::Unfair: return "unfair";
  }
  return "?";
}

Scheduler::Scheduler(SchedulerConfig config, std::size_t actions)
    : config_(config), n_(actions), deadline_(actions, actions), rng_(config.seed) {
  if (actions == 0) throw ValidationError("scheduler needs at least one action");
}

std::size_t Scheduler::next() {
  const std::uint64_t t = t_++;
  if (config_.kind == SchedulerKind::RoundRobin) return static_cast<std::size_t>(t % n_);
  auto pick = static_cast<std::size_t>(rng_() % n_);
  if (config_.kind == SchedulerKind::Unfair) return pick;

  // Accept the random pick only if every other action can still meet its
  // deadline when the remaining ones are served earliest-deadline-first.
  auto feasible = [&](std::size_t chosen) {
    std::vector<std::uint64_t> rest;
    for (std::size_t b = 0; b < n_; ++b)
      if (b != chosen) rest.push_back(deadline_[b]);
    std::sort(rest.begin(), rest.end());
    for (std::size_t k = 0; k < rest.size(); ++k)
      if (rest[k] < t + k + 1) return false;
    return deadline_[chosen] >= t;
  };
  if (!feasible(pick))
    pick = static_cast<std::size_t>(std::min_element(deadline_.begin(), deadline_.end()) - deadline_.begin());
  deadline_[pick] = t + n_ + 1;
  return pick;
}

Step step(const Agent& agent, const MentalState& state, std::size_t action) {
  const ConditionalAction& b = agent.program().at(action);
  if (eval_msf(state, b.condition)) {
    if (auto next = apply_M(b.action, state)) return {state, action, true, *next};
  }
  return {state, action, false, state};
}

const MentalState* TracePrefix::state_at(std::size_t i) const {
  if (i < states.size()) return &states[i];
  if (!lasso) return nullptr;
  std::size_t k = lasso->start + (i - lasso->start) % lasso->period;
  return k < states.size() ? &states[k] : nullptr;
}

namespace {

bool quiescent(const Agent& agent, const MentalState& s) {
  for (const auto& b : agent.program())
    if (enabled_cond(b, s)) return false;
  return true;
}

}  // namespace

TracePrefix run(const Agent& agent, SchedulerConfig config, std::size_t steps) {
  TracePrefix tr;
  tr.scheduler = config;
  tr.program_size = agent.program().size();
  tr.states.push_back(agent.initial());
  Scheduler sched(config, tr.program_size);
  std::map<std::pair<std::string, std::size_t>, std::size_t> seen;  // round-robin phase memo
  for (std::size_t i = 0; i < steps; ++i) {
    if (config.kind == SchedulerKind::RoundRobin && !tr.lasso) {
      auto key = std::make_pair(tr.states[i].canonical(), i % tr.program_size);
      auto [it, fresh] = seen.emplace(key, i);
      if (!fresh) tr.lasso = TracePrefix::Lasso{it->second, i - it->second};
    }
    std::size_t a = sched.next();
    Step s = step(agent, tr.states[i], a);
    tr.actions.push_back(a);
    tr.executed.push_back(s.executed);
    tr.states.push_back(s.to);
  }
  if (!tr.lasso) {
    if (config.kind == SchedulerKind::RoundRobin) {
      auto key = std::make_pair(tr.states.back().canonical(), steps % tr.program_size);
      if (auto it = seen.find(key); it != seen.end()) tr.lasso = TracePrefix::Lasso{it->second, steps - it->second};
    }
    if (!tr.lasso && quiescent(agent, tr.states.back())) tr.lasso = TracePrefix::Lasso{steps, 1};
  }
  return tr;
}

// ------------------------------------------------------------------ graph

std::optional<std::size_t> StateGraph::find(const MentalState& s) const {
  auto it = by_digest.find(s.digest());
  if (it == by_digest.end()) return std::nullopt;
  for (auto id : it->second)
    if (nodes[id] == s) return id;
  return std::nullopt;
}

std::size_t default_budget() {
  if (const char* env = std::getenv("GOAL_BUDGET")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return 10000;
}

StateGraph reachable(const Agent& agent, const ReachOptions& options) {
  StateGraph g;
  const std::size_t n = agent.program().size();
  g.actions = n;
  auto add = [&](const MentalState& s) -> std::size_t {
    if (auto id = g.find(s)) return *id;
    if (g.nodes.size() >= options.budget)
      throw BoundsError("state budget of " + std::to_string(options.budget) + " nodes exceeded");
    g.nodes.push_back(s);
    g.by_digest[s.digest()].push_back(g.nodes.size() - 1);
    return g.nodes.size() - 1;
  };
  add(agent.initial());
  std::size_t level_begin = 0;
  while (level_begin < g.nodes.size()) {
    const std::size_t level_end = g.nodes.size();
    const std::size_t width = level_end - level_begin;
    std::vector<Step> succ;
    succ.reserve(width * n);
    for (std::size_t k = 0; k < width * n; ++k) succ.push_back({g.nodes[level_begin], 0, false, g.nodes[level_begin]});
    auto work = [&](std::size_t k) { succ[k] = step(agent, g.nodes[level_begin + k / n], k % n); };
    std::size_t jobs = std::min<std::size_t>(std::max<std::size_t>(options.jobs, 1), width * n);
    if (jobs <= 1) {
      for (std::size_t k = 0; k < width * n; ++k) work(k);
    } else {
      std::atomic<std::size_t> cursor{0};
      std::vector<std::thread> pool;
      for (std::size_t j = 0; j < jobs; ++j)
        pool.emplace_back([&] {
          for (std::size_t k; (k = cursor.fetch_add(1)) < width * n;) work(k);
        });
      for (auto& th : pool) th.join();
    }
    // Sequential merge keeps node numbering independent of the job count.
    for (std::size_t k = 0; k < width * n; ++k) {
      std::size_t from = level_begin + k / n;
      std::size_t to = succ[k].executed ? add(succ[k].to) : from;
      g.edges.push_back({from, k % n, to, succ[k].executed});
    }
    level_begin = level_end;
  }
  return g;
}

// --------------------------------------------------------------- fairness

bool fairness_check(const TracePrefix& p) {
  const std::size_t n = p.program_size;
  if (n == 0) return false;
  const std::size_t w = p.scheduler.kind == SchedulerKind::RoundRobin ? n : n + 1;
  if (p.actions.size() < w) return true;
  std::vector<std::size_t> count(n, 0);
  std::size_t covered = 0;
  for (std::size_t i = 0; i < p.actions.size(); ++i) {
    if (count[p.actions[i]]++ == 0) ++covered;
    if (i >= w && --count[p.actions[i - w]] == 0) --covered;
    if (i + 1 >= w && covered != n) return false;
  }
  return true;
}

std::size_t max_omission_streak(const TracePrefix& p) {
  std::size_t worst = 0;
  for (std::size_t b = 0; b < p.program_size; ++b) {
    std::size_t run = 0;
    for (auto a : p.actions) {
      run = a == b ? 0 : run + 1;
      worst = std::max(worst, run);
    }
  }
  return worst;
}

std::vector<std::vector<std::size_t>> strongly_connected(const std::vector<std::vector<std::size_t>>& adj) {
  const std::size_t n = adj.size();
  std::vector<std::size_t> index(n, SIZE_MAX), low(n, 0), stack;
  std::vector<bool> on_stack(n, false);
  std::vector<std::vector<std::size_t>> out;
  std::size_t counter = 0;
  struct Frame {
    std::size_t v, next;
  };
  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != SIZE_MAX) continue;
    std::vector<Frame> frames{{root, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!frames.empty()) {
      Frame& f = frames.back();
      if (f.next < adj[f.v].size()) {
        std::size_t w = adj[f.v][f.next++];
        if (index[w] == SIZE_MAX) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
        continue;
      }
      std::size_t v = f.v;
      frames.pop_back();
      if (!frames.empty()) low[frames.back().v] = std::min(low[frames.back().v], low[v]);
      if (low[v] == index[v]) {
        std::vector<std::size_t> comp;
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp.push_back(w);
        } while (w != v);
        std::sort(comp.begin(), comp.end());
        out.push_back(std::move(comp));
      }
    }
  }
  return out;
}

std::optional<StarvationWitness> find_starvation(const Agent& agent, const StateGraph& g) {
  const std::size_t n = g.actions;
  for (std::size_t b = 0; b < n; ++b) {
    std::vector<bool> keep(g.nodes.size());
    for (std::size_t v = 0; v < g.nodes.size(); ++v) keep[v] = enabled_cond(agent.program()[b], g.nodes[v]);
    // Cycles through b-enabled nodes on which b is never executed.
    std::vector<std::vector<std::size_t>> adj(g.nodes.size());
    for (const auto& e : g.edges)
      if (keep[e.from] && keep[e.to] && !(e.action == b && e.executed)) adj[e.from].push_back(e.to);
    for (const auto& comp : strongly_connected(adj)) {
      if (!keep[comp[0]]) continue;
      std::vector<bool> in(g.nodes.size(), false);
      for (auto v : comp) in[v] = true;
      std::vector<bool> label(n, false);
      for (const auto& e : g.edges)
        if (in[e.from] && in[e.to] && !(e.action == b && e.executed)) label[e.action] = true;
      if (std::all_of(label.begin(), label.end(), [](bool x) { return x; })) return StarvationWitness{b, comp};
    }
  }
  return std::nullopt;
}

// ----------------------------------------------------------------- output

namespace {

std::string state_fields(const MentalState& s) { return s.canonical(); }

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

std::string dump_trace(const Agent& agent, const TracePrefix& p) {
  std::ostringstream out;
  out << "init | " << state_fields(p.states[0]) << "\n";
  for (std::size_t i = 0; i < p.actions.size(); ++i)
    out << "step " << i << " | " << agent.program()[p.actions[i]].label << " | "
        << (p.executed[i] ? "executed" : "idle") << " | " << state_fields(p.states[i + 1]) << "\n";
  if (p.lasso) out << "lasso | from state " << p.lasso->start << " | period " << p.lasso->period << "\n";
  return out.str();
}

std::string graph_dot(const Agent& agent, const StateGraph& g) {
  std::ostringstream out;
  out << "digraph agent {\n  node [shape=box, fontname=\"monospace\"];\n";
  for (std::size_t v = 0; v < g.nodes.size(); ++v)
    out << "  n" << v << " [label=\"" << g.nodes[v].digest_hex() << "\", tooltip=\""
        << dot_escape(g.nodes[v].canonical()) << "\"" << (v == 0 ? ", peripheries=2" : "") << "];\n";
  for (const auto& e : g.edges) {
    out << "  n" << e.from << " -> n" << e.to << " [label=\"" << dot_escape(agent.program()[e.action].label) << "\"";
    if (!e.executed) out << ", style=dotted";
    out << "];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace goal
