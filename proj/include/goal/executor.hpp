#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "goal/agent_program.hpp"

namespace goal {

enum class SchedulerKind { RoundRobin, FairRandom, Unfair };

struct SchedulerConfig {
  SchedulerKind kind = SchedulerKind::RoundRobin;
  std::uint64_t seed = 0;
};

const char* scheduler_name(SchedulerKind kind);

// Picks the next conditional action (an index into the program).
// FairRandom draws uniformly but never lets an action go unscheduled for
// more than |program| consecutive steps; Unfair draws uniformly with no
// guarantee and is meant for demonstrations only.
class Scheduler {
 public:
  Scheduler(SchedulerConfig config, std::size_t actions);
  std::size_t next();

 private:
  SchedulerConfig config_;
  std::size_t n_;
  std::uint64_t t_ = 0;
  std::vector<std::uint64_t> deadline_;
  std::mt19937_64 rng_;
};

struct Step {
  MentalState from;
  std::size_t action;
  bool executed;
  MentalState to;
};

Step step(const Agent& agent, const MentalState& state, std::size_t action);

struct TracePrefix {
  struct Lasso {
    std::size_t start;   // first state of the repeated segment
    std::size_t period;  // its length in steps
  };

  std::vector<MentalState> states;
  std::vector<std::size_t> actions;
  std::vector<bool> executed;
  SchedulerConfig scheduler;
  std::size_t program_size = 0;
  std::optional<Lasso> lasso;

  std::size_t length() const { return actions.size(); }
  // Position i of the infinite trace when it is determined by the prefix
  // (directly or through the lasso), else nullptr.
  const MentalState* state_at(std::size_t i) const;
};

TracePrefix run(const Agent& agent, SchedulerConfig scheduler, std::size_t steps);

struct Edge {
  std::size_t from;
  std::size_t action;
  std::size_t to;
  bool executed;
};

// Reachable states; node 0 is the initial state and every node has exactly
// one outgoing edge per conditional action (idle edges are self-loops).
struct StateGraph {
  std::vector<MentalState> nodes;
  std::vector<Edge> edges;  // edges[node * actions + action]
  std::size_t actions = 0;

  const Edge& edge(std::size_t node, std::size_t action) const { return edges[node * actions + action]; }
  std::optional<std::size_t> find(const MentalState& state) const;
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> by_digest;
};

struct ReachOptions {
  std::size_t budget = 10000;
  std::size_t jobs = 1;
};

// GOAL_BUDGET from the environment, else 10000.
std::size_t default_budget();

StateGraph reachable(const Agent& agent, const ReachOptions& options = {});

// Every full window of |program| steps (round-robin) or |program|+1 steps
// (random schedulers) schedules every action.
bool fairness_check(const TracePrefix& prefix);
std::size_t max_omission_streak(const TracePrefix& prefix);

// An action continuously enabled around a fair cycle of the graph that the
// cycle never executes; returns the offending action and cycle nodes.
struct StarvationWitness {
  std::size_t action;
  std::vector<std::size_t> nodes;
};
std::optional<StarvationWitness> find_starvation(const Agent& agent, const StateGraph& graph);

std::vector<std::vector<std::size_t>> strongly_connected(const std::vector<std::vector<std::size_t>>& adj);

std::string dump_trace(const Agent& agent, const TracePrefix& prefix);
std::string graph_dot(const Agent& agent, const StateGraph& graph);

}  // namespace goal
