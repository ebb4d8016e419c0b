#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "goal/goal.h"

namespace {

int exit_code(goal_status s) {
  switch (s) {
    case GOAL_OK: return 0;
    case GOAL_PROPERTY_FAILED: return 1;
    case GOAL_PARSE_ERROR:
    case GOAL_INVALID_ARGUMENT: return 2;
    case GOAL_BUDGET_EXCEEDED: return 3;
    default: return 4;
  }
}

struct AgentHandle {
  goal_agent* ptr = nullptr;
  ~AgentHandle() { goal_agent_free(ptr); }
};

struct Common {
  std::string path;
  std::string fixture;
  std::string output;
};

goal_status load(const Common& c, AgentHandle& h) {
  if (!c.fixture.empty()) return goal_agent_from_fixture(c.fixture.c_str(), &h.ptr);
  return goal_agent_from_file(c.path.c_str(), &h.ptr);
}

// Writes the produced text (also on property failure) and maps the status.
int finish(goal_status s, char* text, const std::string& output) {
  if (text) {
    if (output.empty()) {
      std::fputs(text, stdout);
    } else {
      std::ofstream out(output, std::ios::binary);
      out << text;
      if (!out) {
        std::cerr << "goalc: cannot write " << output << "\n";
        goal_free_string(text);
        return 2;
      }
    }
    goal_free_string(text);
  }
  if (s != GOAL_OK && s != GOAL_PROPERTY_FAILED) std::cerr << "goalc: " << goal_last_error() << "\n";
  return exit_code(s);
}

void add_source(CLI::App* cmd, Common& c) {
  cmd->add_option("agent", c.path, "Agent file");
  cmd->add_option("--fixture", c.fixture, "Embedded example agent (shopping, shopping_literal, broken)");
  cmd->add_option("-o,--output", c.output, "Write the result to a file instead of stdout");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"GOAL agent interpreter and verifier"};
  app.require_subcommand(1);
  app.set_version_flag("--version", goal_version());

  goal_options opt;
  goal_options_init(&opt);
  Common common;
  std::string sched = "rr", format = "text", mode = "semantic";
  bool unfair = false;
  std::vector<std::string> properties, triple_args;

  const std::map<std::string, int> formats{{"text", 0}, {"records", 1}};

  auto* run = app.add_subcommand("run", "Execute the agent and print the trace");
  add_source(run, common);
  run->add_option("--sched", sched, "Scheduler")->check(CLI::IsMember({"rr", "random"}));
  run->add_option("--seed", opt.seed, "Seed for the random scheduler");
  run->add_option("--steps", opt.steps, "Number of steps");
  run->add_flag("--unfair", unfair, "Uniform random scheduling without the fairness guarantee (demonstration only)");

  auto* verify = app.add_subcommand("verify", "Check declared or given properties");
  add_source(verify, common);
  verify->add_option("--property", properties, "Property name or declaration, e.g. \"ensures p: B(a), B(b)\"");
  verify->add_option("--jobs", opt.jobs, "Worker threads")->check(CLI::PositiveNumber);
  verify->add_option("--budget", opt.budget, "Reachable-state budget")->check(CLI::PositiveNumber);
  verify->add_option("--format", format, "Report format")->check(CLI::IsMember({"text", "records"}));

  auto* graph = app.add_subcommand("graph", "Export the reachable state graph (DOT)");
  add_source(graph, common);
  graph->add_option("--jobs", opt.jobs, "Worker threads")->check(CLI::PositiveNumber);
  graph->add_option("--budget", opt.budget, "Reachable-state budget")->check(CLI::PositiveNumber);

  auto* triple = app.add_subcommand("check-triple", "Check a Hoare triple \"{pre} statement {post}\"");
  triple->add_option("args", triple_args, "[agent] triple")->required();
  triple->add_option("--fixture", common.fixture, "Embedded example agent");
  triple->add_option("-o,--output", common.output, "Write the result to a file instead of stdout");
  triple->add_option("--mode", mode, "semantic (reachable states) or wlp (derivation)")
      ->check(CLI::IsMember({"semantic", "wlp"}));
  triple->add_option("--jobs", opt.jobs, "Worker threads")->check(CLI::PositiveNumber);
  triple->add_option("--budget", opt.budget, "Reachable-state budget")->check(CLI::PositiveNumber);
  triple->add_option("--format", format, "Report format")->check(CLI::IsMember({"text", "records"}));

  auto* print = app.add_subcommand("print", "Print the agent with all placeholders expanded");
  add_source(print, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  std::string triple_text;
  if (triple->parsed()) {
    std::size_t want = common.fixture.empty() ? 2 : 1;
    if (triple_args.size() != want) {
      std::cerr << "goalc: check-triple expects " << (want == 2 ? "an agent file and a triple" : "a triple") << "\n";
      return 2;
    }
    if (want == 2) common.path = triple_args[0];
    triple_text = triple_args.back();
  }
  if (common.path.empty() == common.fixture.empty()) {
    std::cerr << "goalc: give exactly one of an agent file or --fixture\n";
    return 2;
  }
  opt.format = static_cast<goal_format>(formats.at(format));
  if (sched == "random") opt.scheduler = GOAL_SCHED_FAIR_RANDOM;
  if (unfair) opt.scheduler = GOAL_SCHED_UNFAIR;

  AgentHandle agent;
  if (goal_status s = load(common, agent); s != GOAL_OK) return finish(s, nullptr, common.output);

  char* text = nullptr;
  goal_status s = GOAL_OK;
  if (run->parsed()) {
    s = goal_run(agent.ptr, &opt, &text);
  } else if (verify->parsed()) {
    std::vector<const char*> props;
    for (const auto& p : properties) props.push_back(p.c_str());
    s = goal_verify(agent.ptr, &opt, props.data(), props.size(), &text);
  } else if (graph->parsed()) {
    s = goal_graph(agent.ptr, &opt, &text);
  } else if (triple->parsed()) {
    s = goal_check_triple(agent.ptr, &opt, triple_text.c_str(), mode == "wlp" ? GOAL_TRIPLE_WLP : GOAL_TRIPLE_SEMANTIC,
                          &text);
  } else {
    s = goal_agent_describe(agent.ptr, &text);
  }
  return finish(s, text, common.output);
}
