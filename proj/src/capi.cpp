#include "goal/goal.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "goal/verifier.hpp"

struct goal_agent {
  goal::Agent agent;
};

namespace {

thread_local std::string last_error;

goal_status fail(goal_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

char* copy_out(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

// Runs fn, translating exceptions into status codes.
template <class Fn>
goal_status guarded(Fn&& fn) {
  try {
    last_error.clear();
    return fn();
  } catch (const goal::ParseError& e) {
    return fail(GOAL_PARSE_ERROR, std::string("parse error: ") + e.what());
  } catch (const goal::BoundsError& e) {
    return fail(GOAL_BUDGET_EXCEEDED, std::string("bounds exceeded: ") + e.what());
  } catch (const goal::ValidationError& e) {
    return fail(GOAL_PARSE_ERROR, std::string("invalid input: ") + e.what());
  } catch (const goal::UnsupportedError& e) {
    return fail(GOAL_PARSE_ERROR, std::string("unsupported: ") + e.what());
  } catch (const std::exception& e) {
    return fail(GOAL_INTERNAL_ERROR, std::string("internal error: ") + e.what());
  } catch (...) {
    return fail(GOAL_INTERNAL_ERROR, "internal error");
  }
}

goal_options resolve(const goal_options* options) {
  goal_options o;
  goal_options_init(&o);
  return options ? *options : o;
}

goal::VerifyOptions verify_options(const goal_options& o) {
  goal::VerifyOptions v;
  v.jobs = o.jobs ? o.jobs : 1;
  v.budget = static_cast<std::size_t>(o.budget);
  return v;
}

goal_status emit(const goal::Report& r, const goal_options& o, char** out) {
  *out = copy_out(o.format == GOAL_FORMAT_RECORDS ? r.records() : r.text());
  return r.all_hold() ? GOAL_OK : GOAL_PROPERTY_FAILED;
}

template <class Make>
goal_status make_agent(goal_agent** out, Make&& make) {
  if (!out) return fail(GOAL_INVALID_ARGUMENT, "null output pointer");
  *out = nullptr;
  return guarded([&] {
    *out = new goal_agent{make()};
    return GOAL_OK;
  });
}

}  // namespace

extern "C" {

void goal_options_init(goal_options* options) {
  if (!options) return;
  options->scheduler = GOAL_SCHED_ROUND_ROBIN;
  options->seed = 0;
  options->steps = 64;
  options->jobs = 1;
  options->budget = goal::default_budget();
  options->format = GOAL_FORMAT_TEXT;
}

goal_status goal_agent_from_file(const char* path, goal_agent** out) {
  if (!path) return fail(GOAL_INVALID_ARGUMENT, "null path");
  return make_agent(out, [&] { return goal::load_agent_file(path); });
}

goal_status goal_agent_from_string(const char* text, goal_agent** out) {
  if (!text) return fail(GOAL_INVALID_ARGUMENT, "null text");
  return make_agent(out, [&] { return goal::parse_agent(text); });
}

goal_status goal_agent_from_fixture(const char* name, goal_agent** out) {
  if (!name) return fail(GOAL_INVALID_ARGUMENT, "null fixture name");
  return make_agent(out, [&] { return goal::load_fixture(name); });
}

void goal_agent_free(goal_agent* agent) { delete agent; }

goal_status goal_agent_describe(const goal_agent* agent, char** out) {
  if (!agent || !out) return fail(GOAL_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = copy_out(goal::print_agent(agent->agent));
    return GOAL_OK;
  });
}

goal_status goal_run(const goal_agent* agent, const goal_options* options, char** trace) {
  if (!agent || !trace) return fail(GOAL_INVALID_ARGUMENT, "null argument");
  goal_options o = resolve(options);
  goal::SchedulerConfig sc;
  switch (o.scheduler) {
    case GOAL_SCHED_ROUND_ROBIN: sc.kind = goal::SchedulerKind::RoundRobin; break;
    case GOAL_SCHED_FAIR_RANDOM: sc.kind = goal::SchedulerKind::FairRandom; break;
    case GOAL_SCHED_UNFAIR: sc.kind = goal::SchedulerKind::Unfair; break;
    default: return fail(GOAL_INVALID_ARGUMENT, "unknown scheduler");
  }
  sc.seed = o.seed;
  return guarded([&] {
    auto prefix = goal::run(agent->agent, sc, static_cast<std::size_t>(o.steps));
    *trace = copy_out(goal::dump_trace(agent->agent, prefix));
    return GOAL_OK;
  });
}

goal_status goal_verify(const goal_agent* agent, const goal_options* options, const char* const* properties,
                        size_t count, char** report) {
  if (!agent || !report || (count && !properties)) return fail(GOAL_INVALID_ARGUMENT, "null argument");
  goal_options o = resolve(options);
  return guarded([&] {
    goal::Agent a = agent->agent;
    goal::VerifyOptions v = verify_options(o);
    for (size_t i = 0; i < count; ++i) {
      if (!properties[i]) throw goal::ValidationError("null property");
      std::string sel = properties[i];
      if (a.find_property(sel)) {
        v.only.push_back(sel);
        continue;
      }
      goal::PropertyDecl p = goal::parse_property(sel, a);
      v.only.push_back(p.name);
      a = goal::with_property(a, std::move(p));
    }
    return emit(goal::verify_agent(a, v), o, report);
  });
}

goal_status goal_graph(const goal_agent* agent, const goal_options* options, char** dot) {
  if (!agent || !dot) return fail(GOAL_INVALID_ARGUMENT, "null argument");
  goal_options o = resolve(options);
  return guarded([&] {
    auto g = goal::reachable(agent->agent, {static_cast<std::size_t>(o.budget), o.jobs ? o.jobs : 1});
    *dot = copy_out(goal::graph_dot(agent->agent, g));
    return GOAL_OK;
  });
}

goal_status goal_check_triple(const goal_agent* agent, const goal_options* options, const char* triple,
                              goal_triple_mode mode, char** report) {
  if (!agent || !triple || !report) return fail(GOAL_INVALID_ARGUMENT, "null argument");
  if (mode != GOAL_TRIPLE_SEMANTIC && mode != GOAL_TRIPLE_WLP) return fail(GOAL_INVALID_ARGUMENT, "unknown mode");
  goal_options o = resolve(options);
  return guarded([&] {
    auto m = mode == GOAL_TRIPLE_WLP ? goal::TripleMode::Wlp : goal::TripleMode::Semantic;
    return emit(goal::check_triple(agent->agent, triple, m, verify_options(o)), o, report);
  });
}

const char* goal_last_error(void) { return last_error.c_str(); }

void goal_free_string(char* s) { std::free(s); }

const char* goal_version(void) { return "1.0.0"; }

}  // extern "C"
