#include "goal/capabilities.hpp"

#include <algorithm>

namespace goal {

CapabilityPtr ins_capability(const Formula& phi) {
  auto c = std::make_shared<CapabilitySpec>();
  c->name = "ins(" + phi.text() + ")";
  c->clauses.push_back({Formula::truth(), {phi}, {}});
  return c;
}

CapabilityPtr del_capability(const Formula& phi) {
  auto c = std::make_shared<CapabilitySpec>();
  c->name = "del(" + phi.text() + ")";
  c->clauses.push_back({Formula::truth(), {}, {phi}});
  return c;
}

Action Action::capability(CapabilityPtr cap) {
  Action a;
  a.kind_ = Kind::Capability;
  a.cap_ = std::move(cap);
  return a;
}

Action Action::ins(Formula phi) {
  Action a;
  a.kind_ = Kind::Ins;
  a.cap_ = ins_capability(phi);
  a.arg_ = std::move(phi);
  return a;
}

Action Action::del(Formula phi) {
  Action a;
  a.kind_ = Kind::Del;
  a.cap_ = del_capability(phi);
  a.arg_ = std::move(phi);
  return a;
}

Action Action::adopt(Formula phi) {
  Action a;
  a.kind_ = Kind::Adopt;
  a.arg_ = std::move(phi);
  return a;
}

Action Action::drop(Formula phi) {
  Action a;
  a.kind_ = Kind::Drop;
  a.arg_ = std::move(phi);
  return a;
}

std::string Action::label() const { return ref().text(); }

ActionRef Action::ref() const {
  switch (kind_) {
    case Kind::Capability: return ActionRef::named(cap_->name);
    case Kind::Ins: return ActionRef::ins(arg_);
    case Kind::Del: return ActionRef::del(arg_);
    case Kind::Adopt: return ActionRef::adopt(arg_);
    case Kind::Drop: return ActionRef::drop(arg_);
  }
  return ActionRef::named(cap_->name);
}

std::string ConditionalAction::text() const { return condition.text() + " -> do(" + action.label() + ")"; }

std::optional<std::vector<Formula>> apply_T(const CapabilitySpec& cap, const std::vector<Formula>& beliefs,
                                            std::size_t atoms) {
  const ModelSet sigma = models_of(beliefs, atoms);
  for (const auto& clause : cap.clauses) {
    if (!sigma.subset_of(ModelSet::of(clause.guard, atoms))) continue;
    std::vector<Formula> out;
    for (const auto& f : beliefs)
      if (std::find(clause.remove.begin(), clause.remove.end(), f) == clause.remove.end()) out.push_back(f);
    for (const auto& f : clause.add)
      if (std::find(out.begin(), out.end(), f) == out.end()) out.push_back(f);
    std::sort(out.begin(), out.end());
    if (models_of(out, atoms).empty()) return std::nullopt;
    return out;
  }
  return std::nullopt;
}

bool enabled_cap(const Action& action, const MentalState& state) {
  switch (action.kind()) {
    case Action::Kind::Adopt:
    case Action::Kind::Drop:
    case Action::Kind::Ins:
    case Action::Kind::Del: return builtin_enabled(action.ref(), state);
    case Action::Kind::Capability: return apply_T(action.spec(), state.beliefs(), state.atoms()).has_value();
  }
  return false;
}

bool enabled_cond(const ConditionalAction& b, const MentalState& state) {
  return eval_msf(state, b.condition) && enabled_cap(b.action, state);
}

bool entry_is_dead(const ModelSet& goal, const std::vector<ModelSet>& dropped) {
  // A member is any consistent psi with goal |= psi; psi escapes every filter
  // unless each delta covers all valuations but (at most) one outside goal.
  ModelSet killable(goal.atoms(), false);
  for (const auto& d : dropped) {
    if (d.full()) return true;
    ModelSet missing = ~d;
    if (missing.count() == 1) killable |= missing;
  }
  return (~goal).subset_of(killable);
}

std::optional<MentalState> apply_M(const Action& action, const MentalState& state) {
  const std::size_t n = state.atoms();
  const auto& goals = state.goals();
  switch (action.kind()) {
    case Action::Kind::Adopt: {
      if (!builtin_enabled(action.ref(), state)) return std::nullopt;
      std::vector<GoalEntry> out = goals;
      out.emplace_back(action.argument());
      return MentalState(state.vocabulary(), state.beliefs(), std::move(out));
    }
    case Action::Kind::Drop: {
      ModelSet phi = ModelSet::of(action.argument(), n);
      std::vector<GoalEntry> out;
      for (std::size_t i = 0; i < goals.size(); ++i) {
        if (!state.goal_models(i).subset_of(phi)) {
          out.push_back(goals[i]);
          continue;
        }
        std::vector<ModelSet> ds = state.dropped_models(i);
        ds.push_back(phi);
        if (entry_is_dead(state.goal_models(i), ds)) continue;
        std::vector<Formula> dropped = goals[i].dropped;
        dropped.push_back(action.argument());
        out.emplace_back(goals[i].goal, std::move(dropped));
      }
      return MentalState(state.vocabulary(), state.beliefs(), std::move(out));
    }
    case Action::Kind::Capability:
    case Action::Kind::Ins:
    case Action::Kind::Del: {
      auto sigma = apply_T(action.spec(), state.beliefs(), n);
      if (!sigma) return std::nullopt;
      ModelSet sm = models_of(*sigma, n);
      std::vector<GoalEntry> out;
      for (std::size_t i = 0; i < goals.size(); ++i)
        if (!sm.subset_of(state.goal_models(i))) out.push_back(goals[i]);
      return MentalState(state.vocabulary(), std::move(*sigma), std::move(out));
    }
  }
  return std::nullopt;
}

}  // namespace goal
