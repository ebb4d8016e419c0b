#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "goal/mental_state.hpp"

namespace goal {

struct EffectClause {
  Formula guard;
  std::vector<Formula> add;
  std::vector<Formula> remove;
};

// A belief capability: the first clause whose guard the beliefs entail fires.
struct CapabilitySpec {
  std::string name;
  std::vector<EffectClause> clauses;
};

using CapabilityPtr = std::shared_ptr<const CapabilitySpec>;

CapabilityPtr ins_capability(const Formula& phi);
CapabilityPtr del_capability(const Formula& phi);

// A basic action: a user capability, a built-in ins/del, or adopt/drop.
class Action {
 public:
  enum class Kind { Capability, Ins, Del, Adopt, Drop };

  static Action capability(CapabilityPtr cap);
  static Action ins(Formula phi);
  static Action del(Formula phi);
  static Action adopt(Formula phi);
  static Action drop(Formula phi);

  Kind kind() const { return kind_; }
  bool is_goal_action() const { return kind_ == Kind::Adopt || kind_ == Kind::Drop; }
  const CapabilitySpec& spec() const { return *cap_; }  // not for adopt/drop
  const CapabilityPtr& spec_ptr() const { return cap_; }
  const Formula& argument() const { return arg_; }  // not for user capabilities
  std::string label() const;
  ActionRef ref() const;

 private:
  Kind kind_ = Kind::Drop;
  CapabilityPtr cap_;
  Formula arg_;
};

// Guarded action `condition -> do(action)`.
struct ConditionalAction {
  std::string label;
  MSFormula condition;
  Action action;
  std::string text() const;
};

// T(a, Sigma): nullopt when no clause fires or the result is inconsistent.
std::optional<std::vector<Formula>> apply_T(const CapabilitySpec& cap, const std::vector<Formula>& beliefs,
                                            std::size_t atoms);

bool enabled_cap(const Action& action, const MentalState& state);
bool enabled_cond(const ConditionalAction& b, const MentalState& state);

// The mental-state transformer M; nullopt when the action is not enabled.
std::optional<MentalState> apply_M(const Action& action, const MentalState& state);

// True when no formula is a member of the entry under any beliefs.
bool entry_is_dead(const ModelSet& goal, const std::vector<ModelSet>& dropped);

}  // namespace goal
