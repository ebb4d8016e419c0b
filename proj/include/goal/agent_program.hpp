#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "goal/capabilities.hpp"

namespace goal {

// Assumed Hoare triple for a user capability, used by the wlp calculus.
struct HoareAxiom {
  MSFormula pre;
  std::string capability;
  MSFormula post;
  std::string text() const;
};

// Leads-to derivation: a named ensures/leadsto property, or a rule node.
struct ProofTerm {
  enum class Kind { Ref, Trans, Disj };
  Kind kind = Kind::Ref;
  std::string name;  // Ref only
  std::vector<ProofTerm> children;
  std::string text() const;
};

struct PropertyDecl {
  enum class Kind { Invariant, Unless, Ensures, LeadsTo, Hoare };
  Kind kind = Kind::Invariant;
  std::string name;
  MSFormula lhs;  // invariant formula, first argument, or Hoare precondition
  MSFormula rhs;  // second argument or Hoare postcondition
  std::optional<ProofTerm> proof;  // LeadsTo
  std::optional<ActionRef> statement;  // Hoare
  std::string text() const;
};

const char* kind_keyword(PropertyDecl::Kind kind);

// The agent <Pi, Sigma0, Gamma0> together with its declarations.
class Agent : public EnabledOracle {
 public:
  Agent(VocabPtr vocab, std::vector<CapabilityPtr> capabilities, std::vector<ConditionalAction> program,
        MentalState initial, std::vector<HoareAxiom> axioms = {}, std::vector<PropertyDecl> properties = {});

  const VocabPtr& vocabulary() const { return vocab_; }
  const std::vector<CapabilityPtr>& capabilities() const { return capabilities_; }
  const std::vector<ConditionalAction>& program() const { return program_; }
  const MentalState& initial() const { return initial_; }
  const std::vector<HoareAxiom>& axioms() const { return axioms_; }
  const std::vector<PropertyDecl>& properties() const { return properties_; }

  const CapabilitySpec* find_capability(std::string_view name) const;
  const ConditionalAction* find_action(std::string_view label) const;
  std::optional<std::size_t> action_index(std::string_view label) const;
  const PropertyDecl* find_property(std::string_view name) const;

  bool enabled(const std::string& name, const MentalState& state) const override;

 private:
  VocabPtr vocab_;
  std::vector<CapabilityPtr> capabilities_;
  std::vector<ConditionalAction> program_;
  MentalState initial_;
  std::vector<HoareAxiom> axioms_;
  std::vector<PropertyDecl> properties_;
};

Agent parse_agent(std::string_view text);
Agent load_agent_file(const std::string& path);

// A single `properties` entry, e.g. "ensures step: B(p), B(q)", resolved
// against the agent's vocabulary, actions and existing properties.
PropertyDecl parse_property(std::string_view text, const Agent& agent);
Agent with_property(const Agent& agent, PropertyDecl property);

// Expanded, placeholder-free rendering in the agent file format.
std::string print_agent(const Agent& agent);

// Embedded example agents: "shopping", "shopping_literal", "broken".
std::vector<std::string> fixture_names();
std::optional<std::string_view> fixture_text(std::string_view name);
Agent load_fixture(std::string_view name);
Agent ground_shopping_fixture();

}  // namespace goal
