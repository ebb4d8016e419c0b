#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "goal/temporal.hpp"

namespace goal {

struct Verdict {
  bool holds = true;
  std::optional<MentalState> witness;  // present whenever holds is false
  std::string scope;
  std::string detail;
  std::size_t states_checked = 0;
};

// ----------------------------------------------------------- Hoare triples

// {pre} a {post}: at every scope state satisfying pre, post holds after a
// when a is enabled and in place when it is not.
Verdict check_hoare_basic(const MSFormula& pre, const Action& a, const MSFormula& post,
                          const std::vector<MentalState>& states, const std::string& scope,
                          const EnabledOracle* ctx = nullptr);
// Over enumerate_universe(vocab, max_generators).
Verdict check_hoare_universe(const MSFormula& pre, const Action& a, const MSFormula& post, const VocabPtr& vocab,
                             std::size_t max_generators = 2);

// {pre} cond -> do(a) {post} over an explicit state set.
Verdict check_hoare_conditional(const MSFormula& pre, const ConditionalAction& b, const MSFormula& post,
                                const std::vector<MentalState>& states, const std::string& scope,
                                const EnabledOracle* ctx = nullptr);
// Agent-relative version over the reachable graph.
Verdict check_hoare_conditional(const Agent& agent, const StateGraph& graph, const MSFormula& pre, std::size_t action,
                                const MSFormula& post);

// ---------------------------------------------------------------------- wlp

// sigma with every G(chi) such that phi -> chi is a tautology replaced by !B(chi).
MSFormula substitute_adopt(const MSFormula& sigma, const Formula& phi);
// sigma with every G(chi) such that chi -> phi is a tautology replaced by false.
MSFormula substitute_drop(const MSFormula& sigma, const Formula& phi);

// Weakest liberal precondition. Capabilities use the axiom whose capability
// and postcondition match; ins/adopt/drop are exact everywhere, del is
// exact on states with canonical beliefs and unfiltered goals.
MSFormula wlp(const Action& a, const MSFormula& sigma, const Vocabulary& vocab,
              const std::vector<HoareAxiom>& axioms = {});
MSFormula wlp(const ConditionalAction& b, const MSFormula& sigma, const Vocabulary& vocab,
              const std::vector<HoareAxiom>& axioms = {});

using Statement = std::variant<Action, ConditionalAction>;

// Validity of pre -> wlp(statement, post) by the bounded oracle.
Verdict derive_hoare(const MSFormula& pre, const Statement& statement, const MSFormula& post, const Vocabulary& vocab,
                     const std::vector<HoareAxiom>& axioms = {}, OracleBounds bounds = {});

// ------------------------------------------------------- temporal reduction

struct ActionCheck {
  std::string label;
  MSFormula pre, post;
  Verdict verdict;
};

struct UnlessVerdict {
  Verdict overall;
  std::vector<ActionCheck> per_action;  // {phi & !psi} b {phi | psi}
};

UnlessVerdict check_unless(const Agent& agent, const StateGraph& graph, const MSFormula& phi, const MSFormula& psi);

struct EnsuresVerdict {
  Verdict overall;
  UnlessVerdict unless;
  std::optional<std::size_t> witness_action;  // program index
  Verdict progress;                            // the witness search
};

// Sufficient check: unless, plus an action b with {phi & !psi} b {psi} that
// is enabled at every reachable phi & !psi state.
EnsuresVerdict check_ensures(const Agent& agent, const StateGraph& graph, const MSFormula& phi, const MSFormula& psi);

struct LeadsToConclusion {
  MSFormula lhs, rhs;
};

struct LeadsToVerdict {
  Verdict overall;
  LeadsToConclusion conclusion;
  std::string rule;  // leadsto-ensures, leadsto-trans or leadsto-disj
};

// Resolves a proof leaf to its conclusion and whether it was established.
using LeafLookup = std::function<std::pair<LeadsToConclusion, Verdict>(const std::string& name)>;

// Checks the rule at every node; throws ValidationError on a malformed tree.
LeadsToVerdict check_leadsto(const ProofTerm& proof, const LeafLookup& lookup);
// Leaves resolved against the agent's ensures/leadsto properties.
LeadsToVerdict check_leadsto(const Agent& agent, const StateGraph& graph, const ProofTerm& proof);

// ------------------------------------------------------------------ reports

struct Obligation {
  std::string name;
  std::string rule;
  std::string scope;
  bool holds = true;
  std::optional<MentalState> witness;
  std::string detail;
};

struct Report {
  std::vector<Obligation> obligations;
  std::size_t reachable_states = 0;
  bool all_hold() const;
  std::string text() const;
  std::string records() const;  // one JSON object per line
};

struct VerifyOptions {
  std::size_t jobs = 1;
  std::size_t budget = 10000;
  // Restrict to these properties (plus the proof steps they cite); empty = all.
  std::vector<std::string> only;
  bool check_axioms = true;
};

Report verify_agent(const Agent& agent, const VerifyOptions& options = {});

// "{pre} statement {post}" against the agent: semantically over the
// reachable states, or by wlp plus the validity oracle.
enum class TripleMode { Semantic, Wlp };
Report check_triple(const Agent& agent, std::string_view triple, TripleMode mode, const VerifyOptions& options = {});

}  // namespace goal
