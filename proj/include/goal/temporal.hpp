#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "goal/executor.hpp"

namespace goal {

// Temporal formulas over mental-state formulas: init, boolean connectives
// and (weak) until. The remaining operators are abbreviations.
class TemporalFormula {
 public:
  enum class Op { State, Init, Not, And, Or, Implies, Until };

  static TemporalFormula state(MSFormula f);
  static TemporalFormula init();
  static TemporalFormula negation(TemporalFormula f);
  static TemporalFormula conj(TemporalFormula a, TemporalFormula b);
  static TemporalFormula disj(TemporalFormula a, TemporalFormula b);
  static TemporalFormula implies(TemporalFormula a, TemporalFormula b);
  static TemporalFormula until(TemporalFormula a, TemporalFormula b);

  static TemporalFormula always(TemporalFormula f);      // f until false
  static TemporalFormula eventually(TemporalFormula f);  // not (not f until false)
  static TemporalFormula unless(const MSFormula& phi, const MSFormula& psi);
  static TemporalFormula ensures(const MSFormula& phi, const MSFormula& psi);
  static TemporalFormula leads_to(const MSFormula& phi, const MSFormula& psi);  // phi -> eventually psi

  Op op() const;
  const MSFormula& state_formula() const;  // State
  const TemporalFormula& lhs() const;      // also the Not operand
  const TemporalFormula& rhs() const;
  // Free of until and init.
  bool is_state() const;
  std::string text() const;

 private:
  struct Node;
  static TemporalFormula binary(Op op, TemporalFormula a, TemporalFormula b);
  explicit TemporalFormula(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
  std::shared_ptr<const Node> n_;
};

enum class Tri { False, True, Undetermined };
const char* tri_name(Tri v);

// Direct evaluation at a position of a trace prefix. Positions past the
// prefix follow the lasso when there is one; otherwise anything that depends
// on them is Undetermined.
Tri eval_temporal(const Agent& agent, const TracePrefix& prefix, const TemporalFormula& phi, std::size_t position);

// Truth on every fair trace that visits `node` at a position that is
// initial or not, as given. Until arguments must be until-free.
bool eval_temporal(const Agent& agent, const StateGraph& graph, const TemporalFormula& phi, std::size_t node,
                   bool initial);

struct TemporalVerdict {
  bool holds = true;
  std::optional<std::size_t> node;  // a position where phi fails
  bool initial = false;
  std::string detail;
};

// S_A |= phi: phi holds at every position of every fair trace of the agent.
TemporalVerdict graph_valid(const Agent& agent, const StateGraph& graph, const TemporalFormula& phi);

}  // namespace goal
