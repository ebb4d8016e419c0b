#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "goal/prop_logic.hpp"

namespace goal {

// One generator of the goal base. Its members are the consistent, unbelieved
// consequences of `goal` that entail none of the `dropped` formulas.
struct GoalEntry {
  Formula goal;
  std::vector<Formula> dropped;  // sorted, no duplicates

  GoalEntry() = default;
  explicit GoalEntry(Formula g, std::vector<Formula> d = {});
  std::string text() const;
  friend bool operator==(const GoalEntry& a, const GoalEntry& b) { return a.text() == b.text(); }
};

// Immutable pair <Sigma, Gamma>; construction enforces the mental-state
// constraints (consistent beliefs, consistent and unbelieved generators).
class MentalState {
 public:
  MentalState(VocabPtr vocab, std::vector<Formula> beliefs, std::vector<GoalEntry> goals);

  // nullopt plus a reason instead of throwing.
  static std::optional<MentalState> try_make(VocabPtr vocab, std::vector<Formula> beliefs,
                                             std::vector<GoalEntry> goals, std::string* why = nullptr);

  const VocabPtr& vocabulary() const;
  std::size_t atoms() const;
  const std::vector<Formula>& beliefs() const;
  const std::vector<GoalEntry>& goals() const;
  const ModelSet& belief_models() const;
  const ModelSet& goal_models(std::size_t entry) const;
  const std::vector<ModelSet>& dropped_models(std::size_t entry) const;

  bool believes(const Formula& phi) const;
  bool believes(const ModelSet& phi) const;
  bool has_goal(const Formula& psi) const;
  bool has_goal(const ModelSet& psi) const;

  // `beliefs: {..} | goals: {..}` with both lists sorted.
  const std::string& canonical() const;
  std::uint64_t digest() const;
  std::string digest_hex() const;

  friend bool operator==(const MentalState& a, const MentalState& b) { return a.canonical() == b.canonical(); }

 private:
  struct Data;
  std::shared_ptr<const Data> d_;
};

// Reason the pair violates the mental-state constraints, or nullopt.
std::optional<std::string> state_violation(const Vocabulary& vocab, const std::vector<Formula>& beliefs,
                                           const std::vector<GoalEntry>& goals);

bool goal_holds(const MentalState& state, const Formula& psi);

std::uint64_t fnv1a64(std::string_view text);
std::string hex64(std::uint64_t value);

// ------------------------------------------------------------ MS formulas

// Target of an enabled(..) atom.
struct ActionRef {
  enum class Kind { Named, Adopt, Drop, Ins, Del };
  Kind kind = Kind::Named;
  std::string name;  // Named only
  Formula arg;       // the others

  static ActionRef named(std::string n);
  static ActionRef adopt(Formula f);
  static ActionRef drop(Formula f);
  static ActionRef ins(Formula f);
  static ActionRef del(Formula f);
  std::string text() const;
  bool builtin() const { return kind != Kind::Named; }
  friend bool operator==(const ActionRef& a, const ActionRef& b) { return a.text() == b.text(); }
};

ActionRef parse_action_ref(TokenCursor& cursor, const Vocabulary& vocab);

enum class MsOp : std::uint8_t { True, False, B, G, Enabled, Not, And, Or, Implies, Iff };

class MSFormula {
 public:
  MSFormula();  // true

  static MSFormula truth();
  static MSFormula falsity();
  static MSFormula belief(Formula phi);
  static MSFormula goal(Formula phi);
  static MSFormula enabled(ActionRef target);
  static MSFormula negation(MSFormula f);
  static MSFormula binary(MsOp op, MSFormula lhs, MSFormula rhs);
  static MSFormula conj(MSFormula a, MSFormula b) { return binary(MsOp::And, std::move(a), std::move(b)); }
  static MSFormula disj(MSFormula a, MSFormula b) { return binary(MsOp::Or, std::move(a), std::move(b)); }
  static MSFormula implies(MSFormula a, MSFormula b) { return binary(MsOp::Implies, std::move(a), std::move(b)); }
  static MSFormula iff(MSFormula a, MSFormula b) { return binary(MsOp::Iff, std::move(a), std::move(b)); }

  MsOp op() const;
  const Formula& arg() const;  // B, G
  const ActionRef& target() const;  // Enabled
  const MSFormula& lhs() const;  // also the Not operand
  const MSFormula& rhs() const;
  const std::string& text() const;
  bool has_enabled() const;
  std::size_t atom_bound() const;
  std::vector<std::size_t> atoms() const;  // includes atoms inside enabled targets

  friend bool operator==(const MSFormula& a, const MSFormula& b) { return a.text() == b.text(); }
  friend auto operator<=>(const MSFormula& a, const MSFormula& b) { return a.text() <=> b.text(); }

 private:
  struct Node;
  explicit MSFormula(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
  std::shared_ptr<const Node> n_;
};

MSFormula parse_msf(std::string_view text, const Vocabulary& vocab);
MSFormula parse_msf(TokenCursor& cursor, const Vocabulary& vocab);

MSFormula ms_conj_all(const std::vector<MSFormula>& parts);
MSFormula ms_disj_all(const std::vector<MSFormula>& parts);

// Rewrites every B/G leaf; used by substitutions and vocabulary changes.
template <class Fn>
MSFormula map_leaves(const MSFormula& f, Fn&& fn);

MSFormula rebase(const MSFormula& f, const Vocabulary& target);

// Resolves enabled(<name>) for capabilities and conditional actions.
class EnabledOracle {
 public:
  virtual ~EnabledOracle() = default;
  virtual bool enabled(const std::string& name, const MentalState& state) const = 0;
};

// Enabledness of adopt/drop/ins/del, which depends on the state alone.
bool builtin_enabled(const ActionRef& ref, const MentalState& state);

// Enabled(<name>) leaves throw ValidationError when ctx is null.
bool eval_msf(const MentalState& state, const MSFormula& phi, const EnabledOracle* ctx = nullptr);

// --------------------------------------------------------- validity oracle

struct OracleBounds {
  // Explicit vocabulary; when absent the formula's own atoms are used.
  std::optional<Vocabulary> vocabulary;
  std::size_t max_generators = 2;
  static constexpr std::size_t kMaxAtoms = 4;
  static constexpr std::size_t kMaxGenerators = 3;
};

struct OracleVerdict {
  bool valid = true;
  std::optional<MentalState> countermodel;
  std::size_t states_examined = 0;
  std::string bounds;  // human-readable description of what was enumerated
};

// Decides truth in every mental state whose theory is any nonempty valuation
// set and whose goal base has at most `max_generators` generators, returning
// the first countermodel in a fixed enumeration order.
OracleVerdict validity_oracle(const MSFormula& phi, const OracleBounds& bounds = {});

// The representative belief base of a theory: empty for the full set, else
// the single formula formula_of_models(models).
std::vector<Formula> canonical_beliefs(const ModelSet& models, const Vocabulary& vocab);

// Every state with canonical beliefs and at most max_generators distinct,
// consistent, unbelieved, unfiltered generators (given as model sets).
// Order: theories from the full set downward, then generator sets by size.
std::vector<MentalState> enumerate_universe(const VocabPtr& vocab, std::size_t max_generators);

// -------------------------------------------------------------- inline impl

template <class Fn>
MSFormula map_leaves(const MSFormula& f, Fn&& fn) {
  switch (f.op()) {
    case MsOp::True:
    case MsOp::False:
    case MsOp::Enabled: return fn(f);
    case MsOp::B:
    case MsOp::G: return fn(f);
    case MsOp::Not: return MSFormula::negation(map_leaves(f.lhs(), fn));
    default: return MSFormula::binary(f.op(), map_leaves(f.lhs(), fn), map_leaves(f.rhs(), fn));
  }
}

}  // namespace goal
