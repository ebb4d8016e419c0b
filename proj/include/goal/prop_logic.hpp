#pragma once

#include <boost/container/small_vector.hpp>

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "goal/lexer.hpp"

namespace goal {

// Ordered set of atom names; an atom's index is its bit position in a valuation.
class Vocabulary {
 public:
  static constexpr std::size_t kMaxAtoms = 16;

  Vocabulary() = default;
  explicit Vocabulary(const std::vector<std::string>& names);

  std::size_t add(const std::string& name);
  std::optional<std::size_t> find(std::string_view name) const;
  const std::string& name(std::size_t index) const { return names_.at(index); }
  const std::vector<std::string>& names() const { return names_; }
  std::size_t size() const { return names_.size(); }

  friend bool operator==(const Vocabulary&, const Vocabulary&) = default;

 private:
  std::vector<std::string> names_;
};

using VocabPtr = std::shared_ptr<const Vocabulary>;

bool valid_atom_name(std::string_view name);

enum class Op : std::uint8_t { True, False, Atom, Not, And, Or, Implies, Iff };

// Immutable propositional formula. Equality and ordering are structural,
// via the canonical rendering text().
class Formula {
 public:
  Formula();  // the constant true

  static Formula truth();
  static Formula falsity();
  static Formula atom(std::size_t index, std::string name);
  static Formula negation(Formula operand);
  static Formula conj(Formula lhs, Formula rhs);
  static Formula disj(Formula lhs, Formula rhs);
  static Formula implies(Formula lhs, Formula rhs);
  static Formula iff(Formula lhs, Formula rhs);
  static Formula binary(Op op, Formula lhs, Formula rhs);

  Op op() const;
  const Formula& lhs() const;  // also the operand of Not
  const Formula& rhs() const;
  std::size_t atom_index() const;
  const std::string& atom_name() const;

  const std::string& text() const;
  // One past the largest atom index occurring in the formula (0 if none).
  std::size_t atom_bound() const;
  // Sorted distinct atom indices.
  std::vector<std::size_t> atoms() const;

  friend bool operator==(const Formula& a, const Formula& b) { return a.text() == b.text(); }
  friend auto operator<=>(const Formula& a, const Formula& b) { return a.text() <=> b.text(); }

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

// Set of valuations over `atoms` atoms as a bitset; valuation v makes atom i
// true iff bit i of v is set.
class ModelSet {
 public:
  ModelSet() : ModelSet(0, false) {}
  ModelSet(std::size_t atoms, bool full);

  static ModelSet of(const Formula& f, std::size_t atoms);
  static ModelSet atom(std::size_t index, std::size_t atoms);
  static ModelSet single(std::uint64_t valuation, std::size_t atoms);

  std::size_t atoms() const { return atoms_; }
  std::uint64_t valuations() const { return std::uint64_t{1} << atoms_; }
  bool test(std::uint64_t v) const { return (words_[v >> 6] >> (v & 63)) & 1U; }
  void set(std::uint64_t v, bool on);

  bool empty() const;
  bool full() const;
  bool subset_of(const ModelSet& other) const;
  bool intersects(const ModelSet& other) const;
  std::size_t count() const;
  std::size_t hash() const;

  ModelSet operator~() const;
  ModelSet& operator&=(const ModelSet& other);
  ModelSet& operator|=(const ModelSet& other);
  friend ModelSet operator&(ModelSet a, const ModelSet& b) { return a &= b; }
  friend ModelSet operator|(ModelSet a, const ModelSet& b) { return a |= b; }
  friend bool operator==(const ModelSet& a, const ModelSet& b) {
    return a.atoms_ == b.atoms_ && a.words_ == b.words_;
  }

  template <class Fn>
  void for_each(Fn&& fn) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t bits = words_[w];
      while (bits) {
        int b = __builtin_ctzll(bits);
        fn(static_cast<std::uint64_t>(w * 64 + b));
        bits &= bits - 1;
      }
    }
  }

 private:
  void trim();
  std::size_t atoms_;
  boost::container::small_vector<std::uint64_t, 8> words_;
};

Formula parse_formula(std::string_view text, const Vocabulary& vocab);
// Unknown atoms are appended to `vocab` instead of being rejected.
Formula parse_formula_extending(std::string_view text, Vocabulary& vocab);
// Parses one formula from the cursor, stopping before the first token that
// cannot continue it. `extend` may be null.
Formula parse_formula(TokenCursor& cursor, const Vocabulary& vocab, Vocabulary* extend = nullptr);

std::size_t atom_bound(std::span<const Formula> formulas);
bool entails(std::span<const Formula> premises, const Formula& phi);
bool entails(std::initializer_list<Formula> premises, const Formula& phi);
bool consistent(std::span<const Formula> formulas);
bool consistent(std::initializer_list<Formula> formulas);
bool tautology(const Formula& phi);
bool satisfiable(const Formula& phi);
bool equivalent(const Formula& a, const Formula& b);

// Models of the conjunction of `formulas` over `atoms` atoms.
ModelSet models_of(std::span<const Formula> formulas, std::size_t atoms);

// Deterministic short formula with exactly the given models: a greedy cover
// by prime implicants for small vocabularies, full DNF beyond that.
Formula formula_of_models(const ModelSet& models, const Vocabulary& vocab);
// Conjunction of literals describing exactly one valuation.
Formula minterm(std::uint64_t valuation, const Vocabulary& vocab);

// Re-indexes atoms into `target` by name; throws ValidationError if absent.
Formula rebase(const Formula& f, const Vocabulary& target);

Formula conj_all(std::span<const Formula> parts);  // true when empty
Formula disj_all(std::span<const Formula> parts);  // false when empty

}  // namespace goal
