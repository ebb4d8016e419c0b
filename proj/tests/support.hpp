#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "goal/verifier.hpp"

namespace testing_support {

using namespace goal;

inline VocabPtr vocab(std::vector<std::string> names) { return std::make_shared<const Vocabulary>(names); }

inline Formula F(const VocabPtr& v, std::string_view text) { return parse_formula(text, *v); }
inline MSFormula M(const VocabPtr& v, std::string_view text) { return parse_msf(text, *v); }

inline std::vector<Formula> Fs(const VocabPtr& v, std::initializer_list<std::string_view> texts) {
  std::vector<Formula> out;
  for (auto t : texts) out.push_back(F(v, t));
  return out;
}

inline MentalState state(const VocabPtr& v, std::initializer_list<std::string_view> beliefs,
                         std::initializer_list<std::string_view> goals) {
  std::vector<GoalEntry> g;
  for (auto t : goals) g.emplace_back(F(v, t));
  return MentalState(v, Fs(v, beliefs), std::move(g));
}

// The 16 propositional formulas over p, q up to equivalence, one per model set.
inline std::vector<Formula> distinct_formulas(const VocabPtr& v) {
  std::vector<Formula> out;
  for (std::uint64_t mask = 0; mask < 16; ++mask) {
    ModelSet m(2, false);
    for (std::uint64_t val = 0; val < 4; ++val) m.set(val, (mask >> val) & 1U);
    out.push_back(formula_of_models(m, *v));
  }
  return out;
}

// Mental-state formulas over p, q: leaves B/G of `args`, closed under
// negation, conjunction and disjunction; a leaf has depth 1.
inline std::vector<MSFormula> ms_grammar(const VocabPtr& v, const std::vector<std::string>& args, int depth) {
  std::vector<std::vector<MSFormula>> by_depth(1);
  for (const auto& a : args) {
    by_depth[0].push_back(MSFormula::belief(F(v, a)));
    by_depth[0].push_back(MSFormula::goal(F(v, a)));
  }
  std::vector<MSFormula> all = by_depth[0];
  for (int d = 2; d <= depth; ++d) {
    std::vector<MSFormula> next;
    const auto& prev = by_depth.back();
    for (const auto& f : prev) next.push_back(MSFormula::negation(f));
    // Unordered pairs with at least one operand of depth d-1.
    std::vector<MSFormula> lower(all.begin(), all.end() - static_cast<std::ptrdiff_t>(prev.size()));
    for (std::size_t i = 0; i < prev.size(); ++i) {
      for (std::size_t j = i; j < prev.size(); ++j) {
        next.push_back(MSFormula::conj(prev[i], prev[j]));
        next.push_back(MSFormula::disj(prev[i], prev[j]));
      }
      for (const auto& l : lower) {
        next.push_back(MSFormula::conj(prev[i], l));
        next.push_back(MSFormula::disj(prev[i], l));
      }
    }
    all.insert(all.end(), next.begin(), next.end());
    by_depth.push_back(std::move(next));
  }
  return all;
}

// Truth values of formulas over a fixed list of states, one bit per state.
class TruthTable {
 public:
  explicit TruthTable(const std::vector<MentalState>* states) : states_(states), words_((states->size() + 63) / 64) {}

  using Bits = std::vector<std::uint64_t>;

  Bits eval(const MSFormula& f) {
    switch (f.op()) {
      case MsOp::True: return full();
      case MsOp::False: return Bits(words_, 0);
      case MsOp::B:
      case MsOp::G:
      case MsOp::Enabled: return leaf(f);
      case MsOp::Not: return negate(eval(f.lhs()));
      default: break;
    }
    Bits a = eval(f.lhs()), b = eval(f.rhs());
    for (std::size_t i = 0; i < words_; ++i) {
      switch (f.op()) {
        case MsOp::And: a[i] &= b[i]; break;
        case MsOp::Or: a[i] |= b[i]; break;
        case MsOp::Implies: a[i] = ~a[i] | b[i]; break;
        default: a[i] = ~(a[i] ^ b[i]); break;
      }
    }
    return mask(std::move(a));
  }

  bool at(const Bits& bits, std::size_t i) const { return (bits[i >> 6] >> (i & 63)) & 1U; }

 private:
  Bits full() const { return mask(Bits(words_, ~std::uint64_t{0})); }
  Bits negate(Bits b) const {
    for (auto& w : b) w = ~w;
    return mask(std::move(b));
  }
  Bits mask(Bits b) const {
    std::size_t rest = states_->size() % 64;
    if (rest && !b.empty()) b.back() &= (std::uint64_t{1} << rest) - 1;
    return b;
  }
  const Bits& leaf(const MSFormula& f) {
    auto it = cache_.find(f.text());
    if (it != cache_.end()) return it->second;
    Bits b(words_, 0);
    for (std::size_t i = 0; i < states_->size(); ++i)
      if (eval_msf((*states_)[i], f)) b[i >> 6] |= std::uint64_t{1} << (i & 63);
    return cache_.emplace(f.text(), std::move(b)).first->second;
  }

  const std::vector<MentalState>* states_;
  std::size_t words_;
  std::unordered_map<std::string, Bits> cache_;
};

// A fresh agent from text; the program is given as `cond -> do(action)` lines.
inline Agent micro_agent(const std::string& beliefs, const std::string& goals, const std::vector<std::string>& program,
                         const std::string& extra = "") {
  std::string text = "vocab { p, q }\nbeliefs { " + beliefs + " }\ngoals { " + goals + " }\n" + extra + "program {\n";
  for (std::size_t i = 0; i < program.size(); ++i) text += "  b" + std::to_string(i) + ": " + program[i] + ";\n";
  text += "}\n";
  return parse_agent(text);
}

}  // namespace testing_support
