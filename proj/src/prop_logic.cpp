#include "goal/prop_logic.hpp"

#include <algorithm>
#include <array>
#include <functional>

namespace goal {

// ---------------------------------------------------------------- vocabulary

namespace {

constexpr std::array<std::string_view, 5> kReserved = {"true", "false", "B", "G", "enabled"};

}  // namespace

bool valid_atom_name(std::string_view name) {
  if (name.empty()) return false;
  auto alpha = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; };
  auto digit = [](char c) { return c >= '0' && c <= '9'; };
  if (!alpha(name[0])) return false;
  for (char c : name)
    if (!alpha(c) && !digit(c)) return false;
  return std::find(kReserved.begin(), kReserved.end(), name) == kReserved.end();
}

Vocabulary::Vocabulary(const std::vector<std::string>& names) {
  for (const auto& n : names) add(n);
}

std::size_t Vocabulary::add(const std::string& name) {
  if (!valid_atom_name(name)) throw ValidationError("invalid atom name '" + name + "'");
  if (find(name)) throw ValidationError("duplicate atom '" + name + "'");
  if (names_.size() >= kMaxAtoms)
    throw BoundsError("vocabulary exceeds " + std::to_string(kMaxAtoms) + " atoms");
  names_.push_back(name);
  return names_.size() - 1;
}

std::optional<std::size_t> Vocabulary::find(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return i;
  return std::nullopt;
}

// ------------------------------------------------------------------- formula

struct Formula::Node {
  Op op = Op::True;
  std::size_t atom = 0;
  std::string name;
  std::optional<Formula> lhs, rhs;
  std::string text;
  std::size_t bound = 0;
};

namespace {

int precedence(Op op) {
  switch (op) {
    case Op::Iff: return 1;
    case Op::Implies: return 2;
    case Op::Or: return 3;
    case Op::And: return 4;
    case Op::Not: return 5;
    default: return 6;
  }
}

const char* symbol(Op op) {
  switch (op) {
    case Op::And: return " & ";
    case Op::Or: return " | ";
    case Op::Implies: return " -> ";
    case Op::Iff: return " <-> ";
    default: return "";
  }
}

bool right_assoc(Op op) { return op == Op::Implies || op == Op::Iff; }

std::string wrap(const std::string& s, bool parens) { return parens ? "(" + s + ")" : s; }

}  // namespace

Formula::Formula() : Formula(truth()) {}

Formula Formula::truth() {
  static const Formula t = [] {
    auto n = std::make_shared<Node>();
    n->op = Op::True;
    n->text = "true";
    return Formula(n);
  }();
  return t;
}

Formula Formula::falsity() {
  static const Formula f = [] {
    auto n = std::make_shared<Node>();
    n->op = Op::False;
    n->text = "false";
    return Formula(n);
  }();
  return f;
}

Formula Formula::atom(std::size_t index, std::string name) {
  auto n = std::make_shared<Node>();
  n->op = Op::Atom;
  n->atom = index;
  n->text = name;
  n->name = std::move(name);
  n->bound = index + 1;
  return Formula(n);
}

Formula Formula::negation(Formula operand) {
  auto n = std::make_shared<Node>();
  n->op = Op::Not;
  n->text = "!" + wrap(operand.text(), precedence(operand.op()) < precedence(Op::Not));
  n->bound = operand.atom_bound();
  n->lhs = std::move(operand);
  return Formula(n);
}

Formula Formula::binary(Op op, Formula lhs, Formula rhs) {
  auto n = std::make_shared<Node>();
  n->op = op;
  int p = precedence(op);
  int pl = precedence(lhs.op()), pr = precedence(rhs.op());
  bool lp = pl < p || (pl == p && right_assoc(op));
  bool rp = pr < p || (pr == p && !right_assoc(op));
  n->text = wrap(lhs.text(), lp) + symbol(op) + wrap(rhs.text(), rp);
  n->bound = std::max(lhs.atom_bound(), rhs.atom_bound());
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return Formula(n);
}

Formula Formula::conj(Formula a, Formula b) { return binary(Op::And, std::move(a), std::move(b)); }
Formula Formula::disj(Formula a, Formula b) { return binary(Op::Or, std::move(a), std::move(b)); }
Formula Formula::implies(Formula a, Formula b) { return binary(Op::Implies, std::move(a), std::move(b)); }
Formula Formula::iff(Formula a, Formula b) { return binary(Op::Iff, std::move(a), std::move(b)); }

Op Formula::op() const { return node_->op; }
const Formula& Formula::lhs() const { return *node_->lhs; }
const Formula& Formula::rhs() const { return *node_->rhs; }
std::size_t Formula::atom_index() const { return node_->atom; }
const std::string& Formula::atom_name() const { return node_->name; }
const std::string& Formula::text() const { return node_->text; }
std::size_t Formula::atom_bound() const { return node_->bound; }

std::vector<std::size_t> Formula::atoms() const {
  std::vector<std::size_t> out;
  std::function<void(const Formula&)> walk = [&](const Formula& f) {
    switch (f.op()) {
      case Op::Atom: out.push_back(f.atom_index()); break;
      case Op::Not: walk(f.lhs()); break;
      case Op::True:
      case Op::False: break;
      default:
        walk(f.lhs());
        walk(f.rhs());
    }
  };
  walk(*this);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// ----------------------------------------------------------------- model set

namespace {

std::size_t word_count(std::size_t atoms) { return atoms < 6 ? 1 : std::size_t{1} << (atoms - 6); }

constexpr std::array<std::uint64_t, 6> kAtomPattern = {
    0xAAAAAAAAAAAAAAAAULL, 0xCCCCCCCCCCCCCCCCULL, 0xF0F0F0F0F0F0F0F0ULL,
    0xFF00FF00FF00FF00ULL, 0xFFFF0000FFFF0000ULL, 0xFFFFFFFF00000000ULL,
};

}  // namespace

ModelSet::ModelSet(std::size_t atoms, bool full) : atoms_(atoms) {
  if (atoms > Vocabulary::kMaxAtoms) throw BoundsError("too many atoms for model enumeration");
  words_.assign(word_count(atoms), full ? ~std::uint64_t{0} : 0);
  trim();
}

void ModelSet::trim() {
  if (atoms_ < 6) words_[0] &= (std::uint64_t{1} << (std::uint64_t{1} << atoms_)) - 1;
}

ModelSet ModelSet::atom(std::size_t index, std::size_t atoms) {
  ModelSet m(atoms, false);
  for (std::size_t w = 0; w < m.words_.size(); ++w) {
    if (index < 6)
      m.words_[w] = kAtomPattern[index];
    else
      m.words_[w] = ((w >> (index - 6)) & 1U) ? ~std::uint64_t{0} : 0;
  }
  m.trim();
  return m;
}

ModelSet ModelSet::single(std::uint64_t valuation, std::size_t atoms) {
  ModelSet m(atoms, false);
  m.set(valuation, true);
  return m;
}

ModelSet ModelSet::of(const Formula& f, std::size_t atoms) {
  if (f.atom_bound() > atoms) throw ValidationError("formula '" + f.text() + "' exceeds vocabulary");
  switch (f.op()) {
    case Op::True: return ModelSet(atoms, true);
    case Op::False: return ModelSet(atoms, false);
    case Op::Atom: return atom(f.atom_index(), atoms);
    case Op::Not: return ~of(f.lhs(), atoms);
    case Op::And: return of(f.lhs(), atoms) & of(f.rhs(), atoms);
    case Op::Or: return of(f.lhs(), atoms) | of(f.rhs(), atoms);
    case Op::Implies: return ~of(f.lhs(), atoms) | of(f.rhs(), atoms);
    case Op::Iff: {
      ModelSet a = of(f.lhs(), atoms), b = of(f.rhs(), atoms);
      return (a & b) | (~a & ~b);
    }
  }
  return ModelSet(atoms, false);
}

void ModelSet::set(std::uint64_t v, bool on) {
  if (on)
    words_[v >> 6] |= std::uint64_t{1} << (v & 63);
  else
    words_[v >> 6] &= ~(std::uint64_t{1} << (v & 63));
}

bool ModelSet::empty() const {
  return std::all_of(words_.begin(), words_.end(), [](auto w) { return w == 0; });
}

bool ModelSet::full() const { return (~*this).empty(); }

bool ModelSet::subset_of(const ModelSet& o) const {
  for (std::size_t i = 0; i < words_.size(); ++i)
    if (words_[i] & ~o.words_[i]) return false;
  return true;
}

bool ModelSet::intersects(const ModelSet& o) const {
  for (std::size_t i = 0; i < words_.size(); ++i)
    if (words_[i] & o.words_[i]) return true;
  return false;
}

std::size_t ModelSet::count() const {
  std::size_t c = 0;
  for (auto w : words_) c += static_cast<std::size_t>(__builtin_popcountll(w));
  return c;
}

std::size_t ModelSet::hash() const {
  std::size_t h = atoms_;
  for (auto w : words_) h = h * 1099511628211ULL ^ static_cast<std::size_t>(w);
  return h;
}

ModelSet ModelSet::operator~() const {
  ModelSet m = *this;
  for (auto& w : m.words_) w = ~w;
  m.trim();
  return m;
}

ModelSet& ModelSet::operator&=(const ModelSet& o) {
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
  return *this;
}

ModelSet& ModelSet::operator|=(const ModelSet& o) {
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
  return *this;
}

// -------------------------------------------------------------------- parser

namespace {

class Parser {
 public:
  Parser(TokenCursor& c, const Vocabulary& v, Vocabulary* ext) : c_(c), vocab_(v), ext_(ext) {}

  Formula iff() {
    Formula lhs = implies();
    if (c_.accept(Tok::Iff)) return Formula::iff(lhs, iff());
    return lhs;
  }

 private:
  Formula implies() {
    Formula lhs = disj();
    if (c_.accept(Tok::Arrow)) return Formula::implies(lhs, implies());
    return lhs;
  }
  Formula disj() {
    Formula x = conj();
    while (c_.accept(Tok::Or)) x = Formula::disj(x, conj());
    return x;
  }
  Formula conj() {
    Formula x = unary();
    while (c_.accept(Tok::And)) x = Formula::conj(x, unary());
    return x;
  }
  Formula unary() {
    if (c_.accept(Tok::Not)) return Formula::negation(unary());
    return primary();
  }
  Formula primary() {
    if (c_.accept(Tok::LParen)) {
      Formula f = iff();
      c_.expect(Tok::RParen, "')'");
      return f;
    }
    const Token& t = c_.peek();
    if (t.kind != Tok::Ident) c_.fail("expected formula, found " + describe(t));
    if (t.text == "true") {
      c_.next();
      return Formula::truth();
    }
    if (t.text == "false") {
      c_.next();
      return Formula::falsity();
    }
    if (t.text.find('$') != std::string::npos) c_.fail("unexpanded placeholder in '" + t.text + "'");
    if (!valid_atom_name(t.text)) c_.fail("'" + t.text + "' cannot be used as an atom");
    const Vocabulary& v = ext_ ? *ext_ : vocab_;
    auto idx = v.find(t.text);
    if (!idx) {
      if (!ext_) c_.fail("unknown atom '" + t.text + "'");
      idx = ext_->add(t.text);
    }
    c_.next();
    return Formula::atom(*idx, t.text);
  }

  TokenCursor& c_;
  const Vocabulary& vocab_;
  Vocabulary* ext_;
};

Formula parse_whole(std::string_view text, const Vocabulary& vocab, Vocabulary* ext) {
  TokenCursor c(tokenize(text));
  Formula f = parse_formula(c, vocab, ext);
  if (!c.at(Tok::End)) c.fail("unexpected " + describe(c.peek()) + " after formula");
  return f;
}

}  // namespace

Formula parse_formula(TokenCursor& cursor, const Vocabulary& vocab, Vocabulary* extend) {
  return Parser(cursor, vocab, extend).iff();
}

Formula parse_formula(std::string_view text, const Vocabulary& vocab) { return parse_whole(text, vocab, nullptr); }

Formula parse_formula_extending(std::string_view text, Vocabulary& vocab) {
  return parse_whole(text, vocab, &vocab);
}

// ----------------------------------------------------------------- semantics

std::size_t atom_bound(std::span<const Formula> formulas) {
  std::size_t n = 0;
  for (const auto& f : formulas) n = std::max(n, f.atom_bound());
  return n;
}

ModelSet models_of(std::span<const Formula> formulas, std::size_t atoms) {
  ModelSet m(atoms, true);
  for (const auto& f : formulas) m &= ModelSet::of(f, atoms);
  return m;
}

bool entails(std::span<const Formula> premises, const Formula& phi) {
  std::size_t n = std::max(atom_bound(premises), phi.atom_bound());
  return models_of(premises, n).subset_of(ModelSet::of(phi, n));
}

bool entails(std::initializer_list<Formula> premises, const Formula& phi) {
  return entails(std::span<const Formula>(premises.begin(), premises.size()), phi);
}

bool consistent(std::span<const Formula> formulas) { return !models_of(formulas, atom_bound(formulas)).empty(); }

bool consistent(std::initializer_list<Formula> formulas) {
  return consistent(std::span<const Formula>(formulas.begin(), formulas.size()));
}

bool tautology(const Formula& phi) { return ModelSet::of(phi, phi.atom_bound()).full(); }
bool satisfiable(const Formula& phi) { return !ModelSet::of(phi, phi.atom_bound()).empty(); }

bool equivalent(const Formula& a, const Formula& b) {
  std::size_t n = std::max(a.atom_bound(), b.atom_bound());
  return ModelSet::of(a, n) == ModelSet::of(b, n);
}

Formula conj_all(std::span<const Formula> parts) {
  if (parts.empty()) return Formula::truth();
  Formula x = parts[0];
  for (std::size_t i = 1; i < parts.size(); ++i) x = Formula::conj(x, parts[i]);
  return x;
}

Formula disj_all(std::span<const Formula> parts) {
  if (parts.empty()) return Formula::falsity();
  Formula x = parts[0];
  for (std::size_t i = 1; i < parts.size(); ++i) x = Formula::disj(x, parts[i]);
  return x;
}

namespace {

Formula cube_formula(std::uint64_t care, std::uint64_t value, const Vocabulary& vocab) {
  std::vector<Formula> lits;
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    if (!((care >> i) & 1U)) continue;
    Formula a = Formula::atom(i, vocab.name(i));
    lits.push_back(((value >> i) & 1U) ? a : Formula::negation(a));
  }
  return conj_all(lits);
}

}  // namespace

Formula minterm(std::uint64_t valuation, const Vocabulary& vocab) {
  return cube_formula((std::uint64_t{1} << vocab.size()) - 1, valuation, vocab);
}

Formula formula_of_models(const ModelSet& models, const Vocabulary& vocab) {
  const std::size_t n = vocab.size();
  if (models.atoms() != n) throw ValidationError("model set does not match vocabulary");
  if (models.empty()) return Formula::falsity();
  if (models.full()) return Formula::truth();
  if (n > 6) {
    std::vector<Formula> terms;
    models.for_each([&](std::uint64_t v) { terms.push_back(minterm(v, vocab)); });
    return disj_all(terms);
  }
  struct Cube {
    std::uint64_t care, value;
    ModelSet covers;
    std::size_t literals;
  };
  auto cube_models = [&](std::uint64_t care, std::uint64_t value) {
    ModelSet m(n, true);
    for (std::size_t i = 0; i < n; ++i) {
      if (!((care >> i) & 1U)) continue;
      ModelSet a = ModelSet::atom(i, n);
      m &= ((value >> i) & 1U) ? a : ~a;
    }
    return m;
  };
  std::vector<Cube> implicants;
  const std::uint64_t all = (std::uint64_t{1} << n) - 1;
  for (std::uint64_t care = 0; care <= all; ++care) {
    for (std::uint64_t value = care;; value = (value - 1) & care) {
      ModelSet m = cube_models(care, value);
      if (m.subset_of(models))
        implicants.push_back({care, value, m, static_cast<std::size_t>(__builtin_popcountll(care))});
      if (value == 0) break;
    }
  }
  std::vector<Cube> primes;
  for (const auto& c : implicants) {
    bool prime = true;
    for (const auto& d : implicants)
      if (d.literals < c.literals && c.covers.subset_of(d.covers) && !(d.covers == c.covers)) {
        prime = false;
        break;
      }
    if (prime) primes.push_back(c);
  }
  std::vector<const Cube*> chosen;
  ModelSet uncovered = models;
  while (!uncovered.empty()) {
    const Cube* best = nullptr;
    std::size_t best_gain = 0;
    for (const auto& c : primes) {
      std::size_t gain = (c.covers & uncovered).count();
      if (gain > best_gain || (gain == best_gain && gain > 0 && c.literals < best->literals)) {
        best = &c;
        best_gain = gain;
      }
    }
    chosen.push_back(best);
    uncovered &= ~best->covers;
  }
  std::stable_sort(chosen.begin(), chosen.end(), [](const Cube* a, const Cube* b) {
    if (a->literals != b->literals) return a->literals < b->literals;
    if (a->care != b->care) return a->care < b->care;
    return a->value > b->value;
  });
  std::vector<Formula> terms;
  for (const Cube* c : chosen) terms.push_back(cube_formula(c->care, c->value, vocab));
  return disj_all(terms);
}

Formula rebase(const Formula& f, const Vocabulary& target) {
  switch (f.op()) {
    case Op::True:
    case Op::False: return f;
    case Op::Atom: {
      auto idx = target.find(f.atom_name());
      if (!idx) throw ValidationError("atom '" + f.atom_name() + "' not in target vocabulary");
      return Formula::atom(*idx, f.atom_name());
    }
    case Op::Not: return Formula::negation(rebase(f.lhs(), target));
    default: return Formula::binary(f.op(), rebase(f.lhs(), target), rebase(f.rhs(), target));
  }
}

}  // namespace goal
