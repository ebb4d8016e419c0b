#include "goal/mental_state.hpp"

#include <algorithm>
#include <cstdio>
#include <functional>
#include <set>
#include <unordered_set>

namespace goal {

// ---------------------------------------------------------------- GoalEntry

GoalEntry::GoalEntry(Formula g, std::vector<Formula> d) : goal(std::move(g)), dropped(std::move(d)) {
  std::sort(dropped.begin(), dropped.end());
  dropped.erase(std::unique(dropped.begin(), dropped.end()), dropped.end());
}

std::string GoalEntry::text() const {
  if (dropped.empty()) return goal.text();
  std::string s = goal.text() + " \\ {";
  for (std::size_t i = 0; i < dropped.size(); ++i) s += (i ? ", " : "") + dropped[i].text();
  return s + "}";
}

// -------------------------------------------------------------- MentalState

struct MentalState::Data {
  VocabPtr vocab;
  std::vector<Formula> beliefs;
  std::vector<GoalEntry> goals;
  ModelSet belief_models;
  std::vector<ModelSet> goal_models;
  std::vector<std::vector<ModelSet>> dropped_models;
  std::string canonical;
  std::uint64_t digest = 0;
};

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

std::optional<std::string> state_violation(const Vocabulary& vocab, const std::vector<Formula>& beliefs,
                                           const std::vector<GoalEntry>& goals) {
  const std::size_t n = vocab.size();
  for (const auto& b : beliefs)
    if (b.atom_bound() > n) return "belief '" + b.text() + "' uses atoms outside the vocabulary";
  ModelSet sigma = models_of(beliefs, n);
  if (sigma.empty()) return std::string("beliefs are inconsistent");
  for (const auto& e : goals) {
    if (e.goal.atom_bound() > n) return "goal '" + e.goal.text() + "' uses atoms outside the vocabulary";
    ModelSet g = ModelSet::of(e.goal, n);
    if (g.empty()) return "goal '" + e.goal.text() + "' is inconsistent (clause ii)";
    if (sigma.subset_of(g)) return "goal '" + e.goal.text() + "' is entailed by the beliefs (clause i)";
  }
  return std::nullopt;
}

MentalState::MentalState(VocabPtr vocab, std::vector<Formula> beliefs, std::vector<GoalEntry> goals) {
  if (!vocab) throw ValidationError("mental state needs a vocabulary");
  std::sort(beliefs.begin(), beliefs.end());
  beliefs.erase(std::unique(beliefs.begin(), beliefs.end()), beliefs.end());
  std::sort(goals.begin(), goals.end(), [](const GoalEntry& a, const GoalEntry& b) { return a.text() < b.text(); });
  goals.erase(std::unique(goals.begin(), goals.end()), goals.end());
  if (auto why = state_violation(*vocab, beliefs, goals)) throw ValidationError("invalid mental state: " + *why);

  auto d = std::make_shared<Data>();
  const std::size_t n = vocab->size();
  d->belief_models = models_of(beliefs, n);
  for (const auto& e : goals) {
    d->goal_models.push_back(ModelSet::of(e.goal, n));
    std::vector<ModelSet> ds;
    for (const auto& f : e.dropped) ds.push_back(ModelSet::of(f, n));
    d->dropped_models.push_back(std::move(ds));
  }
  std::string s = "beliefs: {";
  for (std::size_t i = 0; i < beliefs.size(); ++i) s += (i ? ", " : "") + beliefs[i].text();
  s += "} | goals: {";
  for (std::size_t i = 0; i < goals.size(); ++i) s += (i ? ", " : "") + goals[i].text();
  s += "}";
  d->canonical = std::move(s);
  d->digest = fnv1a64(d->canonical);
  d->vocab = std::move(vocab);
  d->beliefs = std::move(beliefs);
  d->goals = std::move(goals);
  d_ = std::move(d);
}

std::optional<MentalState> MentalState::try_make(VocabPtr vocab, std::vector<Formula> beliefs,
                                                 std::vector<GoalEntry> goals, std::string* why) {
  if (auto v = state_violation(*vocab, beliefs, goals)) {
    if (why) *why = *v;
    return std::nullopt;
  }
  return MentalState(std::move(vocab), std::move(beliefs), std::move(goals));
}

const VocabPtr& MentalState::vocabulary() const { return d_->vocab; }
std::size_t MentalState::atoms() const { return d_->vocab->size(); }
const std::vector<Formula>& MentalState::beliefs() const { return d_->beliefs; }
const std::vector<GoalEntry>& MentalState::goals() const { return d_->goals; }
const ModelSet& MentalState::belief_models() const { return d_->belief_models; }
const ModelSet& MentalState::goal_models(std::size_t i) const { return d_->goal_models.at(i); }
const std::vector<ModelSet>& MentalState::dropped_models(std::size_t i) const { return d_->dropped_models.at(i); }
const std::string& MentalState::canonical() const { return d_->canonical; }
std::uint64_t MentalState::digest() const { return d_->digest; }
std::string MentalState::digest_hex() const { return hex64(d_->digest); }

bool MentalState::believes(const Formula& phi) const { return believes(ModelSet::of(phi, atoms())); }
bool MentalState::believes(const ModelSet& phi) const { return d_->belief_models.subset_of(phi); }
bool MentalState::has_goal(const Formula& psi) const { return has_goal(ModelSet::of(psi, atoms())); }

bool MentalState::has_goal(const ModelSet& psi) const {
  if (psi.empty() || believes(psi)) return false;
  for (std::size_t i = 0; i < d_->goal_models.size(); ++i) {
    if (!d_->goal_models[i].subset_of(psi)) continue;
    bool filtered = false;
    for (const auto& delta : d_->dropped_models[i])
      if (psi.subset_of(delta)) {
        filtered = true;
        break;
      }
    if (!filtered) return true;
  }
  return false;
}

bool goal_holds(const MentalState& state, const Formula& psi) { return state.has_goal(psi); }

// --------------------------------------------------------------- ActionRef

ActionRef ActionRef::named(std::string n) {
  ActionRef r;
  r.kind = Kind::Named;
  r.name = std::move(n);
  return r;
}

namespace {
ActionRef with_arg(ActionRef::Kind k, Formula f) {
  ActionRef r;
  r.kind = k;
  r.arg = std::move(f);
  return r;
}
}  // namespace

ActionRef ActionRef::adopt(Formula f) { return with_arg(Kind::Adopt, std::move(f)); }
ActionRef ActionRef::drop(Formula f) { return with_arg(Kind::Drop, std::move(f)); }
ActionRef ActionRef::ins(Formula f) { return with_arg(Kind::Ins, std::move(f)); }
ActionRef ActionRef::del(Formula f) { return with_arg(Kind::Del, std::move(f)); }

std::string ActionRef::text() const {
  switch (kind) {
    case Kind::Named: return name;
    case Kind::Adopt: return "adopt(" + arg.text() + ")";
    case Kind::Drop: return "drop(" + arg.text() + ")";
    case Kind::Ins: return "ins(" + arg.text() + ")";
    case Kind::Del: return "del(" + arg.text() + ")";
  }
  return name;
}

ActionRef parse_action_ref(TokenCursor& c, const Vocabulary& vocab) {
  const Token& t = c.peek();
  if (t.kind != Tok::Ident) c.fail("expected action, found " + describe(t));
  static const std::pair<const char*, ActionRef::Kind> kBuiltins[] = {
      {"adopt", ActionRef::Kind::Adopt},
      {"drop", ActionRef::Kind::Drop},
      {"ins", ActionRef::Kind::Ins},
      {"del", ActionRef::Kind::Del},
  };
  for (const auto& [word, kind] : kBuiltins) {
    if (t.text == word && c.peek(1).kind == Tok::LParen) {
      c.next();
      c.next();
      Formula f = parse_formula(c, vocab);
      c.expect(Tok::RParen, "')'");
      return with_arg(kind, f);
    }
  }
  if (t.text.find('$') != std::string::npos) c.fail("unexpanded placeholder in '" + t.text + "'");
  std::string name = t.text;
  c.next();
  return ActionRef::named(name);
}

// --------------------------------------------------------------- MSFormula

struct MSFormula::Node {
  MsOp op = MsOp::True;
  std::optional<Formula> arg;
  std::optional<ActionRef> target;
  std::optional<MSFormula> lhs, rhs;
  std::string text;
  bool has_enabled = false;
  std::size_t bound = 0;
};

namespace {

int ms_prec(MsOp op) {
  switch (op) {
    case MsOp::Iff: return 1;
    case MsOp::Implies: return 2;
    case MsOp::Or: return 3;
    case MsOp::And: return 4;
    case MsOp::Not: return 5;
    default: return 6;
  }
}

const char* ms_symbol(MsOp op) {
  switch (op) {
    case MsOp::And: return " & ";
    case MsOp::Or: return " | ";
    case MsOp::Implies: return " -> ";
    case MsOp::Iff: return " <-> ";
    default: return "";
  }
}

std::string paren(const std::string& s, bool p) { return p ? "(" + s + ")" : s; }

}  // namespace

MSFormula::MSFormula() : MSFormula(truth()) {}

MSFormula MSFormula::truth() {
  static const MSFormula t = [] {
    auto n = std::make_shared<Node>();
    n->op = MsOp::True;
    n->text = "true";
    return MSFormula(n);
  }();
  return t;
}

MSFormula MSFormula::falsity() {
  static const MSFormula f = [] {
    auto n = std::make_shared<Node>();
    n->op = MsOp::False;
    n->text = "false";
    return MSFormula(n);
  }();
  return f;
}

MSFormula MSFormula::belief(Formula phi) {
  auto n = std::make_shared<Node>();
  n->op = MsOp::B;
  n->text = "B(" + phi.text() + ")";
  n->bound = phi.atom_bound();
  n->arg = std::move(phi);
  return MSFormula(n);
}

MSFormula MSFormula::goal(Formula phi) {
  auto n = std::make_shared<Node>();
  n->op = MsOp::G;
  n->text = "G(" + phi.text() + ")";
  n->bound = phi.atom_bound();
  n->arg = std::move(phi);
  return MSFormula(n);
}

MSFormula MSFormula::enabled(ActionRef target) {
  auto n = std::make_shared<Node>();
  n->op = MsOp::Enabled;
  n->text = "enabled(" + target.text() + ")";
  n->has_enabled = true;
  n->bound = target.builtin() ? target.arg.atom_bound() : 0;
  n->target = std::move(target);
  return MSFormula(n);
}

MSFormula MSFormula::negation(MSFormula f) {
  auto n = std::make_shared<Node>();
  n->op = MsOp::Not;
  n->text = "!" + paren(f.text(), ms_prec(f.op()) < ms_prec(MsOp::Not));
  n->has_enabled = f.has_enabled();
  n->bound = f.atom_bound();
  n->lhs = std::move(f);
  return MSFormula(n);
}

MSFormula MSFormula::binary(MsOp op, MSFormula a, MSFormula b) {
  auto n = std::make_shared<Node>();
  n->op = op;
  int p = ms_prec(op), pl = ms_prec(a.op()), pr = ms_prec(b.op());
  bool right = op == MsOp::Implies || op == MsOp::Iff;
  n->text = paren(a.text(), pl < p || (pl == p && right)) + ms_symbol(op) + paren(b.text(), pr < p || (pr == p && !right));
  n->has_enabled = a.has_enabled() || b.has_enabled();
  n->bound = std::max(a.atom_bound(), b.atom_bound());
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  return MSFormula(n);
}

MsOp MSFormula::op() const { return n_->op; }
const Formula& MSFormula::arg() const { return *n_->arg; }
const ActionRef& MSFormula::target() const { return *n_->target; }
const MSFormula& MSFormula::lhs() const { return *n_->lhs; }
const MSFormula& MSFormula::rhs() const { return *n_->rhs; }
const std::string& MSFormula::text() const { return n_->text; }
bool MSFormula::has_enabled() const { return n_->has_enabled; }
std::size_t MSFormula::atom_bound() const { return n_->bound; }

std::vector<std::size_t> MSFormula::atoms() const {
  std::vector<std::size_t> out;
  std::function<void(const MSFormula&)> walk = [&](const MSFormula& f) {
    switch (f.op()) {
      case MsOp::B:
      case MsOp::G:
        for (auto a : f.arg().atoms()) out.push_back(a);
        break;
      case MsOp::Enabled:
        if (f.target().builtin())
          for (auto a : f.target().arg.atoms()) out.push_back(a);
        break;
      case MsOp::Not: walk(f.lhs()); break;
      case MsOp::True:
      case MsOp::False: break;
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

MSFormula ms_conj_all(const std::vector<MSFormula>& parts) {
  if (parts.empty()) return MSFormula::truth();
  MSFormula x = parts[0];
  for (std::size_t i = 1; i < parts.size(); ++i) x = MSFormula::conj(x, parts[i]);
  return x;
}

MSFormula ms_disj_all(const std::vector<MSFormula>& parts) {
  if (parts.empty()) return MSFormula::falsity();
  MSFormula x = parts[0];
  for (std::size_t i = 1; i < parts.size(); ++i) x = MSFormula::disj(x, parts[i]);
  return x;
}

namespace {

class MsParser {
 public:
  MsParser(TokenCursor& c, const Vocabulary& v) : c_(c), v_(v) {}

  MSFormula iff() {
    MSFormula lhs = implies();
    if (c_.accept(Tok::Iff)) return MSFormula::iff(lhs, iff());
    return lhs;
  }

 private:
  MSFormula implies() {
    MSFormula lhs = disj();
    if (c_.accept(Tok::Arrow)) return MSFormula::implies(lhs, implies());
    return lhs;
  }
  MSFormula disj() {
    MSFormula x = conj();
    while (c_.accept(Tok::Or)) x = MSFormula::disj(x, conj());
    return x;
  }
  MSFormula conj() {
    MSFormula x = unary();
    while (c_.accept(Tok::And)) x = MSFormula::conj(x, unary());
    return x;
  }
  MSFormula unary() {
    if (c_.accept(Tok::Not)) return MSFormula::negation(unary());
    return primary();
  }
  MSFormula primary() {
    if (c_.accept(Tok::LParen)) {
      MSFormula f = iff();
      c_.expect(Tok::RParen, "')'");
      return f;
    }
    if (c_.accept_word("true")) return MSFormula::truth();
    if (c_.accept_word("false")) return MSFormula::falsity();
    if (c_.at_word("B") || c_.at_word("G")) {
      bool belief = c_.peek().text == "B";
      c_.next();
      c_.expect(Tok::LParen, "'('");
      Formula f = parse_formula(c_, v_);
      c_.expect(Tok::RParen, "')'");
      return belief ? MSFormula::belief(f) : MSFormula::goal(f);
    }
    if (c_.accept_word("enabled")) {
      c_.expect(Tok::LParen, "'('");
      ActionRef r = parse_action_ref(c_, v_);
      c_.expect(Tok::RParen, "')'");
      return MSFormula::enabled(std::move(r));
    }
    c_.fail("expected mental-state formula (B(..), G(..), enabled(..)), found " + describe(c_.peek()));
  }

  TokenCursor& c_;
  const Vocabulary& v_;
};

}  // namespace

MSFormula parse_msf(TokenCursor& cursor, const Vocabulary& vocab) { return MsParser(cursor, vocab).iff(); }

MSFormula parse_msf(std::string_view text, const Vocabulary& vocab) {
  TokenCursor c(tokenize(text));
  MSFormula f = parse_msf(c, vocab);
  if (!c.at(Tok::End)) c.fail("unexpected " + describe(c.peek()) + " after formula");
  return f;
}

namespace {

ActionRef rebase_ref(const ActionRef& r, const Vocabulary& target) {
  if (!r.builtin()) return r;
  ActionRef out = r;
  out.arg = rebase(r.arg, target);
  return out;
}

}  // namespace

MSFormula rebase(const MSFormula& f, const Vocabulary& target) {
  return map_leaves(f, [&](const MSFormula& leaf) {
    switch (leaf.op()) {
      case MsOp::B: return MSFormula::belief(rebase(leaf.arg(), target));
      case MsOp::G: return MSFormula::goal(rebase(leaf.arg(), target));
      case MsOp::Enabled: return MSFormula::enabled(rebase_ref(leaf.target(), target));
      default: return leaf;
    }
  });
}

// -------------------------------------------------------------- evaluation

bool builtin_enabled(const ActionRef& ref, const MentalState& s) {
  const std::size_t n = s.atoms();
  switch (ref.kind) {
    case ActionRef::Kind::Adopt: {
      ModelSet m = ModelSet::of(ref.arg, n);
      return !m.empty() && !s.believes(m);
    }
    case ActionRef::Kind::Drop:
    case ActionRef::Kind::Del: return true;
    case ActionRef::Kind::Ins: return s.belief_models().intersects(ModelSet::of(ref.arg, n));
    case ActionRef::Kind::Named: break;
  }
  throw ValidationError("'" + ref.name + "' is not a built-in action");
}

bool eval_msf(const MentalState& s, const MSFormula& phi, const EnabledOracle* ctx) {
  switch (phi.op()) {
    case MsOp::True: return true;
    case MsOp::False: return false;
    case MsOp::B: return s.believes(phi.arg());
    case MsOp::G: return s.has_goal(phi.arg());
    case MsOp::Enabled:
      if (phi.target().builtin()) return builtin_enabled(phi.target(), s);
      if (!ctx) throw ValidationError("'" + phi.text() + "' needs a capability context");
      return ctx->enabled(phi.target().name, s);
    case MsOp::Not: return !eval_msf(s, phi.lhs(), ctx);
    case MsOp::And: return eval_msf(s, phi.lhs(), ctx) && eval_msf(s, phi.rhs(), ctx);
    case MsOp::Or: return eval_msf(s, phi.lhs(), ctx) || eval_msf(s, phi.rhs(), ctx);
    case MsOp::Implies: return !eval_msf(s, phi.lhs(), ctx) || eval_msf(s, phi.rhs(), ctx);
    case MsOp::Iff: return eval_msf(s, phi.lhs(), ctx) == eval_msf(s, phi.rhs(), ctx);
  }
  return false;
}

// ---------------------------------------------------------------- universe

std::vector<Formula> canonical_beliefs(const ModelSet& models, const Vocabulary& vocab) {
  if (models.full()) return {};
  return {formula_of_models(models, vocab)};
}

namespace {

ModelSet mask_to_models(std::uint64_t mask, std::size_t atoms) {
  ModelSet m(atoms, false);
  for (std::uint64_t v = 0; v < (std::uint64_t{1} << atoms); ++v)
    if ((mask >> v) & 1U) m.set(v, true);
  return m;
}

// Visits combinations of {0..count-1} of size 0..k in size-then-lex order.
template <class Fn>
bool for_each_combination(std::size_t count, std::size_t k, Fn&& fn) {
  std::vector<std::size_t> idx;
  for (std::size_t size = 0; size <= std::min(k, count); ++size) {
    idx.resize(size);
    for (std::size_t i = 0; i < size; ++i) idx[i] = i;
    while (true) {
      if (!fn(idx)) return false;
      if (size == 0) break;
      std::size_t i = size;
      while (i > 0 && idx[i - 1] == count - size + i - 1) --i;
      if (i == 0) break;
      ++idx[i - 1];
      for (std::size_t j = i; j < size; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
  return true;
}

void check_universe_bounds(std::size_t atoms, std::size_t gens) {
  if (atoms > OracleBounds::kMaxAtoms)
    throw BoundsError("oracle vocabulary has " + std::to_string(atoms) + " atoms (limit " +
                      std::to_string(OracleBounds::kMaxAtoms) + ")");
  if (gens > OracleBounds::kMaxGenerators)
    throw BoundsError("oracle generator bound " + std::to_string(gens) + " exceeds " +
                      std::to_string(OracleBounds::kMaxGenerators));
}

}  // namespace

std::vector<MentalState> enumerate_universe(const VocabPtr& vocab, std::size_t max_generators) {
  const std::size_t n = vocab->size();
  check_universe_bounds(n, max_generators);
  const std::uint64_t valuations = std::uint64_t{1} << n;
  const std::uint64_t full = valuations == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << valuations) - 1;
  std::vector<Formula> mask_formula(full + 1);
  for (std::uint64_t m = 0; m <= full; ++m) mask_formula[m] = formula_of_models(mask_to_models(m, n), *vocab);

  std::vector<MentalState> out;
  for (std::uint64_t s = full; s >= 1; --s) {
    std::vector<Formula> beliefs = s == full ? std::vector<Formula>{} : std::vector<Formula>{mask_formula[s]};
    std::vector<std::uint64_t> candidates;
    for (std::uint64_t g = 1; g <= full; ++g)
      if ((s & ~g) != 0) candidates.push_back(g);
    for_each_combination(candidates.size(), max_generators, [&](const std::vector<std::size_t>& idx) {
      std::vector<GoalEntry> goals;
      for (auto i : idx) goals.emplace_back(mask_formula[candidates[i]]);
      out.emplace_back(vocab, beliefs, std::move(goals));
      return true;
    });
  }
  return out;
}

OracleVerdict validity_oracle(const MSFormula& phi_in, const OracleBounds& bounds) {
  // Vocabulary: explicit, or the formula's own atoms (projection preserves truth).
  Vocabulary vocab;
  if (bounds.vocabulary) {
    vocab = *bounds.vocabulary;
  } else {
    std::set<std::string> seen;
    std::function<void(const Formula&)> collect = [&](const Formula& f) {
      switch (f.op()) {
        case Op::Atom:
          if (seen.insert(f.atom_name()).second) vocab.add(f.atom_name());
          break;
        case Op::Not: collect(f.lhs()); break;
        case Op::True:
        case Op::False: break;
        default:
          collect(f.lhs());
          collect(f.rhs());
      }
    };
    std::function<void(const MSFormula&)> walk = [&](const MSFormula& f) {
      switch (f.op()) {
        case MsOp::B:
        case MsOp::G: collect(f.arg()); break;
        case MsOp::Enabled:
          if (f.target().builtin()) collect(f.target().arg);
          break;
        case MsOp::Not: walk(f.lhs()); break;
        case MsOp::True:
        case MsOp::False: break;
        default:
          walk(f.lhs());
          walk(f.rhs());
      }
    };
    walk(phi_in);
  }
  const std::size_t n = vocab.size();
  check_universe_bounds(n, bounds.max_generators);

  std::function<void(const MSFormula&)> reject_named = [&](const MSFormula& f) {
    if (f.op() == MsOp::Enabled && !f.target().builtin())
      throw UnsupportedError("validity oracle cannot decide '" + f.text() + "' (capability enabledness)");
    if (f.op() == MsOp::Not) reject_named(f.lhs());
    if (f.op() >= MsOp::And) {
      reject_named(f.lhs());
      reject_named(f.rhs());
    }
  };
  reject_named(phi_in);

  auto vp = std::make_shared<const Vocabulary>(vocab);
  const MSFormula phi = rebase(phi_in, vocab);

  std::vector<ModelSet> leaves;
  std::function<void(const MSFormula&)> gather = [&](const MSFormula& f) {
    if (f.op() == MsOp::G) {
      ModelSet m = ModelSet::of(f.arg(), n);
      if (std::find(leaves.begin(), leaves.end(), m) == leaves.end()) leaves.push_back(m);
    } else if (f.op() == MsOp::Not) {
      gather(f.lhs());
    } else if (f.op() >= MsOp::And) {
      gather(f.lhs());
      gather(f.rhs());
    }
  };
  gather(phi);
  if (leaves.size() > 16) throw BoundsError("too many distinct goal atoms for the validity oracle");
  const std::size_t m = leaves.size();

  OracleVerdict verdict;
  verdict.bounds = "atoms=" + std::to_string(n) + " [";
  for (std::size_t i = 0; i < n; ++i) verdict.bounds += (i ? "," : "") + vocab.name(i);
  verdict.bounds += "], generators<=" + std::to_string(bounds.max_generators);

  const std::uint64_t valuations = std::uint64_t{1} << n;
  const std::uint64_t full_mask = valuations == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << valuations) - 1;
  const ModelSet full(n, true);

  for (std::uint64_t s = full_mask; s >= 1; --s) {
    ModelSet sigma = mask_to_models(s, n);
    std::vector<Formula> beliefs = canonical_beliefs(sigma, vocab);

    // Realizable goal profiles: J = set of leaves a single generator entails.
    std::vector<std::uint32_t> profiles;
    std::vector<Formula> reps;
    for (std::uint32_t j = 0; j < (std::uint32_t{1} << m); ++j) {
      ModelSet inter = full;
      for (std::size_t l = 0; l < m; ++l)
        if ((j >> l) & 1U) inter &= leaves[l];
      if (inter.empty()) continue;
      auto works = [&](const ModelSet& g) {
        if (g.empty() || sigma.subset_of(g)) return false;
        for (std::size_t l = 0; l < m; ++l)
          if (!((j >> l) & 1U) && g.subset_of(leaves[l])) return false;
        return true;
      };
      std::optional<ModelSet> chosen;
      if (works(inter)) {
        chosen = inter;
      } else if (sigma.subset_of(inter)) {
        sigma.for_each([&](std::uint64_t v) {
          if (chosen) return;
          ModelSet g = inter;
          g.set(v, false);
          if (works(g)) chosen = g;
        });
      }
      if (!chosen) continue;
      profiles.push_back(j);
      reps.push_back(formula_of_models(*chosen, vocab));
    }

    std::unordered_set<std::uint32_t> seen_unions;
    bool found = false;
    for_each_combination(profiles.size(), bounds.max_generators, [&](const std::vector<std::size_t>& idx) {
      std::uint32_t u = 0;
      for (auto i : idx) u |= profiles[i];
      if (!seen_unions.insert(u).second) return true;
      std::vector<GoalEntry> goals;
      for (auto i : idx) goals.emplace_back(reps[i]);
      MentalState st(vp, beliefs, std::move(goals));
      ++verdict.states_examined;
      if (!eval_msf(st, phi)) {
        verdict.valid = false;
        verdict.countermodel = st;
        found = true;
        return false;
      }
      return true;
    });
    if (found) return verdict;
  }
  return verdict;
}

}  // namespace goal
