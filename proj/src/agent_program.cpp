#include "goal/agent_program.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace goal {

std::string HoareAxiom::text() const { return "{" + pre.text() + "} " + capability + " {" + post.text() + "}"; }

std::string ProofTerm::text() const {
  if (kind == Kind::Ref) return name;
  std::string s = kind == Kind::Trans ? "trans(" : "disj(";
  for (std::size_t i = 0; i < children.size(); ++i) s += (i ? ", " : "") + children[i].text();
  return s + ")";
}

const char* kind_keyword(PropertyDecl::Kind kind) {
  switch (kind) {
    case PropertyDecl::Kind::Invariant: return "invariant";
    case PropertyDecl::Kind::Unless: return "unless";
    case PropertyDecl::Kind::Ensures: return "ensures";
    case PropertyDecl::Kind::LeadsTo: return "leadsto";
    case PropertyDecl::Kind::Hoare: return "hoare";
  }
  return "?";
}

std::string PropertyDecl::text() const {
  std::string s = std::string(kind_keyword(kind)) + " " + name + ": ";
  switch (kind) {
    case Kind::Invariant: return s + lhs.text();
    case Kind::Hoare: return s + "{" + lhs.text() + "} " + statement->text() + " {" + rhs.text() + "}";
    case Kind::LeadsTo:
      s += lhs.text() + ", " + rhs.text();
      if (proof) s += " by " + proof->text();
      return s;
    default: return s + lhs.text() + ", " + rhs.text();
  }
}

// -------------------------------------------------------------------- Agent

Agent::Agent(VocabPtr vocab, std::vector<CapabilityPtr> capabilities, std::vector<ConditionalAction> program,
             MentalState initial, std::vector<HoareAxiom> axioms, std::vector<PropertyDecl> properties)
    : vocab_(std::move(vocab)),
      capabilities_(std::move(capabilities)),
      program_(std::move(program)),
      initial_(std::move(initial)),
      axioms_(std::move(axioms)),
      properties_(std::move(properties)) {
  if (program_.empty()) throw ValidationError("program must contain at least one conditional action");
  std::set<std::string> names;
  for (const auto& c : capabilities_)
    if (!names.insert(c->name).second) throw ValidationError("duplicate capability '" + c->name + "'");
  for (const auto& b : program_) {
    if (!names.insert(b.label).second) throw ValidationError("duplicate action label or capability name '" + b.label + "'");
    if (b.condition.has_enabled()) throw ValidationError("condition of '" + b.label + "' mentions enabled(..)");
    if (b.action.kind() == Action::Kind::Capability && !find_capability(b.action.spec().name))
      throw ValidationError("undeclared capability '" + b.action.spec().name + "'");
  }
  std::set<std::string> props;
  for (const auto& p : properties_)
    if (!props.insert(p.name).second) throw ValidationError("duplicate property '" + p.name + "'");
}

const CapabilitySpec* Agent::find_capability(std::string_view name) const {
  for (const auto& c : capabilities_)
    if (c->name == name) return c.get();
  return nullptr;
}

const ConditionalAction* Agent::find_action(std::string_view label) const {
  auto i = action_index(label);
  return i ? &program_[*i] : nullptr;
}

std::optional<std::size_t> Agent::action_index(std::string_view label) const {
  for (std::size_t i = 0; i < program_.size(); ++i)
    if (program_[i].label == label) return i;
  return std::nullopt;
}

const PropertyDecl* Agent::find_property(std::string_view name) const {
  for (const auto& p : properties_)
    if (p.name == name) return &p;
  return nullptr;
}

bool Agent::enabled(const std::string& name, const MentalState& state) const {
  if (const auto* b = find_action(name)) return enabled_cond(*b, state);
  for (const auto& c : capabilities_)
    if (c->name == name) return enabled_cap(Action::capability(c), state);
  throw ValidationError("enabled(" + name + ") names no capability or conditional action");
}

// ------------------------------------------------------------------- parser

namespace {

using Tokens = std::vector<Token>;
using Domains = std::map<std::string, std::vector<std::string>>;

[[noreturn]] void fail_at(const Token& t, const std::string& msg) { TokenCursor::fail_at(t, msg); }

std::size_t matching_brace(const Tokens& toks, std::size_t open) {
  int depth = 0;
  for (std::size_t i = open; i < toks.size(); ++i) {
    if (toks[i].kind == Tok::LBrace) ++depth;
    if (toks[i].kind == Tok::RBrace && --depth == 0) return i;
    if (toks[i].kind == Tok::End) break;
  }
  fail_at(toks[open], "unclosed '{'");
}

std::vector<Tokens> split(const Tokens& body, Tok sep) {
  std::vector<Tokens> out;
  Tokens cur;
  int depth = 0;
  for (const auto& t : body) {
    if (t.kind == Tok::LParen || t.kind == Tok::LBrace) ++depth;
    if (t.kind == Tok::RParen || t.kind == Tok::RBrace) --depth;
    if (depth == 0 && t.kind == sep) {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
      continue;
    }
    cur.push_back(t);
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

TokenCursor cursor(const Tokens& entry) {
  Tokens t = entry;
  Token end;
  if (!entry.empty()) {
    end.offset = entry.back().offset + entry.back().text.size();
    end.line = entry.back().line;
    end.column = entry.back().column + entry.back().text.size();
  }
  t.push_back(end);
  return TokenCursor(std::move(t));
}

void expect_end(TokenCursor& c) {
  if (!c.at(Tok::End)) c.fail("unexpected " + describe(c.peek()));
}

// Placeholder names `$x` occurring in identifier tokens, in order of appearance.
std::vector<std::string> placeholders(const Tokens& toks, const Domains& doms) {
  std::vector<std::string> vars;
  for (const auto& t : toks) {
    if (t.kind != Tok::Ident) continue;
    for (std::size_t p = t.text.find('$'); p != std::string::npos; p = t.text.find('$', p + 1)) {
      std::size_t q = p + 1;
      while (q < t.text.size() && std::isalnum(static_cast<unsigned char>(t.text[q]))) ++q;
      std::string v = t.text.substr(p + 1, q - p - 1);
      if (v.empty() || !doms.count(v)) fail_at(t, "unknown placeholder '$" + v + "'");
      if (std::find(vars.begin(), vars.end(), v) == vars.end()) vars.push_back(v);
    }
  }
  return vars;
}

std::string substitute(const std::string& text, const std::map<std::string, std::string>& binding) {
  std::string out;
  for (std::size_t i = 0; i < text.size();) {
    if (text[i] == '$') {
      std::size_t q = i + 1;
      while (q < text.size() && std::isalnum(static_cast<unsigned char>(text[q]))) ++q;
      auto it = binding.find(text.substr(i + 1, q - i - 1));
      if (it != binding.end()) {
        out += it->second;
        i = q;
        continue;
      }
    }
    out += text[i++];
  }
  return out;
}

// Instantiates the placeholders found in `scope` (default: the entry itself)
// over the cartesian product of their domains.
std::vector<Tokens> expand(const Tokens& entry, const Domains& doms, const Tokens* scope = nullptr) {
  auto vars = placeholders(scope ? *scope : entry, doms);
  if (vars.empty()) return {entry};
  std::vector<Tokens> out;
  std::vector<std::size_t> idx(vars.size(), 0);
  while (true) {
    std::map<std::string, std::string> binding;
    for (std::size_t k = 0; k < vars.size(); ++k) binding[vars[k]] = doms.at(vars[k])[idx[k]];
    Tokens inst = entry;
    for (auto& t : inst)
      if (t.kind == Tok::Ident && t.text.find('$') != std::string::npos) t.text = substitute(t.text, binding);
    out.push_back(std::move(inst));
    std::size_t k = vars.size();
    while (k > 0) {
      if (++idx[k - 1] < doms.at(vars[k - 1]).size()) break;
      idx[k - 1] = 0;
      --k;
    }
    if (k == 0) break;
  }
  return out;
}

std::vector<Tokens> expand_all(const std::vector<Tokens>& entries, const Domains& doms) {
  std::vector<Tokens> out;
  for (const auto& e : entries)
    for (auto& x : expand(e, doms)) out.push_back(std::move(x));
  return out;
}

Formula parse_formula_entry(const Tokens& entry, const Vocabulary& vocab) {
  TokenCursor c = cursor(entry);
  Formula f = parse_formula(c, vocab);
  expect_end(c);
  return f;
}

std::vector<Formula> parse_formula_list(TokenCursor& c, const Vocabulary& vocab) {
  std::vector<Formula> out;
  c.expect(Tok::LBrace, "'{'");
  if (c.accept(Tok::RBrace)) return out;
  do {
    out.push_back(parse_formula(c, vocab));
  } while (c.accept(Tok::Comma));
  c.expect(Tok::RBrace, "'}'");
  return out;
}

ProofTerm parse_proof(TokenCursor& c) {
  const Token& t = c.expect(Tok::Ident, "proof term");
  ProofTerm p;
  if ((t.text == "trans" || t.text == "disj") && c.accept(Tok::LParen)) {
    p.kind = t.text == "trans" ? ProofTerm::Kind::Trans : ProofTerm::Kind::Disj;
    do {
      p.children.push_back(parse_proof(c));
    } while (c.accept(Tok::Comma));
    c.expect(Tok::RParen, "')'");
    return p;
  }
  p.kind = ProofTerm::Kind::Ref;
  p.name = t.text;
  return p;
}

class AgentParser {
 public:
  explicit AgentParser(std::string_view text) : toks_(tokenize(text)) {}

  // Parses one property against an existing agent's declarations.
  PropertyDecl standalone_property(std::string_view text, const Agent& agent) {
    vocab_ = *agent.vocabulary();
    caps_ = agent.capabilities();
    program_ = agent.program();
    properties_ = agent.properties();
    Tokens entry = tokenize(text);
    entry.pop_back();
    if (!entry.empty() && entry.back().kind == Tok::Semicolon) entry.pop_back();
    if (entry.empty()) throw ParseError("empty property", 0, 1, 1);
    property_entry(entry);
    check_proofs();
    return properties_.back();
  }

  Agent run() {
    enum Rank { kDomain, kVocab, kBeliefs, kGoals, kCapability, kProgram, kAxioms, kProperties };
    static const std::map<std::string, int> kRank = {
        {"domain", kDomain},         {"vocab", kVocab},     {"beliefs", kBeliefs}, {"goals", kGoals},
        {"capability", kCapability}, {"program", kProgram}, {"axioms", kAxioms},   {"properties", kProperties},
    };
    int rank = -1;
    bool seen_vocab = false, seen_program = false;
    std::vector<Formula> beliefs;
    std::vector<GoalEntry> goals;
    std::size_t i = 0;
    while (toks_[i].kind != Tok::End) {
      const Token& kw = toks_[i];
      auto it = kw.kind == Tok::Ident ? kRank.find(kw.text) : kRank.end();
      if (it == kRank.end()) fail_at(kw, "expected section keyword, found " + describe(kw));
      int r = it->second;
      bool repeatable = r == kDomain || r == kCapability;
      if (r < rank || (r == rank && !repeatable)) fail_at(kw, "section '" + kw.text + "' out of order");
      if (r > kVocab && !seen_vocab) fail_at(kw, "'vocab' section must come first");
      rank = r;
      ++i;
      if (r == kDomain || r == kCapability) {
        const Token& name = toks_[i];
        if (name.kind != Tok::Ident) fail_at(name, "expected name after '" + kw.text + "'");
        ++i;
        if (toks_[i].kind != Tok::LBrace) fail_at(toks_[i], "expected '{'");
        std::size_t close = matching_brace(toks_, i);
        Tokens body(toks_.begin() + static_cast<std::ptrdiff_t>(i + 1), toks_.begin() + static_cast<std::ptrdiff_t>(close));
        if (r == kDomain)
          domain(name, body);
        else
          capability(name, Tokens(toks_.begin() + static_cast<std::ptrdiff_t>(i - 2),
                                  toks_.begin() + static_cast<std::ptrdiff_t>(close + 1)));
        i = close + 1;
        continue;
      }
      if (toks_[i].kind != Tok::LBrace) fail_at(toks_[i], "expected '{' after '" + kw.text + "'");
      std::size_t close = matching_brace(toks_, i);
      Tokens body(toks_.begin() + static_cast<std::ptrdiff_t>(i + 1), toks_.begin() + static_cast<std::ptrdiff_t>(close));
      switch (r) {
        case kVocab:
          for (const auto& e : expand_all(split(body, Tok::Comma), domains_)) {
            if (e.size() != 1 || e[0].kind != Tok::Ident) fail_at(e[0], "expected atom name");
            try {
              vocab_.add(e[0].text);
            } catch (const std::exception& ex) {
              fail_at(e[0], ex.what());
            }
          }
          seen_vocab = true;
          break;
        case kBeliefs:
          for (const auto& e : expand_all(split(body, Tok::Semicolon), domains_))
            beliefs.push_back(parse_formula_entry(e, vocab_));
          break;
        case kGoals:
          for (const auto& e : expand_all(split(body, Tok::Semicolon), domains_))
            goals.emplace_back(parse_formula_entry(e, vocab_));
          break;
        case kProgram:
          for (const auto& e : expand_all(split(body, Tok::Semicolon), domains_)) program_entry(e);
          seen_program = true;
          break;
        case kAxioms:
          for (const auto& e : expand_all(split(body, Tok::Semicolon), domains_)) axiom_entry(e);
          break;
        case kProperties:
          for (const auto& e : expand_all(split(body, Tok::Semicolon), domains_)) property_entry(e);
          break;
      }
      i = close + 1;
    }
    if (!seen_vocab) fail_at(toks_[i], "missing 'vocab' section");
    if (!seen_program) fail_at(toks_[i], "missing 'program' section");
    check_proofs();

    auto vp = std::make_shared<const Vocabulary>(vocab_);
    std::string why;
    auto init = MentalState::try_make(vp, beliefs, goals, &why);
    if (!init) throw ValidationError("initial mental state rejected: " + why);
    for (std::size_t k = 0; k < program_.size(); ++k)
      if (program_[k].label.empty()) program_[k].label = "b" + std::to_string(k);
    return Agent(vp, caps_, program_, *init, axioms_, properties_);
  }

 private:
  void domain(const Token& name, const Tokens& body) {
    for (char ch : name.text)
      if (!std::isalnum(static_cast<unsigned char>(ch))) fail_at(name, "domain names must be alphanumeric");
    if (domains_.count(name.text)) fail_at(name, "duplicate domain '" + name.text + "'");
    std::vector<std::string> values;
    for (const auto& e : split(body, Tok::Comma)) {
      if (e.size() != 1 || e[0].kind != Tok::Ident) fail_at(e[0], "expected domain value");
      values.push_back(e[0].text);
    }
    if (values.empty()) fail_at(name, "empty domain '" + name.text + "'");
    domains_[name.text] = std::move(values);
  }

  void capability(const Token&, const Tokens& block) {
    Tokens header(block.begin() + 1, block.begin() + 2);
    for (const auto& inst : expand(block, domains_, &header)) {
      const Token& name = inst[1];
      if (name.text == "ins" || name.text == "del" || name.text == "adopt" || name.text == "drop")
        fail_at(name, "'" + name.text + "' is a built-in action");
      if (!valid_atom_name(name.text)) fail_at(name, "invalid capability name '" + name.text + "'");
      for (const auto& c : caps_)
        if (c->name == name.text) fail_at(name, "duplicate capability '" + name.text + "'");
      auto spec = std::make_shared<CapabilitySpec>();
      spec->name = name.text;
      Tokens body(inst.begin() + 3, inst.end() - 1);
      for (const auto& clause : expand_all(split(body, Tok::Semicolon), domains_)) {
        TokenCursor c = cursor(clause);
        c.expect_word("when");
        EffectClause ec;
        ec.guard = parse_formula(c, vocab_);
        if (c.accept_word("add")) ec.add = parse_formula_list(c, vocab_);
        if (c.accept_word("del")) ec.remove = parse_formula_list(c, vocab_);
        expect_end(c);
        spec->clauses.push_back(std::move(ec));
      }
      caps_.push_back(std::move(spec));
    }
  }

  Action resolve_action(TokenCursor& c) {
    const Token at = c.peek();
    ActionRef r = parse_action_ref(c, vocab_);
    switch (r.kind) {
      case ActionRef::Kind::Adopt: return Action::adopt(r.arg);
      case ActionRef::Kind::Drop: return Action::drop(r.arg);
      case ActionRef::Kind::Ins: return Action::ins(r.arg);
      case ActionRef::Kind::Del: return Action::del(r.arg);
      case ActionRef::Kind::Named: break;
    }
    for (const auto& cap : caps_)
      if (cap->name == r.name) return Action::capability(cap);
    fail_at(at, "undeclared capability '" + r.name + "'");
  }

  void program_entry(const Tokens& entry) {
    Tokens t = entry;
    std::string label;
    if (t.size() >= 2 && t[0].kind == Tok::Ident && t[1].kind == Tok::Colon) {
      label = t[0].text;
      if (!valid_atom_name(label)) fail_at(t[0], "invalid label '" + label + "'");
      t.erase(t.begin(), t.begin() + 2);
    }
    std::optional<std::size_t> split_at;
    int depth = 0;
    for (std::size_t k = 0; k + 2 < t.size(); ++k) {
      if (t[k].kind == Tok::LParen) ++depth;
      if (t[k].kind == Tok::RParen) --depth;
      if (depth == 0 && t[k].kind == Tok::Arrow && t[k + 1].kind == Tok::Ident && t[k + 1].text == "do" &&
          t[k + 2].kind == Tok::LParen)
        split_at = k;
    }
    if (!split_at) fail_at(entry.front(), "expected '<condition> -> do(<action>)'");
    TokenCursor cc = cursor(Tokens(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(*split_at)));
    MSFormula cond = parse_msf(cc, vocab_);
    expect_end(cc);
    if (cond.has_enabled()) fail_at(t.front(), "action conditions cannot mention enabled(..)");
    TokenCursor ac = cursor(Tokens(t.begin() + static_cast<std::ptrdiff_t>(*split_at + 1), t.end()));
    ac.expect_word("do");
    ac.expect(Tok::LParen, "'('");
    Action a = resolve_action(ac);
    ac.expect(Tok::RParen, "')'");
    expect_end(ac);
    for (const auto& b : program_)
      if (!label.empty() && b.label == label) fail_at(entry.front(), "duplicate label '" + label + "'");
    for (const auto& c : caps_)
      if (c->name == label) fail_at(entry.front(), "label '" + label + "' clashes with a capability name");
    program_.push_back({label, cond, a});
  }

  void axiom_entry(const Tokens& entry) {
    TokenCursor c = cursor(entry);
    c.expect(Tok::LBrace, "'{'");
    MSFormula pre = parse_msf(c, vocab_);
    c.expect(Tok::RBrace, "'}'");
    const Token name = c.expect(Tok::Ident, "capability name");
    bool known = std::any_of(caps_.begin(), caps_.end(), [&](const CapabilityPtr& p) { return p->name == name.text; });
    if (!known) fail_at(name, "axiom for undeclared capability '" + name.text + "'");
    c.expect(Tok::LBrace, "'{'");
    MSFormula post = parse_msf(c, vocab_);
    c.expect(Tok::RBrace, "'}'");
    expect_end(c);
    axioms_.push_back({pre, name.text, post});
  }

  void property_entry(const Tokens& entry) {
    TokenCursor c = cursor(entry);
    const Token kw = c.expect(Tok::Ident, "property kind");
    PropertyDecl p;
    if (kw.text == "invariant")
      p.kind = PropertyDecl::Kind::Invariant;
    else if (kw.text == "unless")
      p.kind = PropertyDecl::Kind::Unless;
    else if (kw.text == "ensures")
      p.kind = PropertyDecl::Kind::Ensures;
    else if (kw.text == "leadsto")
      p.kind = PropertyDecl::Kind::LeadsTo;
    else if (kw.text == "hoare")
      p.kind = PropertyDecl::Kind::Hoare;
    else
      fail_at(kw, "unknown property kind '" + kw.text + "'");
    if (c.peek().kind == Tok::Ident && c.peek(1).kind == Tok::Colon) {
      p.name = c.next().text;
      c.next();
    } else {
      p.name = kw.text + std::to_string(properties_.size());
    }
    for (const auto& q : properties_)
      if (q.name == p.name) fail_at(kw, "duplicate property '" + p.name + "'");
    switch (p.kind) {
      case PropertyDecl::Kind::Invariant: p.lhs = parse_msf(c, vocab_); break;
      case PropertyDecl::Kind::Hoare: {
        c.expect(Tok::LBrace, "'{'");
        p.lhs = parse_msf(c, vocab_);
        c.expect(Tok::RBrace, "'}'");
        const Token at = c.peek();
        p.statement = parse_action_ref(c, vocab_);
        if (!p.statement->builtin()) {
          bool known = std::any_of(caps_.begin(), caps_.end(), [&](const CapabilityPtr& cp) { return cp->name == p.statement->name; }) ||
                       std::any_of(program_.begin(), program_.end(), [&](const ConditionalAction& b) { return b.label == p.statement->name; });
          if (!known) fail_at(at, "unknown action '" + p.statement->name + "'");
        }
        c.expect(Tok::LBrace, "'{'");
        p.rhs = parse_msf(c, vocab_);
        c.expect(Tok::RBrace, "'}'");
        break;
      }
      default:
        p.lhs = parse_msf(c, vocab_);
        c.expect(Tok::Comma, "','");
        p.rhs = parse_msf(c, vocab_);
        if (p.kind == PropertyDecl::Kind::LeadsTo && c.accept_word("by")) {
          proof_tokens_.push_back(c.peek());
          p.proof = parse_proof(c);
          proof_owner_.push_back(properties_.size());
        }
    }
    expect_end(c);
    properties_.push_back(std::move(p));
  }

  // Proof leaves must name ensures properties or earlier leads-to properties.
  void check_proofs() {
    for (std::size_t k = 0; k < proof_owner_.size(); ++k) {
      std::size_t owner = proof_owner_[k];
      std::function<void(const ProofTerm&)> walk = [&](const ProofTerm& t) {
        if (t.kind != ProofTerm::Kind::Ref) {
          for (const auto& ch : t.children) walk(ch);
          return;
        }
        for (std::size_t q = 0; q < properties_.size(); ++q) {
          if (properties_[q].name != t.name) continue;
          if (properties_[q].kind == PropertyDecl::Kind::Ensures) return;
          if (properties_[q].kind == PropertyDecl::Kind::LeadsTo && q < owner) return;
          fail_at(proof_tokens_[k], "proof step '" + t.name + "' is not an ensures or earlier leadsto property");
        }
        fail_at(proof_tokens_[k], "unknown proof step '" + t.name + "'");
      };
      walk(*properties_[owner].proof);
    }
  }

  Tokens toks_;
  Domains domains_;
  Vocabulary vocab_;
  std::vector<CapabilityPtr> caps_;
  std::vector<ConditionalAction> program_;
  std::vector<HoareAxiom> axioms_;
  std::vector<PropertyDecl> properties_;
  std::vector<Token> proof_tokens_;
  std::vector<std::size_t> proof_owner_;
};

}  // namespace

Agent parse_agent(std::string_view text) { return AgentParser(text).run(); }

PropertyDecl parse_property(std::string_view text, const Agent& agent) {
  return AgentParser("").standalone_property(text, agent);
}

Agent with_property(const Agent& agent, PropertyDecl property) {
  auto props = agent.properties();
  props.push_back(std::move(property));
  return Agent(agent.vocabulary(), agent.capabilities(), agent.program(), agent.initial(), agent.axioms(),
               std::move(props));
}

Agent load_agent_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open agent file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_agent(ss.str());
}

// ------------------------------------------------------------------ printer

namespace {

std::string formula_list(const std::vector<Formula>& fs) {
  std::string s = "{ ";
  for (std::size_t i = 0; i < fs.size(); ++i) s += (i ? ", " : "") + fs[i].text();
  return s + (fs.empty() ? "}" : " }");
}

}  // namespace

std::string print_agent(const Agent& a) {
  std::ostringstream out;
  out << "vocab { ";
  const auto& names = a.vocabulary()->names();
  for (std::size_t i = 0; i < names.size(); ++i) out << (i ? ", " : "") << names[i];
  out << " }\n\nbeliefs {\n";
  for (const auto& b : a.initial().beliefs()) out << "  " << b.text() << ";\n";
  out << "}\n\ngoals {\n";
  for (const auto& g : a.initial().goals()) out << "  " << g.goal.text() << ";\n";
  out << "}\n";
  for (const auto& c : a.capabilities()) {
    out << "\ncapability " << c->name << " {\n";
    for (const auto& cl : c->clauses) {
      out << "  when " << cl.guard.text();
      if (!cl.add.empty()) out << " add " << formula_list(cl.add);
      if (!cl.remove.empty()) out << " del " << formula_list(cl.remove);
      out << ";\n";
    }
    out << "}\n";
  }
  out << "\nprogram {\n";
  for (const auto& b : a.program()) out << "  " << b.label << ": " << b.text() << ";\n";
  out << "}\n";
  if (!a.axioms().empty()) {
    out << "\naxioms {\n";
    for (const auto& ax : a.axioms()) out << "  " << ax.text() << ";\n";
    out << "}\n";
  }
  if (!a.properties().empty()) {
    out << "\nproperties {\n";
    for (const auto& p : a.properties()) out << "  " << p.text() << ";\n";
    out << "}\n";
  }
  return out.str();
}

Agent load_fixture(std::string_view name) {
  auto text = fixture_text(name);
  if (!text) throw ValidationError("unknown fixture '" + std::string(name) + "'");
  return parse_agent(*text);
}

Agent ground_shopping_fixture() { return load_fixture("shopping"); }

}  // namespace goal
