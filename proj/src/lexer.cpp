#include "goal/lexer.hpp"

#include <cctype>

namespace goal {

const char* token_name(Tok kind) {
  switch (kind) {
    case Tok::Ident: return "identifier";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::Comma: return "','";
    case Tok::Semicolon: return "';'";
    case Tok::Colon: return "':'";
    case Tok::Not: return "'!'";
    case Tok::And: return "'&'";
    case Tok::Or: return "'|'";
    case Tok::Arrow: return "'->'";
    case Tok::Iff: return "'<->'";
    case Tok::End: return "end of input";
  }
  return "?";
}

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$'; }

}  // namespace

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0, line = 1, col = 1;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    Token t;
    t.offset = i;
    t.line = line;
    t.column = col;
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < text.size() && ident_char(text[j])) ++j;
      t.kind = Tok::Ident;
      t.text = std::string(text.substr(i, j - i));
      advance(j - i);
      out.push_back(std::move(t));
      continue;
    }
    std::size_t len = 1;
    switch (c) {
      case '(': t.kind = Tok::LParen; break;
      case ')': t.kind = Tok::RParen; break;
      case '{': t.kind = Tok::LBrace; break;
      case '}': t.kind = Tok::RBrace; break;
      case ',': t.kind = Tok::Comma; break;
      case ';': t.kind = Tok::Semicolon; break;
      case ':': t.kind = Tok::Colon; break;
      case '!': t.kind = Tok::Not; break;
      case '&': t.kind = Tok::And; break;
      case '|': t.kind = Tok::Or; break;
      case '-':
        if (text.substr(i, 2) != "->")
          throw ParseError("unexpected character '-'", i, line, col);
        t.kind = Tok::Arrow;
        len = 2;
        break;
      case '<':
        if (text.substr(i, 3) != "<->")
          throw ParseError("unexpected character '<'", i, line, col);
        t.kind = Tok::Iff;
        len = 3;
        break;
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", i, line, col);
    }
    t.text = std::string(text.substr(i, len));
    advance(len);
    out.push_back(std::move(t));
  }
  Token end;
  end.kind = Tok::End;
  end.offset = i;
  end.line = line;
  end.column = col;
  out.push_back(end);
  return out;
}

TokenCursor::TokenCursor(std::vector<Token> tokens) : tokens_(std::move(tokens)) {
  if (tokens_.empty() || tokens_.back().kind != Tok::End) {
    Token end;
    if (!tokens_.empty()) {
      end.offset = tokens_.back().offset + tokens_.back().text.size();
      end.line = tokens_.back().line;
      end.column = tokens_.back().column + tokens_.back().text.size();
    }
    tokens_.push_back(end);
  }
}

const Token& TokenCursor::peek(std::size_t ahead) const {
  std::size_t k = pos_ + ahead;
  return k < tokens_.size() ? tokens_[k] : tokens_.back();
}

const Token& TokenCursor::next() {
  const Token& t = peek();
  if (pos_ + 1 < tokens_.size()) ++pos_;
  return t;
}

bool TokenCursor::at_word(std::string_view word) const {
  return peek().kind == Tok::Ident && peek().text == word;
}

bool TokenCursor::accept(Tok kind) {
  if (!at(kind)) return false;
  next();
  return true;
}

bool TokenCursor::accept_word(std::string_view word) {
  if (!at_word(word)) return false;
  next();
  return true;
}

const Token& TokenCursor::expect(Tok kind, std::string_view what) {
  if (!at(kind)) fail("expected " + std::string(what) + ", found " + describe(peek()));
  return next();
}

void TokenCursor::expect_word(std::string_view word) {
  if (!at_word(word)) fail("expected '" + std::string(word) + "', found " + describe(peek()));
  next();
}

void TokenCursor::fail(const std::string& message) const { fail_at(peek(), message); }

void TokenCursor::fail_at(const Token& token, const std::string& message) {
  throw ParseError(message, token.offset, token.line, token.column);
}

std::string describe(const Token& token) {
  if (token.kind == Tok::End) return "end of input";
  return "'" + token.text + "'";
}

}  // namespace goal
