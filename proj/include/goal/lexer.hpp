#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "goal/errors.hpp"

namespace goal {

enum class Tok {
  Ident,
  LParen,
  RParen,
  LBrace,
  RBrace,
  Comma,
  Semicolon,
  Colon,
  Not,
  And,
  Or,
  Arrow,
  Iff,
  End,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::size_t offset = 0;
  std::size_t line = 1;
  std::size_t column = 1;
};

std::string describe(const Token& token);

const char* token_name(Tok kind);

// Splits text into tokens; `#` starts a comment running to end of line.
// Identifiers may contain `$` so schema placeholders survive until expansion.
std::vector<Token> tokenize(std::string_view text);

// Cursor over a token range that always ends with an End token.
class TokenCursor {
 public:
  explicit TokenCursor(std::vector<Token> tokens);

  const Token& peek(std::size_t ahead = 0) const;
  const Token& next();
  bool at(Tok kind) const { return peek().kind == kind; }
  bool at_word(std::string_view word) const;
  bool accept(Tok kind);
  bool accept_word(std::string_view word);
  const Token& expect(Tok kind, std::string_view what);
  void expect_word(std::string_view word);
  [[noreturn]] void fail(const std::string& message) const;
  [[noreturn]] static void fail_at(const Token& token, const std::string& message);
  std::size_t position() const { return pos_; }

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace goal
