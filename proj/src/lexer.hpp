//===----------------------------------------------------------------------===//
//
// Copyright 2026 The coopver authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
//===----------------------------------------------------------------------===//
//
// Tokenizer and expression grammar shared by the program parser and the
// witness invariant parser.
//
//===----------------------------------------------------------------------===//
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "coopver/expr.hpp"

namespace coopver::detail {

enum class Tok { Ident, Number, Punct, End };

struct Token {
  Tok kind;
  std::string text;
  int line;
  int col;
  int end_line;
  int end_col; // one past the last character
  size_t offset;
  size_t end_offset;
};

std::vector<Token> tokenize(std::string_view text);

class TokenStream {
public:
  explicit TokenStream(std::vector<Token> toks) : toks_(std::move(toks)) {}

  const Token &peek(size_t ahead = 0) const {
    size_t i = pos_ + ahead;
    return i < toks_.size() ? toks_[i] : toks_.back();
  }
  const Token &next() {
    const Token &t = peek();
    if (pos_ < toks_.size() - 1)
      ++pos_;
    return t;
  }
  const Token &previous() const { return toks_[pos_ == 0 ? 0 : pos_ - 1]; }
  bool at_end() const { return peek().kind == Tok::End; }
  size_t position() const { return pos_; }
  const Token &at(size_t i) const { return i < toks_.size() ? toks_[i] : toks_.back(); }
  bool is(std::string_view punct_or_ident, size_t ahead = 0) const {
    const Token &t = peek(ahead);
    return t.kind != Tok::End && t.kind != Tok::Number && t.text == punct_or_ident;
  }
  bool accept(std::string_view s) {
    if (!is(s))
      return false;
    next();
    return true;
  }
  const Token &expect(std::string_view s);
  [[noreturn]] void fail(const std::string &msg) const;
  [[noreturn]] void fail_at(const Token &t, const std::string &msg) const;

private:
  std::vector<Token> toks_;
  size_t pos_ = 0;
};

/// Parses a full expression (lowest precedence: `||`).
ExprPtr parse_expression(TokenStream &ts);
/// Parses an expression and coerces it to boolean sort.
ExprPtr parse_condition(TokenStream &ts);
/// Coerces to bool (`e != 0`) or throws when the sort is wrong.
ExprPtr as_bool(const ExprPtr &e, const Token &where);
ExprPtr as_arith(const ExprPtr &e, const Token &where);

bool is_keyword(std::string_view s);

} // namespace coopver::detail
