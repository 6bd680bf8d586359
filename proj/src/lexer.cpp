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

#include "lexer.hpp"

#include <array>
#include <cctype>
#include <limits>

namespace coopver::detail {

namespace {

constexpr std::array<std::string_view, 25> kPuncts = {
    "&&", "||", "==", "!=", "<=", ">=", "++", "--", "+=", "-=", "*=", "/=", "%=",
    "(",  ")",  "{",  "}",  ";",  ",",  "=",  "+",  "-",  "*",  "/",  "%"};
constexpr std::string_view kSingle = "<>!:";

} // namespace

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  size_t i = 0;
  int line = 1, col = 1;
  auto advance = [&](size_t n) {
    for (size_t k = 0; k < n; ++k) {
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
    if (text.substr(i, 2) == "//") {
      while (i < text.size() && text[i] != '\n')
        advance(1);
      continue;
    }
    if (text.substr(i, 2) == "/*") {
      int l = line, cl = col;
      advance(2);
      while (i < text.size() && text.substr(i, 2) != "*/")
        advance(1);
      if (i >= text.size())
        throw ParseError("unterminated comment", l, cl);
      advance(2);
      continue;
    }
    Token t{Tok::End, "", line, col, line, col, i, i};
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t j = i;
      while (j < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_'))
        ++j;
      t.kind = Tok::Ident;
      t.text = std::string(text.substr(i, j - i));
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < text.size() && std::isalnum(static_cast<unsigned char>(text[j])))
        ++j;
      t.kind = Tok::Number;
      t.text = std::string(text.substr(i, j - i));
      advance(j - i);
    } else {
      bool matched = false;
      for (auto p : kPuncts) {
        if (text.substr(i, p.size()) == p) {
          t.kind = Tok::Punct;
          t.text = std::string(p);
          advance(p.size());
          matched = true;
          break;
        }
      }
      if (!matched) {
        if (kSingle.find(c) == std::string_view::npos)
          throw ParseError(std::string("unexpected character '") + c + "'", line, col);
        t.kind = Tok::Punct;
        t.text = std::string(1, c);
        advance(1);
      }
    }
    t.end_line = line;
    t.end_col = col;
    t.end_offset = i;
    out.push_back(std::move(t));
  }
  out.push_back(Token{Tok::End, "<end of input>", line, col, line, col, i, i});
  return out;
}

const Token &TokenStream::expect(std::string_view s) {
  if (!is(s))
    fail("expected '" + std::string(s) + "' but found '" + peek().text + "'");
  return next();
}

void TokenStream::fail(const std::string &msg) const { fail_at(peek(), msg); }

void TokenStream::fail_at(const Token &t, const std::string &msg) const {
  throw ParseError(msg, t.line, t.col);
}

bool is_keyword(std::string_view s) {
  static const std::array<std::string_view, 16> kw = {
      "int",    "unsigned", "signed", "char",  "short",  "long", "if",   "else",
      "while",  "return",   "true",   "false", "nondet", "void", "assert", "_Bool"};
  for (auto k : kw)
    if (k == s)
      return true;
  return false;
}

ExprPtr as_bool(const ExprPtr &e, const Token &where) {
  (void)where;
  if (e->is_bool())
    return e;
  return Expr::binary(ExprKind::Ne, e, Expr::int_lit(0));
}

ExprPtr as_arith(const ExprPtr &e, const Token &where) {
  if (e->is_bool())
    throw ParseError("boolean expression used as integer", where.line, where.col);
  return e;
}

namespace {

ExprPtr parse_or(TokenStream &ts);

ExprPtr parse_primary(TokenStream &ts) {
  const Token &t = ts.peek();
  if (t.kind == Tok::Number) {
    ts.next();
    std::string digits = t.text;
    while (!digits.empty() && (digits.back() == 'u' || digits.back() == 'U' ||
                               digits.back() == 'l' || digits.back() == 'L'))
      digits.pop_back();
    uint64_t v = 0;
    try {
      size_t used = 0;
      v = std::stoull(digits, &used, 0);
      if (used != digits.size())
        throw std::invalid_argument("trailing");
    } catch (const std::exception &) {
      ts.fail_at(t, "malformed integer literal '" + t.text + "'");
    }
    if (v > static_cast<uint64_t>(std::numeric_limits<int64_t>::max()))
      ts.fail_at(t, "integer literal out of range");
    return Expr::int_lit(static_cast<int64_t>(v));
  }
  if (t.kind == Tok::Ident) {
    if (t.text == "true" || t.text == "false") {
      ts.next();
      return Expr::bool_lit(t.text == "true");
    }
    if (is_keyword(t.text))
      ts.fail_at(t, "unexpected keyword '" + t.text + "' in expression");
    ts.next();
    if (ts.is("("))
      ts.fail_at(t, "function call '" + t.text + "' not allowed in expressions");
    return Expr::var(t.text);
  }
  if (ts.accept("(")) {
    ExprPtr e = parse_or(ts);
    ts.expect(")");
    return e;
  }
  ts.fail("expected expression but found '" + t.text + "'");
}

ExprPtr parse_unary(TokenStream &ts) {
  const Token &t = ts.peek();
  if (ts.accept("!")) {
    ExprPtr a = parse_unary(ts);
    return Expr::lnot(as_bool(a, t));
  }
  if (ts.accept("-")) {
    ExprPtr a = parse_unary(ts);
    return Expr::neg(as_arith(a, t));
  }
  if (ts.accept("+"))
    return as_arith(parse_unary(ts), t);
  return parse_primary(ts);
}

ExprPtr parse_mul(TokenStream &ts) {
  ExprPtr lhs = parse_unary(ts);
  for (;;) {
    const Token &t = ts.peek();
    ExprKind k;
    if (ts.is("*"))
      k = ExprKind::Mul;
    else if (ts.is("/"))
      k = ExprKind::Div;
    else if (ts.is("%"))
      k = ExprKind::Rem;
    else
      return lhs;
    ts.next();
    ExprPtr rhs = parse_unary(ts);
    lhs = Expr::binary(k, as_arith(lhs, t), as_arith(rhs, t));
  }
}

ExprPtr parse_add(TokenStream &ts) {
  ExprPtr lhs = parse_mul(ts);
  for (;;) {
    const Token &t = ts.peek();
    ExprKind k;
    if (ts.is("+"))
      k = ExprKind::Add;
    else if (ts.is("-"))
      k = ExprKind::Sub;
    else
      return lhs;
    ts.next();
    ExprPtr rhs = parse_mul(ts);
    lhs = Expr::binary(k, as_arith(lhs, t), as_arith(rhs, t));
  }
}

ExprPtr parse_rel(TokenStream &ts) {
  ExprPtr lhs = parse_add(ts);
  for (;;) {
    const Token &t = ts.peek();
    ExprKind k;
    if (ts.is("<"))
      k = ExprKind::Lt;
    else if (ts.is("<="))
      k = ExprKind::Le;
    else if (ts.is(">"))
      k = ExprKind::Gt;
    else if (ts.is(">="))
      k = ExprKind::Ge;
    else
      return lhs;
    ts.next();
    ExprPtr rhs = parse_add(ts);
    lhs = Expr::binary(k, as_arith(lhs, t), as_arith(rhs, t));
  }
}

ExprPtr parse_eq(TokenStream &ts) {
  ExprPtr lhs = parse_rel(ts);
  for (;;) {
    const Token &t = ts.peek();
    ExprKind k;
    if (ts.is("=="))
      k = ExprKind::Eq;
    else if (ts.is("!="))
      k = ExprKind::Ne;
    else
      return lhs;
    ts.next();
    ExprPtr rhs = parse_rel(ts);
    lhs = Expr::binary(k, as_arith(lhs, t), as_arith(rhs, t));
  }
}

ExprPtr parse_and(TokenStream &ts) {
  ExprPtr lhs = parse_eq(ts);
  while (ts.is("&&")) {
    const Token &t = ts.next();
    ExprPtr rhs = parse_eq(ts);
    lhs = Expr::binary(ExprKind::And, as_bool(lhs, t), as_bool(rhs, t));
  }
  return lhs;
}

ExprPtr parse_or(TokenStream &ts) {
  ExprPtr lhs = parse_and(ts);
  while (ts.is("||")) {
    const Token &t = ts.next();
    ExprPtr rhs = parse_and(ts);
    lhs = Expr::binary(ExprKind::Or, as_bool(lhs, t), as_bool(rhs, t));
  }
  return lhs;
}

} // namespace

ExprPtr parse_expression(TokenStream &ts) { return parse_or(ts); }

ExprPtr parse_condition(TokenStream &ts) {
  const Token &t = ts.peek();
  return as_bool(parse_or(ts), t);
}

} // namespace coopver::detail
