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
// Expression trees over program variables. Arithmetic and boolean
// expressions share one node type; the kind determines the sort. The
// concrete syntax is the C-like subset used both in programs and in
// witness invariants.
//
//===----------------------------------------------------------------------===//
#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "coopver/error.hpp"

namespace coopver {

enum class ExprKind : uint8_t {
  IntLit,
  BoolLit,
  Var,
  Neg,
  Add,
  Sub,
  Mul,
  Div,
  Rem,
  Eq,
  Ne,
  Lt,
  Le,
  Gt,
  Ge,
  Not,
  And,
  Or,
};

class Expr;
using ExprPtr = std::shared_ptr<const Expr>;

class Expr {
public:
  ExprKind kind() const { return kind_; }
  int64_t value() const { return value_; }
  const std::string &name() const { return name_; }
  const std::vector<ExprPtr> &args() const { return args_; }
  const ExprPtr &arg(size_t i) const { return args_[i]; }

  /// True for boolean-sorted expressions (comparisons, connectives, literals).
  bool is_bool() const;
  size_t size() const;

  static ExprPtr int_lit(int64_t v);
  static ExprPtr bool_lit(bool b);
  static ExprPtr var(std::string name);
  /// Negation of an integer literal folds into the literal so that printed
  /// text re-parses to the same tree.
  static ExprPtr neg(ExprPtr a);
  static ExprPtr binary(ExprKind k, ExprPtr a, ExprPtr b);
  static ExprPtr lnot(ExprPtr a);

  Expr(ExprKind k, int64_t v, std::string name, std::vector<ExprPtr> args)
      : kind_(k), value_(v), name_(std::move(name)), args_(std::move(args)) {}

private:
  ExprKind kind_;
  int64_t value_ = 0;
  std::string name_;
  std::vector<ExprPtr> args_;
};

bool is_comparison(ExprKind k);
bool is_arith_binary(ExprKind k);

// Builders with light constant folding on boolean literals.
ExprPtr mk_and(ExprPtr a, ExprPtr b);
ExprPtr mk_or(ExprPtr a, ExprPtr b);
ExprPtr mk_not(ExprPtr a);
ExprPtr mk_implies(ExprPtr a, ExprPtr b);
ExprPtr conjunction(const std::vector<ExprPtr> &parts);
ExprPtr disjunction(const std::vector<ExprPtr> &parts);

/// Parses the C-like expression syntax. An arithmetic expression in a
/// boolean position is read as `e != 0`. Throws ParseError.
ExprPtr parse_expr(std::string_view text);
/// Parses and requires a boolean-sorted result.
ExprPtr parse_bool_expr(std::string_view text);

std::string to_string(const ExprPtr &e);
bool equal(const ExprPtr &a, const ExprPtr &b);

struct ExprLess {
  bool operator()(const ExprPtr &a, const ExprPtr &b) const;
};

std::set<std::string> free_vars(const ExprPtr &e);

ExprPtr substitute(const ExprPtr &e, const std::string &var, const ExprPtr &by);
ExprPtr substitute(const ExprPtr &e, const std::map<std::string, ExprPtr> &by);
ExprPtr rename(const ExprPtr &e, const std::map<std::string, std::string> &names);

/// Top-level conjuncts after pushing one negation inward (`!(a || b)`
/// becomes `!a && !b`). The conjunction of the result is equivalent to
/// the input.
std::vector<ExprPtr> split_conjunctions(const ExprPtr &e);

/// Syntactic simplification. Folding rules:
///  - literal arithmetic and literal comparisons (unbounded integers);
///  - `e + 0`, `e - 0`, `e * 1`, `e * 0`, `0 * e`;
///  - `e == e`, `e <= e`, `e >= e` to true; `e != e`, `e < e`, `e > e` to false;
///  - boolean identities for `!`, `&&`, `||` with literal operands and `!!e`.
ExprPtr simplify(const ExprPtr &e);

/// True iff the expression simplifies to the literal `true` or `false`.
bool is_trivial(const ExprPtr &e);

/// Comparison atoms occurring in a boolean expression (deduplicated).
std::vector<ExprPtr> atoms(const ExprPtr &e);

/// Rewrites each linear arithmetic operand into a canonical sum
/// `c1*v1 + ... + k` (variables sorted). Reassociation is sound under
/// modular arithmetic, so evaluation is unchanged at every width.
ExprPtr normalize_linear(const ExprPtr &e);

} // namespace coopver
