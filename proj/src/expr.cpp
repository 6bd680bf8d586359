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

#include "coopver/expr.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <sstream>

#include "lexer.hpp"

namespace coopver {

bool is_comparison(ExprKind k) {
  switch (k) {
  case ExprKind::Eq:
  case ExprKind::Ne:
  case ExprKind::Lt:
  case ExprKind::Le:
  case ExprKind::Gt:
  case ExprKind::Ge:
    return true;
  default:
    return false;
  }
}

bool is_arith_binary(ExprKind k) {
  switch (k) {
  case ExprKind::Add:
  case ExprKind::Sub:
  case ExprKind::Mul:
  case ExprKind::Div:
  case ExprKind::Rem:
    return true;
  default:
    return false;
  }
}

bool Expr::is_bool() const {
  switch (kind_) {
  case ExprKind::BoolLit:
  case ExprKind::Not:
  case ExprKind::And:
  case ExprKind::Or:
    return true;
  default:
    return is_comparison(kind_);
  }
}

size_t Expr::size() const {
  size_t n = 1;
  for (const auto &a : args_)
    n += a->size();
  return n;
}

ExprPtr Expr::int_lit(int64_t v) {
  return std::make_shared<const Expr>(ExprKind::IntLit, v, std::string{},
                                      std::vector<ExprPtr>{});
}

ExprPtr Expr::bool_lit(bool b) {
  return std::make_shared<const Expr>(ExprKind::BoolLit, b ? 1 : 0, std::string{},
                                      std::vector<ExprPtr>{});
}

ExprPtr Expr::var(std::string name) {
  return std::make_shared<const Expr>(ExprKind::Var, 0, std::move(name),
                                      std::vector<ExprPtr>{});
}

ExprPtr Expr::neg(ExprPtr a) {
  if (a->kind() == ExprKind::IntLit && a->value() != INT64_MIN)
    return int_lit(-a->value());
  return std::make_shared<const Expr>(ExprKind::Neg, 0, std::string{},
                                      std::vector<ExprPtr>{std::move(a)});
}

ExprPtr Expr::binary(ExprKind k, ExprPtr a, ExprPtr b) {
  return std::make_shared<const Expr>(k, 0, std::string{},
                                      std::vector<ExprPtr>{std::move(a), std::move(b)});
}

ExprPtr Expr::lnot(ExprPtr a) {
  return std::make_shared<const Expr>(ExprKind::Not, 0, std::string{},
                                      std::vector<ExprPtr>{std::move(a)});
}

ExprPtr mk_and(ExprPtr a, ExprPtr b) {
  if (a->kind() == ExprKind::BoolLit)
    return a->value() ? b : a;
  if (b->kind() == ExprKind::BoolLit)
    return b->value() ? a : b;
  return Expr::binary(ExprKind::And, std::move(a), std::move(b));
}

ExprPtr mk_or(ExprPtr a, ExprPtr b) {
  if (a->kind() == ExprKind::BoolLit)
    return a->value() ? a : b;
  if (b->kind() == ExprKind::BoolLit)
    return b->value() ? b : a;
  return Expr::binary(ExprKind::Or, std::move(a), std::move(b));
}

ExprPtr mk_not(ExprPtr a) {
  if (a->kind() == ExprKind::BoolLit)
    return Expr::bool_lit(!a->value());
  if (a->kind() == ExprKind::Not)
    return a->arg(0);
  return Expr::lnot(std::move(a));
}

ExprPtr mk_implies(ExprPtr a, ExprPtr b) { return mk_or(mk_not(std::move(a)), std::move(b)); }

ExprPtr conjunction(const std::vector<ExprPtr> &parts) {
  ExprPtr out = Expr::bool_lit(true);
  for (const auto &p : parts)
    out = mk_and(out, p);
  return out;
}

ExprPtr disjunction(const std::vector<ExprPtr> &parts) {
  ExprPtr out = Expr::bool_lit(false);
  for (const auto &p : parts)
    out = mk_or(out, p);
  return out;
}

ExprPtr parse_expr(std::string_view text) {
  detail::TokenStream ts(detail::tokenize(text));
  ExprPtr e = detail::parse_expression(ts);
  if (!ts.at_end())
    ts.fail("unexpected trailing input '" + ts.peek().text + "'");
  return e;
}

ExprPtr parse_bool_expr(std::string_view text) {
  ExprPtr e = parse_expr(text);
  if (!e->is_bool())
    throw ParseError("expected a boolean expression", 1, 1);
  return e;
}

namespace {

int precedence(ExprKind k) {
  switch (k) {
  case ExprKind::Or:
    return 1;
  case ExprKind::And:
    return 2;
  case ExprKind::Eq:
  case ExprKind::Ne:
    return 3;
  case ExprKind::Lt:
  case ExprKind::Le:
  case ExprKind::Gt:
  case ExprKind::Ge:
    return 4;
  case ExprKind::Add:
  case ExprKind::Sub:
    return 5;
  case ExprKind::Mul:
  case ExprKind::Div:
  case ExprKind::Rem:
    return 6;
  case ExprKind::Neg:
  case ExprKind::Not:
    return 7;
  default:
    return 8;
  }
}

const char *op_text(ExprKind k) {
  switch (k) {
  case ExprKind::Add:
    return "+";
  case ExprKind::Sub:
    return "-";
  case ExprKind::Mul:
    return "*";
  case ExprKind::Div:
    return "/";
  case ExprKind::Rem:
    return "%";
  case ExprKind::Eq:
    return "==";
  case ExprKind::Ne:
    return "!=";
  case ExprKind::Lt:
    return "<";
  case ExprKind::Le:
    return "<=";
  case ExprKind::Gt:
    return ">";
  case ExprKind::Ge:
    return ">=";
  case ExprKind::And:
    return "&&";
  case ExprKind::Or:
    return "||";
  default:
    return "?";
  }
}

void print(std::ostream &os, const Expr &e, int min_prec) {
  int p = precedence(e.kind());
  bool parens = p < min_prec;
  if (e.kind() == ExprKind::IntLit && e.value() < 0 && min_prec >= 7)
    parens = true;
  if (parens)
    os << '(';
  switch (e.kind()) {
  case ExprKind::IntLit:
    os << e.value();
    break;
  case ExprKind::BoolLit:
    os << (e.value() ? "true" : "false");
    break;
  case ExprKind::Var:
    os << e.name();
    break;
  case ExprKind::Neg: {
    os << '-';
    const Expr &a = *e.arg(0);
    if (a.kind() == ExprKind::Neg || (a.kind() == ExprKind::IntLit && a.value() < 0)) {
      os << '(';
      print(os, a, 0);
      os << ')';
    } else {
      print(os, a, 7);
    }
    break;
  }
  case ExprKind::Not:
    os << '!';
    print(os, *e.arg(0), 7);
    break;
  default:
    print(os, *e.arg(0), p);
    os << ' ' << op_text(e.kind()) << ' ';
    print(os, *e.arg(1), p + 1);
    break;
  }
  if (parens)
    os << ')';
}

} // namespace

std::string to_string(const ExprPtr &e) {
  std::ostringstream os;
  print(os, *e, 0);
  return os.str();
}

bool equal(const ExprPtr &a, const ExprPtr &b) {
  if (a == b)
    return true;
  if (a->kind() != b->kind() || a->value() != b->value() || a->name() != b->name() ||
      a->args().size() != b->args().size())
    return false;
  for (size_t i = 0; i < a->args().size(); ++i)
    if (!equal(a->arg(i), b->arg(i)))
      return false;
  return true;
}

bool ExprLess::operator()(const ExprPtr &a, const ExprPtr &b) const {
  if (a == b)
    return false;
  if (a->kind() != b->kind())
    return a->kind() < b->kind();
  if (a->value() != b->value())
    return a->value() < b->value();
  if (a->name() != b->name())
    return a->name() < b->name();
  if (a->args().size() != b->args().size())
    return a->args().size() < b->args().size();
  for (size_t i = 0; i < a->args().size(); ++i) {
    if ((*this)(a->arg(i), b->arg(i)))
      return true;
    if ((*this)(b->arg(i), a->arg(i)))
      return false;
  }
  return false;
}

std::set<std::string> free_vars(const ExprPtr &e) {
  std::set<std::string> out;
  std::function<void(const Expr &)> walk = [&](const Expr &x) {
    if (x.kind() == ExprKind::Var)
      out.insert(x.name());
    for (const auto &a : x.args())
      walk(*a);
  };
  walk(*e);
  return out;
}

namespace {

ExprPtr rebuild(const ExprPtr &e, std::vector<ExprPtr> args) {
  bool same = true;
  for (size_t i = 0; i < args.size(); ++i)
    same = same && args[i] == e->arg(i);
  if (same)
    return e;
  switch (e->kind()) {
  case ExprKind::Neg:
    return Expr::neg(args[0]);
  case ExprKind::Not:
    return Expr::lnot(args[0]);
  default:
    return Expr::binary(e->kind(), args[0], args[1]);
  }
}

template <typename F> ExprPtr map_leaves(const ExprPtr &e, const F &f) {
  if (e->args().empty())
    return f(e);
  std::vector<ExprPtr> args;
  args.reserve(e->args().size());
  for (const auto &a : e->args())
    args.push_back(map_leaves(a, f));
  return rebuild(e, std::move(args));
}

} // namespace

ExprPtr substitute(const ExprPtr &e, const std::string &var, const ExprPtr &by) {
  return map_leaves(e, [&](const ExprPtr &leaf) {
    return leaf->kind() == ExprKind::Var && leaf->name() == var ? by : leaf;
  });
}

ExprPtr substitute(const ExprPtr &e, const std::map<std::string, ExprPtr> &by) {
  return map_leaves(e, [&](const ExprPtr &leaf) {
    if (leaf->kind() != ExprKind::Var)
      return leaf;
    auto it = by.find(leaf->name());
    return it == by.end() ? leaf : it->second;
  });
}

ExprPtr rename(const ExprPtr &e, const std::map<std::string, std::string> &names) {
  return map_leaves(e, [&](const ExprPtr &leaf) {
    if (leaf->kind() != ExprKind::Var)
      return leaf;
    auto it = names.find(leaf->name());
    return it == names.end() ? leaf : Expr::var(it->second);
  });
}

std::vector<ExprPtr> split_conjunctions(const ExprPtr &e) {
  std::vector<ExprPtr> out;
  std::function<void(const ExprPtr &, bool)> go = [&](const ExprPtr &x, bool pushed) {
    if (x->kind() == ExprKind::And) {
      go(x->arg(0), pushed);
      go(x->arg(1), pushed);
      return;
    }
    if (!pushed && x->kind() == ExprKind::Not && x->arg(0)->kind() == ExprKind::Or) {
      go(mk_not(x->arg(0)->arg(0)), true);
      go(mk_not(x->arg(0)->arg(1)), true);
      return;
    }
    if (x->kind() == ExprKind::BoolLit && x->value())
      return;
    for (const auto &y : out)
      if (equal(y, x))
        return;
    out.push_back(x);
  };
  go(e, false);
  if (out.empty())
    out.push_back(Expr::bool_lit(true));
  return out;
}

namespace {

std::optional<int64_t> fold_arith(ExprKind k, int64_t a, int64_t b) {
  int64_t r = 0;
  switch (k) {
  case ExprKind::Add:
    if (__builtin_add_overflow(a, b, &r))
      return std::nullopt;
    return r;
  case ExprKind::Sub:
    if (__builtin_sub_overflow(a, b, &r))
      return std::nullopt;
    return r;
  case ExprKind::Mul:
    if (__builtin_mul_overflow(a, b, &r))
      return std::nullopt;
    return r;
  case ExprKind::Div:
    if (b == 0 || (a == INT64_MIN && b == -1))
      return std::nullopt;
    return a / b;
  case ExprKind::Rem:
    if (b == 0 || (a == INT64_MIN && b == -1))
      return std::nullopt;
    return a % b;
  default:
    return std::nullopt;
  }
}

bool fold_cmp(ExprKind k, int64_t a, int64_t b) {
  switch (k) {
  case ExprKind::Eq:
    return a == b;
  case ExprKind::Ne:
    return a != b;
  case ExprKind::Lt:
    return a < b;
  case ExprKind::Le:
    return a <= b;
  case ExprKind::Gt:
    return a > b;
  default:
    return a >= b;
  }
}

bool is_int(const ExprPtr &e, int64_t v) {
  return e->kind() == ExprKind::IntLit && e->value() == v;
}

} // namespace

ExprPtr simplify(const ExprPtr &e) {
  if (e->args().empty())
    return e;
  std::vector<ExprPtr> args;
  for (const auto &a : e->args())
    args.push_back(simplify(a));
  const ExprKind k = e->kind();
  switch (k) {
  case ExprKind::Neg:
    return Expr::neg(args[0]);
  case ExprKind::Not:
    return mk_not(args[0]);
  case ExprKind::And:
    return mk_and(args[0], args[1]);
  case ExprKind::Or:
    return mk_or(args[0], args[1]);
  default:
    break;
  }
  const ExprPtr &a = args[0];
  const ExprPtr &b = args[1];
  bool lits = a->kind() == ExprKind::IntLit && b->kind() == ExprKind::IntLit;
  if (is_arith_binary(k)) {
    if (lits) {
      if (auto v = fold_arith(k, a->value(), b->value()))
        return Expr::int_lit(*v);
    }
    if ((k == ExprKind::Add || k == ExprKind::Sub) && is_int(b, 0))
      return a;
    if (k == ExprKind::Add && is_int(a, 0))
      return b;
    if (k == ExprKind::Mul && (is_int(a, 0) || is_int(b, 0)))
      return Expr::int_lit(0);
    if (k == ExprKind::Mul && is_int(b, 1))
      return a;
    if (k == ExprKind::Mul && is_int(a, 1))
      return b;
    return rebuild(e, std::move(args));
  }
  if (is_comparison(k)) {
    if (lits)
      return Expr::bool_lit(fold_cmp(k, a->value(), b->value()));
    if (equal(a, b))
      return Expr::bool_lit(k == ExprKind::Eq || k == ExprKind::Le || k == ExprKind::Ge);
  }
  return rebuild(e, std::move(args));
}

bool is_trivial(const ExprPtr &e) { return simplify(e)->kind() == ExprKind::BoolLit; }

std::vector<ExprPtr> atoms(const ExprPtr &e) {
  std::vector<ExprPtr> out;
  std::function<void(const ExprPtr &)> walk = [&](const ExprPtr &x) {
    if (is_comparison(x->kind())) {
      for (const auto &y : out)
        if (equal(x, y))
          return;
      out.push_back(x);
      return;
    }
    for (const auto &a : x->args())
      if (a->is_bool())
        walk(a);
  };
  walk(e);
  return out;
}

namespace {

struct Linear {
  std::map<std::string, int64_t> coef;
  int64_t constant = 0;
};

std::optional<Linear> linearize(const ExprPtr &e) {
  switch (e->kind()) {
  case ExprKind::IntLit:
    return Linear{{}, e->value()};
  case ExprKind::Var:
    return Linear{{{e->name(), 1}}, 0};
  case ExprKind::Neg: {
    auto a = linearize(e->arg(0));
    if (!a)
      return std::nullopt;
    for (auto &[v, c] : a->coef)
      c = -c;
    a->constant = -a->constant;
    return a;
  }
  case ExprKind::Add:
  case ExprKind::Sub: {
    auto a = linearize(e->arg(0));
    auto b = linearize(e->arg(1));
    if (!a || !b)
      return std::nullopt;
    int64_t sign = e->kind() == ExprKind::Add ? 1 : -1;
    for (const auto &[v, c] : b->coef)
      a->coef[v] += sign * c;
    a->constant += sign * b->constant;
    return a;
  }
  case ExprKind::Mul: {
    auto a = linearize(e->arg(0));
    auto b = linearize(e->arg(1));
    if (!a || !b)
      return std::nullopt;
    if (!a->coef.empty() && !b->coef.empty())
      return std::nullopt;
    if (!a->coef.empty())
      std::swap(a, b);
    // a is constant now.
    for (auto &[v, c] : b->coef)
      c *= a->constant;
    b->constant *= a->constant;
    return b;
  }
  default:
    return std::nullopt;
  }
}

ExprPtr term(const std::string &v, int64_t c) {
  if (c == 1)
    return Expr::var(v);
  return Expr::binary(ExprKind::Mul, Expr::int_lit(c), Expr::var(v));
}

ExprPtr from_linear(const Linear &l) {
  ExprPtr out;
  for (const auto &[v, c] : l.coef) {
    if (!out) {
      out = c < 0 && c != -1 ? term(v, c) : (c == -1 ? Expr::neg(Expr::var(v)) : term(v, c));
      continue;
    }
    if (c < 0)
      out = Expr::binary(ExprKind::Sub, out, term(v, -c));
    else
      out = Expr::binary(ExprKind::Add, out, term(v, c));
  }
  if (!out)
    return Expr::int_lit(l.constant);
  if (l.constant > 0)
    out = Expr::binary(ExprKind::Add, out, Expr::int_lit(l.constant));
  else if (l.constant < 0)
    out = Expr::binary(ExprKind::Sub, out, Expr::int_lit(-l.constant));
  return out;
}

} // namespace

ExprPtr normalize_linear(const ExprPtr &e) {
  if (!e->is_bool() && e->kind() != ExprKind::IntLit && e->kind() != ExprKind::Var) {
    if (auto l = linearize(e))
      return from_linear(*l);
  }
  if (e->args().empty())
    return e;
  std::vector<ExprPtr> args;
  for (const auto &a : e->args())
    args.push_back(normalize_linear(a));
  return rebuild(e, std::move(args));
}

} // namespace coopver
