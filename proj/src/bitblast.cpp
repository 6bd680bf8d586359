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

#include "coopver/bitblast.hpp"

#include <algorithm>

namespace coopver {

namespace {

constexpr int kAnd = 0;
constexpr int kXor = 1;

} // namespace

BitBlaster::BitBlaster(SatSolver &solver, const SymbolTable &symbols)
    : solver_(solver), symbols_(symbols) {}

Lit BitBlaster::gate(int op, Lit a, Lit b) {
  if (b < a)
    std::swap(a, b);
  auto key = std::make_tuple(op, a.x, b.x);
  auto it = cache_.find(key);
  if (it != cache_.end())
    return it->second;
  Lit o = fresh_lit();
  if (op == kAnd) {
    solver_.add_clause({~o, a});
    solver_.add_clause({~o, b});
    solver_.add_clause({o, ~a, ~b});
  } else {
    solver_.add_clause({~o, a, b});
    solver_.add_clause({~o, ~a, ~b});
    solver_.add_clause({o, ~a, b});
    solver_.add_clause({o, a, ~b});
  }
  cache_.emplace(key, o);
  return o;
}

Lit BitBlaster::mk_and(Lit a, Lit b) {
  if (a == lit_false() || b == lit_false() || a == ~b)
    return lit_false();
  if (a == lit_true() || a == b)
    return b;
  if (b == lit_true())
    return a;
  return gate(kAnd, a, b);
}

Lit BitBlaster::mk_xor(Lit a, Lit b) {
  if (a == lit_false())
    return b;
  if (b == lit_false())
    return a;
  if (a == lit_true())
    return ~b;
  if (b == lit_true())
    return ~a;
  if (a == b)
    return lit_false();
  if (a == ~b)
    return lit_true();
  // Normalize polarity so that hashing sees positive inputs.
  bool flip = a.negated() != b.negated();
  Lit pa = a.negated() ? ~a : a;
  Lit pb = b.negated() ? ~b : b;
  Lit o = gate(kXor, pa, pb);
  return flip ? ~o : o;
}

Lit BitBlaster::mk_ite(Lit c, Lit t, Lit e) {
  if (c == lit_true() || t == e)
    return t;
  if (c == lit_false())
    return e;
  if (t == lit_true())
    return mk_or(c, e);
  if (t == lit_false())
    return mk_and(~c, e);
  if (e == lit_true())
    return mk_or(~c, t);
  if (e == lit_false())
    return mk_and(c, t);
  auto key = std::make_tuple(c.x, t.x, e.x);
  auto it = ite_cache_.find(key);
  if (it != ite_cache_.end())
    return it->second;
  Lit o = fresh_lit();
  solver_.add_clause({~c, ~t, o});
  solver_.add_clause({~c, t, ~o});
  solver_.add_clause({c, ~e, o});
  solver_.add_clause({c, e, ~o});
  solver_.add_clause({~t, ~e, o});
  solver_.add_clause({t, e, ~o});
  ite_cache_.emplace(key, o);
  return o;
}

Lit BitBlaster::and_all(const std::vector<Lit> &ls) {
  Lit acc = lit_true();
  for (Lit l : ls)
    acc = mk_and(acc, l);
  return acc;
}

Lit BitBlaster::or_all(const std::vector<Lit> &ls) {
  Lit acc = lit_false();
  for (Lit l : ls)
    acc = mk_or(acc, l);
  return acc;
}

Bits BitBlaster::fresh() {
  Bits b(width());
  for (auto &l : b)
    l = fresh_lit();
  return b;
}

Bits BitBlaster::constant(uint64_t v) {
  Bits b(width());
  for (int i = 0; i < width(); ++i)
    b[i] = (v >> i) & 1 ? lit_true() : lit_false();
  return b;
}

Bits BitBlaster::ite(Lit c, const Bits &t, const Bits &e) {
  Bits o(t.size());
  for (size_t i = 0; i < t.size(); ++i)
    o[i] = mk_ite(c, t[i], e[i]);
  return o;
}

Bits BitBlaster::add(const Bits &a, const Bits &b) {
  Bits o(a.size());
  Lit carry = lit_false();
  for (size_t i = 0; i < a.size(); ++i) {
    Lit x = mk_xor(a[i], b[i]);
    o[i] = mk_xor(x, carry);
    if (i + 1 < a.size())
      carry = mk_or(mk_and(a[i], b[i]), mk_and(carry, x));
  }
  return o;
}

Bits BitBlaster::neg(const Bits &a) {
  Bits inv(a.size());
  for (size_t i = 0; i < a.size(); ++i)
    inv[i] = ~a[i];
  Bits one(a.size(), lit_false());
  one[0] = lit_true();
  return add(inv, one);
}

Bits BitBlaster::sub(const Bits &a, const Bits &b) {
  // a + ~b + 1
  Bits o(a.size());
  Lit carry = lit_true();
  for (size_t i = 0; i < a.size(); ++i) {
    Lit nb = ~b[i];
    Lit x = mk_xor(a[i], nb);
    o[i] = mk_xor(x, carry);
    if (i + 1 < a.size())
      carry = mk_or(mk_and(a[i], nb), mk_and(carry, x));
  }
  return o;
}

Bits BitBlaster::mul(const Bits &a, const Bits &b) {
  const size_t w = a.size();
  Bits acc(w, lit_false());
  for (size_t i = 0; i < w; ++i) {
    if (b[i] == lit_false())
      continue;
    Bits partial(w, lit_false());
    for (size_t j = i; j < w; ++j)
      partial[j] = mk_and(a[j - i], b[i]);
    acc = add(acc, partial);
  }
  return acc;
}

void BitBlaster::udivrem(const Bits &a, const Bits &b, Bits &q, Bits &r) {
  const size_t w = a.size();
  Bits bx = b;
  bx.push_back(lit_false());
  Bits rem(w + 1, lit_false());
  q.assign(w, lit_false());
  for (size_t step = 0; step < w; ++step) {
    size_t i = w - 1 - step;
    Bits shifted(w + 1);
    shifted[0] = a[i];
    for (size_t k = 1; k <= w; ++k)
      shifted[k] = rem[k - 1];
    Lit ge = ~ult(shifted, bx);
    q[i] = ge;
    rem = ite(ge, sub(shifted, bx), shifted);
  }
  r.assign(rem.begin(), rem.begin() + static_cast<long>(w));
}

Bits BitBlaster::sdiv(const Bits &a, const Bits &b) {
  Lit sa = a.back(), sb = b.back();
  Bits ma = ite(sa, neg(a), a);
  Bits mb = ite(sb, neg(b), b);
  Bits q, r;
  udivrem(ma, mb, q, r);
  return ite(mk_xor(sa, sb), neg(q), q);
}

Bits BitBlaster::srem(const Bits &a, const Bits &b) {
  Lit sa = a.back(), sb = b.back();
  Bits ma = ite(sa, neg(a), a);
  Bits mb = ite(sb, neg(b), b);
  Bits q, r;
  udivrem(ma, mb, q, r);
  return ite(sa, neg(r), r);
}

Lit BitBlaster::eq(const Bits &a, const Bits &b) {
  std::vector<Lit> same(a.size());
  for (size_t i = 0; i < a.size(); ++i)
    same[i] = ~mk_xor(a[i], b[i]);
  return and_all(same);
}

Lit BitBlaster::ult(const Bits &a, const Bits &b) {
  Lit lt = lit_false();
  for (size_t i = 0; i < a.size(); ++i) {
    Lit here = mk_and(~a[i], b[i]);
    Lit same = ~mk_xor(a[i], b[i]);
    lt = mk_or(here, mk_and(same, lt));
  }
  return lt;
}

Lit BitBlaster::slt(const Bits &a, const Bits &b) {
  Bits fa = a, fb = b;
  fa.back() = ~fa.back();
  fb.back() = ~fb.back();
  return ult(fa, fb);
}

Bits BitBlaster::arith(const ExprPtr &e, const std::vector<Bits> &env,
                       std::vector<Lit> *defined) {
  switch (e->kind()) {
  case ExprKind::IntLit:
    return constant(symbols_.truncate(e->value()));
  case ExprKind::Var: {
    auto id = symbols_.find(e->name());
    if (!id)
      throw Error("use of undeclared variable '" + e->name() + "'");
    return env.at(*id);
  }
  case ExprKind::Neg:
    return neg(arith(e->arg(0), env, defined));
  case ExprKind::Add:
    return add(arith(e->arg(0), env, defined), arith(e->arg(1), env, defined));
  case ExprKind::Sub:
    return sub(arith(e->arg(0), env, defined), arith(e->arg(1), env, defined));
  case ExprKind::Mul:
    return mul(arith(e->arg(0), env, defined), arith(e->arg(1), env, defined));
  case ExprKind::Div:
  case ExprKind::Rem: {
    Bits a = arith(e->arg(0), env, defined);
    Bits b = arith(e->arg(1), env, defined);
    if (defined)
      defined->push_back(~eq(b, constant(0)));
    if (is_signed_expr(*e, symbols_))
      return e->kind() == ExprKind::Div ? sdiv(a, b) : srem(a, b);
    Bits q, r;
    udivrem(a, b, q, r);
    return e->kind() == ExprKind::Div ? q : r;
  }
  default:
    throw Error("expected an arithmetic expression, got '" + to_string(e) + "'");
  }
}

Lit BitBlaster::boolean(const ExprPtr &e, const std::vector<Bits> &env,
                        std::vector<Lit> *defined) {
  switch (e->kind()) {
  case ExprKind::BoolLit:
    return e->value() ? lit_true() : lit_false();
  case ExprKind::Not:
    return ~boolean(e->arg(0), env, defined);
  case ExprKind::And:
    return mk_and(boolean(e->arg(0), env, defined), boolean(e->arg(1), env, defined));
  case ExprKind::Or:
    return mk_or(boolean(e->arg(0), env, defined), boolean(e->arg(1), env, defined));
  default:
    break;
  }
  if (!is_comparison(e->kind()))
    throw Error("expected a boolean expression, got '" + to_string(e) + "'");
  Bits a = arith(e->arg(0), env, defined);
  Bits b = arith(e->arg(1), env, defined);
  bool sgn = is_signed_expr(*e->arg(0), symbols_) && is_signed_expr(*e->arg(1), symbols_);
  auto lt = [&](const Bits &x, const Bits &y) { return sgn ? slt(x, y) : ult(x, y); };
  switch (e->kind()) {
  case ExprKind::Eq:
    return eq(a, b);
  case ExprKind::Ne:
    return ~eq(a, b);
  case ExprKind::Lt:
    return lt(a, b);
  case ExprKind::Le:
    return ~lt(b, a);
  case ExprKind::Gt:
    return lt(b, a);
  case ExprKind::Ge:
    return ~lt(a, b);
  default:
    throw Error("unsupported comparison");
  }
}

uint64_t BitBlaster::model_value(const Bits &b) const {
  uint64_t v = 0;
  for (size_t i = 0; i < b.size(); ++i)
    if (solver_.model(b[i]))
      v |= uint64_t{1} << i;
  return v;
}

} // namespace coopver
