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

#include <algorithm>
#include <chrono>
#include <deque>
#include <optional>

#include "coopver/helpers.hpp"

namespace coopver {

namespace {

// Values are mathematical integers in the domain of a C type: unsigned
// values lie in [0, mask], signed ones in [-2^(w-1), 2^(w-1)-1].
struct Itv {
  int64_t lo, hi;
};

using Box = std::vector<Itv>;

struct Domain {
  const SymbolTable &sym;
  int64_t umax() const { return static_cast<int64_t>(sym.mask()); }
  int64_t smin() const { return -static_cast<int64_t>(bvsem::sign_bit(sym.mask())); }
  int64_t smax() const { return static_cast<int64_t>(bvsem::sign_bit(sym.mask())) - 1; }
  Itv top(bool is_signed) const { return is_signed ? Itv{smin(), smax()} : Itv{0, umax()}; }
  bool fits(Itv i, bool is_signed) const {
    Itv t = top(is_signed);
    return i.lo >= t.lo && i.hi <= t.hi;
  }
  // reinterprets an interval in another signedness; top when it straddles
  Itv convert(Itv i, bool is_signed) const {
    if (fits(i, is_signed))
      return i;
    // shift by a multiple of 2^w when the whole interval lands in range
    const int64_t m = umax() + 1;
    Itv t = top(is_signed);
    int64_t k = (i.lo >= t.lo) ? (i.lo - t.lo) / m : -((t.lo - i.lo + m - 1) / m);
    Itv shifted{i.lo - k * m, i.hi - k * m};
    return fits(shifted, is_signed) ? shifted : t;
  }
  bool var_signed(const std::string &n) const { return sym[*sym.find(n)].is_signed; }

  Itv literal(int64_t v, bool is_signed) const {
    uint64_t bits = sym.truncate(v);
    return is_signed ? Itv{sym.as_signed(bits), sym.as_signed(bits)}
                     : Itv{static_cast<int64_t>(bits), static_cast<int64_t>(bits)};
  }

  Itv eval(const ExprPtr &e, const Box &b) const {
    bool s = is_signed_expr(*e, sym);
    switch (e->kind()) {
    case ExprKind::IntLit:
      return literal(e->value(), s);
    case ExprKind::Var:
      return b[*sym.find(e->name())];
    case ExprKind::Neg: {
      Itv a = convert(eval(e->arg(0), b), s);
      return convert({-a.hi, -a.lo}, s);
    }
    case ExprKind::Add:
    case ExprKind::Sub:
    case ExprKind::Mul: {
      Itv a = convert(eval(e->arg(0), b), s);
      Itv c = convert(eval(e->arg(1), b), s);
      Itv r;
      if (e->kind() == ExprKind::Add)
        r = {a.lo + c.lo, a.hi + c.hi};
      else if (e->kind() == ExprKind::Sub)
        r = {a.lo - c.hi, a.hi - c.lo};
      else {
        int64_t p[] = {a.lo * c.lo, a.lo * c.hi, a.hi * c.lo, a.hi * c.hi};
        r = {*std::min_element(p, p + 4), *std::max_element(p, p + 4)};
      }
      return convert(r, s);
    }
    case ExprKind::Div: {
      Itv a = convert(eval(e->arg(0), b), s);
      Itv c = convert(eval(e->arg(1), b), s);
      if (!s && c.lo > 0)
        return {a.lo / c.hi, a.hi / c.lo};
      return top(s);
    }
    case ExprKind::Rem: {
      Itv a = convert(eval(e->arg(0), b), s);
      Itv c = convert(eval(e->arg(1), b), s);
      if (!s && c.lo > 0)
        return {0, std::min(a.hi, c.hi - 1)};
      return top(s);
    }
    default:
      if (e->is_bool())
        return {0, 1};
      return top(s);
    }
  }
};

std::optional<Box> meet_atom(const Domain &d, const ExprPtr &c, Box b);

ExprPtr negate(const ExprPtr &c) {
  switch (c->kind()) {
  case ExprKind::Not:
    return c->arg(0);
  case ExprKind::And:
    return Expr::binary(ExprKind::Or, negate(c->arg(0)), negate(c->arg(1)));
  case ExprKind::Or:
    return Expr::binary(ExprKind::And, negate(c->arg(0)), negate(c->arg(1)));
  case ExprKind::BoolLit:
    return Expr::bool_lit(!c->value());
  case ExprKind::Eq:
    return Expr::binary(ExprKind::Ne, c->arg(0), c->arg(1));
  case ExprKind::Ne:
    return Expr::binary(ExprKind::Eq, c->arg(0), c->arg(1));
  case ExprKind::Lt:
    return Expr::binary(ExprKind::Ge, c->arg(0), c->arg(1));
  case ExprKind::Le:
    return Expr::binary(ExprKind::Gt, c->arg(0), c->arg(1));
  case ExprKind::Gt:
    return Expr::binary(ExprKind::Le, c->arg(0), c->arg(1));
  case ExprKind::Ge:
    return Expr::binary(ExprKind::Lt, c->arg(0), c->arg(1));
  default:
    return Expr::lnot(c);
  }
}

std::optional<Box> join(const std::optional<Box> &a, const std::optional<Box> &b) {
  if (!a)
    return b;
  if (!b)
    return a;
  Box r = *a;
  for (size_t i = 0; i < r.size(); ++i)
    r[i] = {std::min(r[i].lo, (*b)[i].lo), std::max(r[i].hi, (*b)[i].hi)};
  return r;
}

std::optional<Box> assume(const Domain &d, const ExprPtr &c, Box b) {
  switch (c->kind()) {
  case ExprKind::BoolLit:
    if (!c->value())
      return std::nullopt;
    return b;
  case ExprKind::And: {
    auto l = assume(d, c->arg(0), b);
    if (!l)
      return std::nullopt;
    return assume(d, c->arg(1), *l);
  }
  case ExprKind::Or:
    return join(assume(d, c->arg(0), b), assume(d, c->arg(1), b));
  case ExprKind::Not:
    if (c->arg(0)->kind() != ExprKind::Not)
      return assume(d, negate(c->arg(0)), b);
    return assume(d, c->arg(0)->arg(0), b);
  default:
    if (is_comparison(c->kind()))
      return meet_atom(d, c, b);
    return b;
  }
}

// x op [lo,hi] for a variable operand; other shapes are left unrefined
std::optional<Box> meet_atom(const Domain &d, const ExprPtr &c, Box b) {
  bool s = is_signed_expr(*c->arg(0), d.sym) && is_signed_expr(*c->arg(1), d.sym);
  auto value = [&](const ExprPtr &e) -> std::optional<Itv> {
    bool es = is_signed_expr(*e, d.sym);
    Itv i = d.eval(e, b);
    if (es != s) {
      Itv t = d.top(s);
      i = d.convert(i, s);
      if (i.lo == t.lo && i.hi == t.hi)
        return std::nullopt;
    }
    return i;
  };
  auto refine = [&](const ExprPtr &x, ExprKind op, Itv other) -> bool {
    if (x->kind() != ExprKind::Var)
      return true;
    size_t v = *d.sym.find(x->name());
    Itv &cur = b[v];
    if (d.var_signed(x->name()) != s && !d.fits(cur, s))
      return true;
    switch (op) {
    case ExprKind::Eq:
      cur = {std::max(cur.lo, other.lo), std::min(cur.hi, other.hi)};
      break;
    case ExprKind::Ne:
      if (other.lo == other.hi) {
        if (cur.lo == other.lo)
          ++cur.lo;
        if (cur.hi == other.lo)
          --cur.hi;
      }
      break;
    case ExprKind::Lt:
      cur.hi = std::min(cur.hi, other.hi - 1);
      break;
    case ExprKind::Le:
      cur.hi = std::min(cur.hi, other.hi);
      break;
    case ExprKind::Gt:
      cur.lo = std::max(cur.lo, other.lo + 1);
      break;
    case ExprKind::Ge:
      cur.lo = std::max(cur.lo, other.lo);
      break;
    default:
      break;
    }
    return cur.lo <= cur.hi;
  };
  auto flip = [](ExprKind k) {
    switch (k) {
    case ExprKind::Lt:
      return ExprKind::Gt;
    case ExprKind::Le:
      return ExprKind::Ge;
    case ExprKind::Gt:
      return ExprKind::Lt;
    case ExprKind::Ge:
      return ExprKind::Le;
    default:
      return k;
    }
  };
  auto l = value(c->arg(0));
  auto r = value(c->arg(1));
  if (!l || !r)
    return b;
  if (!refine(c->arg(0), c->kind(), *r))
    return std::nullopt;
  l = value(c->arg(0));
  if (!l)
    return b;
  if (!refine(c->arg(1), flip(c->kind()), *l))
    return std::nullopt;
  return b;
}

std::optional<Box> post(const Domain &d, const Operation &op, const Box &b) {
  switch (op.kind) {
  case OpKind::Assume:
    return assume(d, op.expr, b);
  case OpKind::Assign: {
    Box r = b;
    bool vs = d.sym[op.var].is_signed;
    r[op.var] = d.convert(d.eval(op.expr, b), vs);
    return r;
  }
  case OpKind::Havoc: {
    Box r = b;
    r[op.var] = d.top(d.sym[op.var].is_signed);
    return r;
  }
  default:
    return b;
  }
}

ExprPtr describe(const Domain &d, const Box &b) {
  std::vector<ExprPtr> parts;
  for (size_t v = 0; v < b.size(); ++v) {
    const auto &var = d.sym[v];
    Itv t = d.top(var.is_signed);
    ExprPtr x = Expr::var(var.name);
    if (b[v].lo == b[v].hi) {
      parts.push_back(Expr::binary(ExprKind::Eq, x, Expr::int_lit(b[v].lo)));
      continue;
    }
    if (!var.is_signed || b[v].lo > t.lo)
      parts.push_back(Expr::binary(ExprKind::Ge, x, Expr::int_lit(b[v].lo)));
    if (b[v].hi < t.hi)
      parts.push_back(Expr::binary(ExprKind::Le, x, Expr::int_lit(b[v].hi)));
  }
  return conjunction(parts);
}

} // namespace

HelperResult interval_analysis(const Cfa &cfa, const IntervalOptions &opts) {
  auto t0 = std::chrono::steady_clock::now();
  Domain d{cfa.symbols};
  const size_t n = cfa.num_locations();
  std::vector<std::optional<Box>> at(n);
  std::vector<int> joins(n, 0);
  at[cfa.initial] = Box(cfa.symbols.size(), Itv{0, 0});
  HelperResult res;

  auto run = [&](bool widening) -> bool {
    std::deque<int> work{cfa.initial};
    std::vector<bool> queued(n, false);
    queued[cfa.initial] = true;
    for (size_t l = 0; l < n; ++l)
      if (at[l] && !queued[l]) {
        work.push_back(static_cast<int>(l));
        queued[l] = true;
      }
    while (!work.empty()) {
      if (opts.cancel && opts.cancel->load())
        return false;
      int l = work.front();
      work.pop_front();
      queued[l] = false;
      if (!at[l])
        continue;
      for (int eid : cfa.out_edges[l]) {
        const Edge &e = cfa.edges[eid];
        auto p = post(d, e.op, *at[l]);
        if (!p)
          continue;
        auto old = at[e.dst];
        auto joined = join(old, p);
        if (old && widening && cfa.is_loop_head[e.dst] && ++joins[e.dst] > opts.widen_after) {
          for (size_t v = 0; v < joined->size(); ++v) {
            Itv t = d.top(cfa.symbols[v].is_signed);
            if ((*joined)[v].lo < (*old)[v].lo)
              (*joined)[v].lo = t.lo;
            if ((*joined)[v].hi > (*old)[v].hi)
              (*joined)[v].hi = t.hi;
          }
        }
        bool changed = !old;
        if (old)
          for (size_t v = 0; v < joined->size(); ++v)
            changed |= (*joined)[v].lo != (*old)[v].lo || (*joined)[v].hi != (*old)[v].hi;
        if (changed) {
          at[e.dst] = joined;
          if (!queued[e.dst]) {
            queued[e.dst] = true;
            work.push_back(e.dst);
          }
        }
      }
    }
    return true;
  };

  bool ok = run(true);
  if (ok && opts.narrowing) {
    // one descending pass: recompute every location from its predecessors
    for (int round = 0; round < 2; ++round) {
      std::vector<std::optional<Box>> next(n);
      next[cfa.initial] = at[cfa.initial];
      for (const Edge &e : cfa.edges)
        if (at[e.src])
          next[e.dst] = join(next[e.dst], post(d, e.op, *at[e.src]));
      for (size_t l = 0; l < n; ++l)
        if (next[l] && at[l])
          for (size_t v = 0; v < next[l]->size(); ++v)
            (*next[l])[v] = {std::max((*next[l])[v].lo, (*at[l])[v].lo),
                             std::min((*next[l])[v].hi, (*at[l])[v].hi)};
      at = std::move(next);
    }
  }
  res.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!ok) {
    res.status = HelperStatus::Stopped;
    return res;
  }
  for (int h : cfa.loop_heads)
    if (at[h])
      res.invariants.push_back({h, describe(d, *at[h]), "interval"});
  res.status = HelperStatus::Completed;
  return res;
}

} // namespace coopver
