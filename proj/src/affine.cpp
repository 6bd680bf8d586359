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

#include <boost/multiprecision/cpp_int.hpp>

#include <chrono>
#include <deque>
#include <optional>

#include "coopver/helpers.hpp"

namespace coopver {

namespace {

using Q = boost::multiprecision::cpp_rational;
using Z = boost::multiprecision::cpp_int;
using Vec = std::vector<Q>;

// An affine subspace as a point plus spanning directions kept in reduced
// row echelon form. Arithmetic is exact over the rationals; since only
// ring operations are tracked, integer relations derived here also hold
// modulo 2^w.
struct Space {
  Vec point;
  std::vector<Vec> dirs;
};

void reduce(std::vector<Vec> &rows, size_t n) {
  size_t r = 0;
  for (size_t c = 0; c < n && r < rows.size(); ++c) {
    size_t piv = r;
    while (piv < rows.size() && rows[piv][c] == 0)
      ++piv;
    if (piv == rows.size())
      continue;
    std::swap(rows[r], rows[piv]);
    Q lead = rows[r][c];
    for (auto &x : rows[r])
      x /= lead;
    for (size_t i = 0; i < rows.size(); ++i)
      if (i != r && rows[i][c] != 0) {
        Q f = rows[i][c];
        for (size_t j = 0; j < n; ++j)
          rows[i][j] -= f * rows[r][j];
      }
    ++r;
  }
  rows.resize(r);
}

struct Linear {
  Vec coef;
  Q constant;
};

std::optional<Linear> linear(const ExprPtr &e, const SymbolTable &sym) {
  size_t n = sym.size();
  switch (e->kind()) {
  case ExprKind::IntLit:
    return Linear{Vec(n, 0), Q(e->value())};
  case ExprKind::Var: {
    Linear l{Vec(n, 0), 0};
    l.coef[*sym.find(e->name())] = 1;
    return l;
  }
  case ExprKind::Neg: {
    auto a = linear(e->arg(0), sym);
    if (!a)
      return std::nullopt;
    for (auto &c : a->coef)
      c = -c;
    a->constant = -a->constant;
    return a;
  }
  case ExprKind::Add:
  case ExprKind::Sub: {
    auto a = linear(e->arg(0), sym);
    auto b = linear(e->arg(1), sym);
    if (!a || !b)
      return std::nullopt;
    Q s = e->kind() == ExprKind::Add ? 1 : -1;
    for (size_t i = 0; i < n; ++i)
      a->coef[i] += s * b->coef[i];
    a->constant += s * b->constant;
    return a;
  }
  case ExprKind::Mul: {
    auto a = linear(e->arg(0), sym);
    auto b = linear(e->arg(1), sym);
    if (!a || !b)
      return std::nullopt;
    auto is_const = [](const Linear &l) {
      for (const auto &c : l.coef)
        if (c != 0)
          return false;
      return true;
    };
    if (!is_const(*a) && !is_const(*b))
      return std::nullopt;
    if (!is_const(*a))
      std::swap(a, b);
    Q k = a->constant;
    for (auto &c : b->coef)
      c *= k;
    b->constant *= k;
    return b;
  }
  default:
    return std::nullopt;
  }
}

Space join(const Space &a, const Space &b, size_t n) {
  Space r{a.point, a.dirs};
  for (const auto &d : b.dirs)
    r.dirs.push_back(d);
  Vec diff(n);
  for (size_t i = 0; i < n; ++i)
    diff[i] = b.point[i] - a.point[i];
  r.dirs.push_back(diff);
  reduce(r.dirs, n);
  return r;
}

bool same(const Space &a, const Space &b, size_t n) {
  if (a.dirs != b.dirs)
    return false;
  // points may differ inside the space: check b.point - a.point is spanned
  std::vector<Vec> rows = a.dirs;
  Vec diff(n);
  for (size_t i = 0; i < n; ++i)
    diff[i] = b.point[i] - a.point[i];
  rows.push_back(diff);
  reduce(rows, n);
  return rows.size() == a.dirs.size();
}

std::optional<Space> post(const Operation &op, const Space &s, const SymbolTable &sym) {
  const size_t n = sym.size();
  Space r = s;
  auto unit = [&](int v) {
    Vec u(n, 0);
    u[v] = 1;
    return u;
  };
  switch (op.kind) {
  case OpKind::Assume:
    if (op.expr->kind() == ExprKind::BoolLit && !op.expr->value())
      return std::nullopt;
    return r;
  case OpKind::Havoc:
    r.dirs.push_back(unit(op.var));
    reduce(r.dirs, n);
    return r;
  case OpKind::Assign: {
    auto l = linear(op.expr, sym);
    if (!l) {
      r.dirs.push_back(unit(op.var));
      reduce(r.dirs, n);
      return r;
    }
    Q v = l->constant;
    for (size_t i = 0; i < n; ++i)
      v += l->coef[i] * s.point[i];
    r.point[op.var] = v;
    for (auto &d : r.dirs) {
      Q x = 0;
      for (size_t i = 0; i < n; ++i)
        x += l->coef[i] * d[i];
      d[op.var] = x;
    }
    reduce(r.dirs, n);
    return r;
  }
  default:
    return r;
  }
}

// Equations a·x = b satisfied by the whole space, normalized to coprime
// integers with a positive leading coefficient.
std::vector<ExprPtr> equations(const Space &s, const SymbolTable &sym) {
  const size_t n = sym.size();
  std::vector<size_t> pivots;
  for (const auto &row : s.dirs)
    for (size_t c = 0; c < n; ++c)
      if (row[c] != 0) {
        pivots.push_back(c);
        break;
      }
  std::vector<ExprPtr> out;
  std::vector<Vec> basis;
  for (size_t f = 0; f < n; ++f) {
    if (std::find(pivots.begin(), pivots.end(), f) != pivots.end())
      continue;
    Vec a(n, 0);
    a[f] = 1;
    for (size_t r = 0; r < s.dirs.size(); ++r)
      a[pivots[r]] = -s.dirs[r][f];
    basis.push_back(a);
  }
  // prefer equations led by early variables
  reduce(basis, n);
  for (auto &a : basis) {
    Q b = 0;
    for (size_t i = 0; i < n; ++i)
      b += a[i] * s.point[i];
    Z l = 1;
    for (const auto &c : a)
      l = boost::multiprecision::lcm(l, boost::multiprecision::denominator(c));
    l = boost::multiprecision::lcm(l, boost::multiprecision::denominator(b));
    std::vector<Z> ints;
    Z g = 0;
    for (const auto &c : a) {
      Z v = boost::multiprecision::numerator(c * Q(l));
      ints.push_back(v);
      g = boost::multiprecision::gcd(g, v);
    }
    Z bi = boost::multiprecision::numerator(b * Q(l));
    g = boost::multiprecision::gcd(g, bi);
    if (g == 0)
      continue;
    Z sign = 1;
    for (const auto &v : ints)
      if (v != 0) {
        sign = v < 0 ? -1 : 1;
        break;
      }
    ExprPtr lhs;
    for (size_t i = 0; i < n; ++i) {
      Z c = ints[i] / g * sign;
      if (c == 0)
        continue;
      ExprPtr x = Expr::var(sym[i].name);
      Z mag = c < 0 ? Z(-c) : c;
      ExprPtr term = mag == 1 ? x : Expr::binary(ExprKind::Mul, Expr::int_lit(mag.convert_to<int64_t>()), x);
      if (!lhs)
        lhs = c < 0 ? Expr::neg(term) : term;
      else
        lhs = Expr::binary(c < 0 ? ExprKind::Sub : ExprKind::Add, lhs, term);
    }
    if (!lhs)
      continue;
    Z rhs = bi / g * sign;
    out.push_back(Expr::binary(ExprKind::Eq, lhs, Expr::int_lit(rhs.convert_to<int64_t>())));
  }
  return out;
}

} // namespace

HelperResult affine_equality_analysis(const Cfa &cfa, const AffineOptions &opts) {
  auto t0 = std::chrono::steady_clock::now();
  const size_t nv = cfa.symbols.size();
  const size_t nl = cfa.num_locations();
  std::vector<std::optional<Space>> at(nl);
  at[cfa.initial] = Space{Vec(nv, 0), {}};
  std::deque<int> work{cfa.initial};
  std::vector<bool> queued(nl, false);
  queued[cfa.initial] = true;
  HelperResult res;
  while (!work.empty()) {
    if (opts.cancel && opts.cancel->load()) {
      res.status = HelperStatus::Stopped;
      return res;
    }
    int l = work.front();
    work.pop_front();
    queued[l] = false;
    for (int eid : cfa.out_edges[l]) {
      const Edge &e = cfa.edges[eid];
      auto p = post(e.op, *at[l], cfa.symbols);
      if (!p)
        continue;
      auto &dst = at[e.dst];
      Space next = dst ? join(*dst, *p, nv) : *p;
      if (dst && same(*dst, next, nv))
        continue;
      dst = std::move(next);
      if (!queued[e.dst]) {
        queued[e.dst] = true;
        work.push_back(e.dst);
      }
    }
  }
  for (int h : cfa.loop_heads) {
    if (!at[h])
      continue;
    auto eqs = equations(*at[h], cfa.symbols);
    if (!eqs.empty())
      res.invariants.push_back({h, conjunction(eqs), "affine"});
  }
  res.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  res.status = HelperStatus::Completed;
  return res;
}

} // namespace coopver
