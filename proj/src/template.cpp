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
#include <functional>
#include <random>
#include <set>

#include "coopver/helpers.hpp"
#include "coopver/semantics.hpp"

namespace coopver {

namespace {

// a·v <op> d printed with negative terms moved to the right-hand side
ExprPtr render(const std::vector<std::pair<int, std::string>> &terms, ExprKind op, int64_t d) {
  auto term = [](int c, const std::string &v) {
    ExprPtr x = Expr::var(v);
    int m = c < 0 ? -c : c;
    return m == 1 ? x : Expr::binary(ExprKind::Mul, Expr::int_lit(m), x);
  };
  ExprPtr lhs, rhs;
  for (const auto &[c, v] : terms) {
    ExprPtr &side = c > 0 ? lhs : rhs;
    side = side ? Expr::binary(ExprKind::Add, side, term(c, v)) : term(c, v);
  }
  if (!lhs)
    lhs = Expr::int_lit(0);
  if (!rhs)
    rhs = Expr::int_lit(d);
  else if (d > 0)
    rhs = Expr::binary(ExprKind::Add, rhs, Expr::int_lit(d));
  else if (d < 0)
    rhs = Expr::binary(ExprKind::Sub, rhs, Expr::int_lit(-d));
  return Expr::binary(op, lhs, rhs);
}

void collect_constants(const ExprPtr &e, std::set<int64_t> &out) {
  if (e->kind() == ExprKind::IntLit)
    out.insert(e->value());
  for (const auto &a : e->args())
    collect_constants(a, out);
}

std::vector<ExprPtr> candidates(const Cfa &cfa, const SafetyProperty &prop,
                                const TemplateOptions &opts) {
  std::vector<ExprPtr> out;
  auto add = [&](const ExprPtr &c) {
    for (const auto &x : out)
      if (equal(x, c))
        return;
    out.push_back(c);
  };
  for (const auto &a : atoms(prop.condition))
    add(a);
  for (const Edge &e : cfa.edges)
    if (e.op.kind == OpKind::Assume)
      for (const auto &a : atoms(e.op.expr))
        add(a);

  std::set<int64_t> consts{0};
  for (const Edge &e : cfa.edges)
    if (e.op.expr)
      collect_constants(e.op.expr, consts);
  std::vector<int64_t> ds(consts.begin(), consts.end());
  if (ds.size() > 4)
    ds.resize(4);

  const int nv = static_cast<int>(cfa.symbols.size());
  std::vector<int> coeffs;
  for (int c = opts.coeff_min; c <= opts.coeff_max; ++c)
    if (c != 0)
      coeffs.push_back(c);
  for (int arity = 1; arity <= std::min(opts.max_vars, nv); ++arity) {
    std::vector<int> pick(arity);
    std::function<void(int, int)> choose = [&](int pos, int from) {
      if (pos == arity) {
        std::vector<int> cs(arity, 0);
        std::function<void(int)> assign = [&](int i) {
          if (i == arity) {
            if (cs[0] < 0)
              return;
            std::vector<std::pair<int, std::string>> terms;
            for (int j = 0; j < arity; ++j)
              terms.push_back({cs[j], cfa.symbols[pick[j]].name});
            for (ExprKind op : {ExprKind::Eq, ExprKind::Ge, ExprKind::Le})
              for (int64_t d : ds) {
                ExprPtr c = render(terms, op, d);
                // unsigned x >= 0 holds by typing alone
                if (op == ExprKind::Ge && c->arg(1)->kind() == ExprKind::IntLit &&
                    c->arg(1)->value() == 0 && !is_signed_expr(*c->arg(0), cfa.symbols))
                  continue;
                add(c);
              }
            return;
          }
          for (int c : coeffs) {
            cs[i] = c;
            assign(i + 1);
          }
        };
        assign(0);
        return;
      }
      for (int v = from; v < nv; ++v) {
        pick[pos] = v;
        choose(pos + 1, v + 1);
      }
    };
    choose(0, 0);
  }
  return out;
}

// Loop-head states visited by random executions.
std::map<int, std::vector<State>> sample(const Cfa &cfa, const TemplateOptions &opts) {
  std::map<int, std::vector<State>> seen;
  std::mt19937_64 rng(opts.seed);
  Executor ex(cfa);
  for (int run = 0; run < opts.samples; ++run) {
    if (opts.cancel && opts.cancel->load())
      break;
    State s(cfa.symbols.size(), 0);
    int loc = cfa.initial;
    for (int step = 0; step < opts.max_steps; ++step) {
      if (cfa.is_loop_head[loc])
        seen[loc].push_back(s);
      std::vector<std::pair<int, State>> succ;
      for (int eid : cfa.out_edges[loc]) {
        auto n = ex.step(eid, s, rng() & cfa.symbols.mask());
        if (n)
          succ.push_back({cfa.edges[eid].dst, std::move(*n)});
      }
      if (succ.empty())
        break;
      auto &pick = succ[rng() % succ.size()];
      loc = pick.first;
      s = std::move(pick.second);
    }
  }
  return seen;
}

} // namespace

HelperResult template_guess_check(const Cfa &cfa, const SafetyProperty &prop,
                                  const TemplateOptions &opts) {
  auto t0 = std::chrono::steady_clock::now();
  HelperResult res;
  auto cands = candidates(cfa, prop, opts);
  auto states = sample(cfa, opts);
  for (int h : cfa.loop_heads) {
    const auto &obs = states[h];
    size_t kept = 0;
    for (const auto &c : cands) {
      if (kept >= opts.max_per_head)
        break;
      if (opts.cancel && opts.cancel->load()) {
        res.status = HelperStatus::Stopped;
        return res;
      }
      Evaluator ev(c, cfa.symbols);
      bool ok = true;
      for (const auto &s : obs) {
        auto v = ev(s, true);
        if (!v || *v == 0) {
          ok = false;
          break;
        }
      }
      if (ok) {
        res.invariants.push_back({h, c, "template"});
        ++kept;
      }
    }
  }
  res.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  res.status = HelperStatus::Completed;
  return res;
}

} // namespace coopver
