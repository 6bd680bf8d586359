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

#include "coopver/predabs.hpp"

#include <deque>
#include <set>

#include "coopver/kinduction.hpp"
#include "coopver/unroll.hpp"
#include "coopver/validity.hpp"

namespace coopver {

int Precision::add(int loc, const ExprPtr &e) {
  int added = 0;
  for (const auto &c : split_conjunctions(e)) {
    ExprPtr p = simplify(c);
    if (is_trivial(p) || contains(loc, p))
      continue;
    predicates[loc].push_back(p);
    ++added;
  }
  return added;
}

size_t Precision::size() const {
  size_t n = 0;
  for (const auto &[l, ps] : predicates)
    n += ps.size();
  return n;
}

bool Precision::contains(int loc, const ExprPtr &p) const {
  auto it = predicates.find(loc);
  if (it == predicates.end())
    return false;
  for (const auto &q : it->second)
    if (equal(p, q))
      return true;
  return false;
}

ExprPtr Region::formula() const {
  std::vector<ExprPtr> parts;
  for (const auto &[p, pos] : literals)
    parts.push_back(pos ? p : mk_not(p));
  return conjunction(parts);
}

bool Region::within(const Region &other) const {
  for (const auto &[q, qpos] : other.literals) {
    bool found = false;
    for (const auto &[p, pos] : literals)
      if (pos == qpos && equal(p, q)) {
        found = true;
        break;
      }
    if (!found)
      return false;
  }
  return true;
}

namespace {

ExprPtr definedness(const ExprPtr &e) {
  std::vector<ExprPtr> parts;
  std::function<void(const ExprPtr &)> walk = [&](const ExprPtr &x) {
    for (const auto &a : x->args())
      walk(a);
    if (x->kind() == ExprKind::Div || x->kind() == ExprKind::Rem)
      parts.push_back(Expr::binary(ExprKind::Ne, x->arg(1), Expr::int_lit(0)));
  };
  walk(e);
  return conjunction(parts);
}

} // namespace

Region abstract_post(const SymbolTable &symbols, const ExprPtr &region,
                     const std::vector<Operation> &ops, const std::vector<ExprPtr> &preds) {
  SymbolTable sym = symbols;
  ExprPtr pre = region ? region : Expr::bool_lit(true);
  // weakest precondition of q through ops; havoc targets become fresh variables
  int fresh_count = 0;
  auto wp = [&](ExprPtr q) {
    for (size_t i = ops.size(); i-- > 0;) {
      const Operation &op = ops[i];
      switch (op.kind) {
      case OpKind::Assume:
        q = mk_implies(op.expr, q);
        break;
      case OpKind::Assign:
        q = mk_implies(definedness(op.expr), substitute(q, op.name, op.expr));
        break;
      case OpKind::Havoc: {
        std::string fresh = op.name + "#" + std::to_string(fresh_count++);
        while (sym.contains(fresh))
          fresh += "'";
        sym.add(fresh, symbols[op.var].is_signed);
        q = substitute(q, op.name, Expr::var(fresh));
        break;
      }
      default:
        break;
      }
    }
    return q;
  };
  Region out;
  for (const auto &p : preds) {
    if (valid(mk_implies(pre, wp(p)), sym).status == Validity::Valid)
      out.literals.push_back({p, true});
    else if (valid(mk_implies(pre, wp(mk_not(p))), sym).status == Validity::Valid)
      out.literals.push_back({p, false});
  }
  return out;
}

Region abstract_post(const SymbolTable &symbols, const ExprPtr &region, const Operation &op,
                     const std::vector<ExprPtr> &preds) {
  return abstract_post(symbols, region, std::vector<Operation>{op}, preds);
}

Refinement cegar_refine(const Cfa &cfa, const SafetyProperty &prop, const std::vector<int> &path,
                        const Precision &prec, int64_t conflict_budget) {
  Refinement r;
  {
    SatSolver solver;
    BitBlaster bb(solver, cfa.symbols);
    std::vector<Bits> state(cfa.symbols.size(), bb.constant(0));
    std::vector<Lit> conds;
    std::vector<std::optional<Bits>> havocs;
    for (int eid : path) {
      const Edge &e = cfa.edges[eid];
      std::optional<Bits> h;
      switch (e.op.kind) {
      case OpKind::Assume:
        conds.push_back(bb.boolean(e.op.expr, state, &conds));
        break;
      case OpKind::Assign:
        state[e.op.var] = bb.arith(e.op.expr, state, &conds);
        break;
      case OpKind::Havoc:
        h = bb.fresh();
        state[e.op.var] = *h;
        break;
      default:
        break;
      }
      havocs.push_back(h);
    }
    conds.push_back(~bb.boolean(prop.condition, state, &conds));
    for (Lit c : conds)
      solver.add_clause({c});
    auto res = solver.solve({}, conflict_budget);
    if (res == SatSolver::Result::Unknown)
      return r;
    if (res == SatSolver::Result::Sat) {
      std::vector<std::pair<int, uint64_t>> steps;
      for (size_t i = 0; i < path.size(); ++i)
        steps.push_back({path[i], havocs[i] ? bb.model_value(*havocs[i]) : 0});
      r.counterexample = concretize(cfa, prop, steps);
      if (!r.counterexample)
        throw Error("internal: feasible abstract path does not replay");
      return r;
    }
  }
  ExprPtr w = mk_not(prop.condition);
  for (size_t i = path.size(); i-- > 0;) {
    const Edge &e = cfa.edges[path[i]];
    switch (e.op.kind) {
    case OpKind::Assume:
      w = mk_and(e.op.expr, w);
      break;
    case OpKind::Assign:
      w = substitute(w, e.op.name, e.op.expr);
      break;
    default:
      break;
    }
    if (!cfa.is_loop_head[e.src])
      continue;
    for (const auto &a : atoms(w)) {
      ExprPtr p = simplify(normalize_linear(a));
      if (!is_trivial(p) && !prec.contains(e.src, p))
        r.predicates.add(e.src, p);
    }
  }
  return r;
}

std::vector<std::string> inject_predicates(Precision &prec, const std::vector<Witness> &witnesses,
                                           const Cfa &cfa) {
  std::vector<std::string> diags;
  for (const auto &w : witnesses) {
    try {
      auto m = match_to_cfa(w, cfa);
      for (const auto &d : m.diagnostics)
        diags.push_back(d);
      for (const auto &li : m.invariants)
        prec.add(li.loop_head, li.invariant);
    } catch (const Error &e) {
      diags.push_back(std::string("witness skipped: ") + e.what());
    }
  }
  return diags;
}

Precision PredAbsMaster::precision() const {
  std::lock_guard<std::mutex> g(prec_mu_);
  return prec_;
}

namespace {

struct ArgNode {
  int loc;
  bool concrete; // the all-zero initial state
  Region region;
  int parent;
  std::vector<int> block; // edges from the parent
  std::vector<int> children;
  int covered_by = -1;
  bool alive = true;
  bool expanded = false;
};

} // namespace

VerifierVerdict PredAbsMaster::do_run(const Cfa &cfa, const SafetyProperty &prop) {
  {
    std::lock_guard<std::mutex> g(prec_mu_);
    prec_ = initial_;
  }
  std::vector<ArgNode> arg;
  std::deque<int> work;
  arg.push_back({cfa.initial, true, {}, -1, {}, {}, -1, true, false});
  work.push_back(0);
  int refinements = 0;
  const int64_t budget = config().conflict_budget;

  auto kill = [&](int root) {
    std::vector<int> stack{root};
    while (!stack.empty()) {
      int n = stack.back();
      stack.pop_back();
      if (!arg[n].alive)
        continue;
      arg[n].alive = false;
      for (int c : arg[n].children)
        stack.push_back(c);
    }
    for (size_t i = 0; i < arg.size(); ++i)
      if (arg[i].alive && arg[i].covered_by >= 0 && !arg[arg[i].covered_by].alive) {
        arg[i].covered_by = -1;
        work.push_back(static_cast<int>(i));
      }
  };
  auto reexpand = [&](int n) {
    for (int c : arg[n].children)
      kill(c);
    arg[n].children.clear();
    arg[n].expanded = false;
    work.push_back(n);
  };
  // drops abstract states at heads whose precision grew
  auto invalidate = [&](const std::set<int> &heads) {
    std::set<int> parents;
    for (size_t i = 1; i < arg.size(); ++i)
      if (arg[i].alive && heads.count(arg[i].loc) && arg[i].parent >= 0)
        parents.insert(arg[i].parent);
    for (int p : parents)
      if (arg[p].alive)
        reexpand(p);
  };
  std::vector<LocatedInvariant> validated;
  KindOptions vopts;
  vopts.conflict_budget = budget;
  vopts.interrupt = [this] { return interrupted(); };
  auto absorb = [&]() {
    auto ws = drain_inbox();
    if (ws.empty())
      return false;
    Precision before = precision();
    Precision after = before;
    if (!config().validate_injections) {
      for (const auto &d : inject_predicates(after, ws, cfa))
        note("witness: " + d);
    } else {
      std::vector<LocatedInvariant> candidates;
      for (const auto &w : ws) {
        try {
          MatchOptions mo;
          mo.source = w.metadata.producer.empty() ? "witness" : w.metadata.producer;
          auto m = match_to_cfa(w, cfa, mo);
          for (const auto &d : m.diagnostics)
            note("witness: " + d);
          candidates.insert(candidates.end(), m.invariants.begin(), m.invariants.end());
        } catch (const Error &e) {
          note(std::string("witness: witness skipped: ") + e.what());
        }
      }
      screen_invariants(
          cfa, candidates, validated, vopts,
          [&](const LocatedInvariant &li) { after.add(li.loop_head, li.invariant); },
          [&](const std::string &line) { note(line); });
    }
    std::set<int> heads;
    for (const auto &[h, ps] : after.predicates)
      if (ps.size() != (before.predicates.count(h) ? before.predicates.at(h).size() : 0))
        heads.insert(h);
    {
      std::lock_guard<std::mutex> g(prec_mu_);
      prec_ = after;
    }
    note("inject predicates=" + std::to_string(after.size() - before.size()));
    invalidate(heads);
    return !heads.empty();
  };
  auto path_to = [&](int n) {
    std::vector<int> edges;
    std::vector<int> chain;
    for (int m = n; m >= 0; m = arg[m].parent)
      chain.push_back(m);
    for (auto it = chain.rbegin(); it != chain.rend(); ++it)
      edges.insert(edges.end(), arg[*it].block.begin(), arg[*it].block.end());
    return edges;
  };
  // waits for injected predicates when the analysis cannot progress alone
  auto stall = [&](const std::string &why) -> std::optional<VerifierVerdict> {
    note("status=stalled reason=" + why);
    for (;;) {
      if (interrupted())
        return halted();
      if (inbox_exhausted()) {
        VerifierVerdict v;
        v.detail = why;
        return v;
      }
      wait_inbox(0.05);
      if (absorb())
        return std::nullopt;
    }
  };

  absorb();
  for (;;) {
    if (interrupted())
      return halted();
    absorb();
    if (work.empty())
      break;
    int n = work.front();
    work.pop_front();
    if (!arg[n].alive || arg[n].covered_by >= 0 || arg[n].expanded)
      continue;

    Precision prec = precision();
    SatSolver solver;
    solver.set_interrupt([this] { return interrupted(); });
    BitBlaster bb(solver, cfa.symbols);
    Unrolling u(cfa, bb, 0, 1);
    if (arg[n].concrete)
      u.start_initial();
    else
      u.start_at(arg[n].loc, arg[n].region.formula());
    u.build();

    // abstract error within this block
    std::vector<Lit> bad;
    std::vector<int> where;
    if (auto v = u.find(prop.location, 0)) {
      bad.push_back(u.violation(*v, prop.condition));
      where.push_back(*v);
    }
    Lit any = bb.or_all(bad);
    auto res = any == bb.lit_false() ? SatSolver::Result::Unsat : solver.solve({any}, budget);
    if (res == SatSolver::Result::Unknown) {
      if (interrupted())
        return halted();
      VerifierVerdict v;
      v.detail = "abstract error check exceeded the solver budget";
      return v;
    }
    if (res == SatSolver::Result::Sat) {
      std::vector<int> path = path_to(n);
      for (auto [eid, hv] : u.trace(where[0]))
        path.push_back(eid);
      Refinement r = cegar_refine(cfa, prop, path, prec, budget);
      if (r.counterexample) {
        note("refinement=" + std::to_string(refinements) + " status=counterexample");
        VerifierVerdict v;
        v.verdict = Verdict::False;
        v.counterexample = std::move(r.counterexample);
        v.detail = "feasible error path of " + std::to_string(path.size()) + " edges";
        return v;
      }
      work.push_front(n);
      if (r.predicates.size() == 0 || refinements >= config().bound_cap) {
        auto v = stall(r.predicates.size() == 0 ? "no new predicates"
                                                : "refinement cap reached");
        if (v)
          return *v;
        continue;
      }
      ++refinements;
      std::set<int> heads;
      {
        std::lock_guard<std::mutex> g(prec_mu_);
        for (const auto &[h, ps] : r.predicates.predicates)
          for (const auto &p : ps)
            if (prec_.add(h, p))
              heads.insert(h);
      }
      note("refinement=" + std::to_string(refinements) + " status=refined predicates=" +
           std::to_string(precision().size()));
      invalidate(heads);
      continue;
    }

    // successors at loop heads
    for (int h : cfa.loop_heads) {
      auto t = u.find(h, 1);
      if (!t)
        continue;
      Lit reach = u.node(*t).reach;
      auto r = solver.solve({reach}, budget);
      if (r == SatSolver::Result::Unsat)
        continue;
      if (r == SatSolver::Result::Unknown) {
        if (interrupted())
          return halted();
        VerifierVerdict v;
        v.detail = "abstract successor check exceeded the solver budget";
        return v;
      }
      ArgNode child{h, false, {}, n, {}, {}, -1, true, false};
      for (auto [eid, hv] : u.trace(*t))
        child.block.push_back(eid);
      auto it = prec.predicates.find(h);
      if (it != prec.predicates.end())
        for (const auto &p : it->second) {
          Lit hp = u.holds(*t, p);
          if (solver.solve({reach, ~hp}, budget) == SatSolver::Result::Unsat)
            child.region.literals.push_back({p, true});
          else if (solver.solve({reach, hp}, budget) == SatSolver::Result::Unsat)
            child.region.literals.push_back({p, false});
        }
      int id = static_cast<int>(arg.size());
      for (size_t m = 1; m < arg.size(); ++m)
        if (arg[m].alive && arg[m].loc == h && arg[m].covered_by < 0 && !arg[m].concrete &&
            child.region.within(arg[m].region)) {
          child.covered_by = static_cast<int>(m);
          break;
        }
      arg.push_back(std::move(child));
      arg[n].children.push_back(id);
      if (arg[id].covered_by < 0)
        work.push_back(id);
    }
    arg[n].expanded = true;
  }

  if (interrupted())
    return halted();
  std::map<int, std::vector<ExprPtr>> regions;
  for (const auto &a : arg) {
    if (!a.alive || a.covered_by >= 0 || !cfa.is_loop_head[a.loc])
      continue;
    if (a.concrete) {
      std::vector<ExprPtr> zero;
      for (const auto &v : cfa.symbols.vars())
        zero.push_back(Expr::binary(ExprKind::Eq, Expr::var(v.name), Expr::int_lit(0)));
      regions[a.loc].push_back(conjunction(zero));
    } else {
      regions[a.loc].push_back(a.region.formula());
    }
  }
  std::map<int, ExprPtr> invs;
  for (auto &[h, rs] : regions)
    invs[h] = simplify(disjunction(rs));
  note("refinement=" + std::to_string(refinements) + " status=proven");
  VerifierVerdict v;
  v.verdict = Verdict::True;
  v.witness = skeleton_witness(cfa, invs, "coopver-predabs");
  v.detail = "abstract fixpoint with " + std::to_string(precision().size()) + " predicates";
  return v;
}

} // namespace coopver
