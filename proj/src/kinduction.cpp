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

#include "coopver/kinduction.hpp"

#include <map>

#include "coopver/helpers.hpp"
#include "coopver/unroll.hpp"

namespace coopver {

namespace {

struct Query {
  SatSolver solver;
  BitBlaster bb;
  explicit Query(const Cfa &cfa, const KindOptions &opts) : bb(solver, cfa.symbols) {
    if (opts.interrupt)
      solver.set_interrupt(opts.interrupt);
  }
};

std::map<int, ExprPtr> by_head(const std::vector<LocatedInvariant> &invs) {
  std::map<int, std::vector<ExprPtr>> parts;
  for (const auto &li : invs)
    parts[li.loop_head].push_back(li.invariant);
  std::map<int, ExprPtr> out;
  for (auto &[h, ps] : parts)
    out[h] = conjunction(ps);
  return out;
}

std::vector<int> nodes_at(const Unrolling &u, int loc, int min_layer, int max_layer) {
  std::vector<int> out;
  for (size_t i = 0; i < u.nodes().size(); ++i) {
    const auto &n = u.node(static_cast<int>(i));
    if (n.loc == loc && n.layer >= min_layer && n.layer <= max_layer)
      out.push_back(static_cast<int>(i));
  }
  return out;
}

} // namespace

BmcResult bmc_check(const Cfa &cfa, const SafetyProperty &prop, int k, const KindOptions &opts) {
  Query q(cfa, opts);
  Unrolling u(cfa, q.bb, 0, k + 1);
  u.start_initial();
  u.build();
  std::vector<Lit> bad;
  std::vector<int> where;
  for (int n : nodes_at(u, prop.location, 0, k + 1)) {
    bad.push_back(u.violation(n, prop.condition));
    where.push_back(n);
  }
  Lit any = q.bb.or_all(bad);
  if (any == q.bb.lit_false())
    return {BmcStatus::Safe, std::nullopt};
  switch (q.solver.solve({any}, opts.conflict_budget)) {
  case SatSolver::Result::Unsat:
    return {BmcStatus::Safe, std::nullopt};
  case SatSolver::Result::Unknown:
    return {BmcStatus::Unknown, std::nullopt};
  case SatSolver::Result::Sat:
    break;
  }
  for (size_t i = 0; i < bad.size(); ++i)
    if (q.solver.model(bad[i])) {
      auto cex = concretize(cfa, prop, u.trace(where[i]));
      if (!cex)
        throw Error("internal: bounded counterexample does not replay");
      return {BmcStatus::Counterexample, std::move(cex)};
    }
  throw Error("internal: model satisfies no violation literal");
}

InductionStatus induction_step(const Cfa &cfa, const SafetyProperty &prop, int k,
                               const std::vector<LocatedInvariant> &aux,
                               const KindOptions &opts) {
  Query q(cfa, opts);
  auto assume = by_head(aux);
  Unrolling u(cfa, q.bb, 1, k + 1);
  u.start_at_heads(assume);
  u.build();
  for (const auto &[h, inv] : assume)
    u.assume_at(h, inv);
  for (int n : nodes_at(u, prop.location, 1, k))
    q.solver.add_clause({~u.violation(n, prop.condition)});
  std::vector<Lit> bad;
  for (int n : nodes_at(u, prop.location, k + 1, k + 1))
    bad.push_back(u.violation(n, prop.condition));
  Lit any = q.bb.or_all(bad);
  if (any == q.bb.lit_false())
    return InductionStatus::Proven;
  return q.solver.solve({any}, opts.conflict_budget) == SatSolver::Result::Unsat
             ? InductionStatus::Proven
             : InductionStatus::NotInductive;
}

bool validate_invariant(const Cfa &cfa, const LocatedInvariant &li,
                        const std::vector<LocatedInvariant> &accepted,
                        const KindOptions &opts) {
  if (li.loop_head < 0 || li.loop_head >= static_cast<int>(cfa.num_locations()) ||
      !cfa.is_loop_head[li.loop_head])
    throw Error("invariant is not located at a loop head");
  check_declared(li.invariant, cfa.symbols);
  auto refutable = [&](Unrolling &u, Query &q, int min_layer) {
    std::vector<Lit> bad;
    for (int n : nodes_at(u, li.loop_head, min_layer, 1))
      bad.push_back(q.bb.mk_and(u.node(n).reach, ~u.holds(n, li.invariant)));
    Lit any = q.bb.or_all(bad);
    if (any == q.bb.lit_false())
      return false;
    return q.solver.solve({any}, opts.conflict_budget) != SatSolver::Result::Unsat;
  };
  {
    Query q(cfa, opts);
    Unrolling u(cfa, q.bb, 0, 1);
    u.start_initial();
    u.build();
    if (refutable(u, q, 0))
      return false;
  }
  Query q(cfa, opts);
  auto assume = by_head(accepted);
  auto &mine = assume[li.loop_head];
  mine = mine ? mk_and(mine, li.invariant) : li.invariant;
  Unrolling u(cfa, q.bb, 0, 1);
  u.start_at_heads(assume);
  u.build();
  return !refutable(u, q, 1);
}

KInductionState KInductionMaster::state() const {
  std::lock_guard<std::mutex> g(state_mu_);
  KInductionState s = state_;
  s.requests_help = requests_help();
  return s;
}

int screen_invariants(const Cfa &cfa, const std::vector<LocatedInvariant> &candidates,
                      std::vector<LocatedInvariant> &accepted, const KindOptions &opts,
                      const std::function<void(const LocatedInvariant &)> &on_accept,
                      const std::function<void(const std::string &)> &log) {
  int count = 0;
  std::vector<LocatedInvariant> rejected;
  auto say = [&](const std::string &what, const LocatedInvariant &li, const char *how) {
    if (log)
      log("aux " + what + " line=" + std::to_string(cfa.line_of(li.loop_head)) + " inv=" +
          to_string(li.invariant) + " source=" + li.source + how);
  };
  auto known = [&](const LocatedInvariant &li) {
    for (const auto &a : accepted)
      if (a.loop_head == li.loop_head && equal(a.invariant, li.invariant))
        return true;
    return false;
  };
  auto stop = [&] { return opts.interrupt && opts.interrupt(); };
  auto try_one = [&](const LocatedInvariant &li, const char *how) {
    if (!validate_invariant(cfa, li, accepted, opts))
      return false;
    accepted.push_back(li);
    if (on_accept)
      on_accept(li);
    say("accepted", li, how);
    ++count;
    return true;
  };
  for (const auto &li : candidates) {
    if (!li.invariant || is_trivial(li.invariant) || known(li))
      continue;
    if (stop())
      return count;
    if (!try_one(li, ""))
      rejected.push_back(li);
  }
  for (const auto &li : rejected) {
    if (stop())
      break;
    if (try_one(li, " (retry)"))
      continue;
    say("rejected", li, "");
    auto parts = split_conjunctions(li.invariant);
    if (parts.size() < 2)
      continue;
    for (auto &p : parts) {
      LocatedInvariant part{li.loop_head, p, li.source};
      if (stop() || is_trivial(p) || known(part))
        continue;
      try_one(part, " (conjunct)");
    }
  }
  return count;
}

int KInductionMaster::absorb_invariants(const Cfa &cfa, std::vector<LocatedInvariant> candidates,
                                        const KindOptions &opts) {
  std::vector<LocatedInvariant> current;
  {
    std::lock_guard<std::mutex> g(state_mu_);
    current = state_.aux_invariants;
  }
  return screen_invariants(
      cfa, candidates, current, opts,
      [&](const LocatedInvariant &li) {
        std::lock_guard<std::mutex> g(state_mu_);
        state_.aux_invariants.push_back(li);
      },
      [&](const std::string &line) { note(line); });
}

int KInductionMaster::absorb(const Cfa &cfa, std::vector<Witness> witnesses,
                             const KindOptions &opts) {
  std::vector<LocatedInvariant> candidates;
  for (const auto &w : witnesses) {
    try {
      MatchOptions mo;
      mo.source = w.metadata.producer.empty() ? "witness" : w.metadata.producer;
      auto m = match_to_cfa(w, cfa, mo);
      for (const auto &d : m.diagnostics)
        note("witness " + mo.source + ": " + d);
      for (auto &li : m.invariants)
        candidates.push_back(std::move(li));
    } catch (const Error &e) {
      note(std::string("witness skipped: ") + e.what());
    }
  }
  return absorb_invariants(cfa, std::move(candidates), opts);
}

VerifierVerdict KInductionMaster::proven(const Cfa &cfa, int k) {
  std::vector<LocatedInvariant> aux;
  {
    std::lock_guard<std::mutex> g(state_mu_);
    aux = state_.aux_invariants;
  }
  VerifierVerdict v;
  v.verdict = Verdict::True;
  v.witness = skeleton_witness(cfa, by_head(aux), "coopver-kind");
  v.detail = "proven by " + std::to_string(k) + "-induction with " +
             std::to_string(aux.size()) + " auxiliary invariants";
  return v;
}

VerifierVerdict KInductionMaster::do_run(const Cfa &cfa, const SafetyProperty &prop) {
  {
    std::lock_guard<std::mutex> g(state_mu_);
    state_ = KInductionState{};
  }
  KindOptions opts;
  opts.conflict_budget = config().conflict_budget;
  opts.interrupt = [this] { return interrupted(); };

  if (config().builtin_aux) {
    IntervalOptions io;
    auto r = interval_analysis(cfa, io);
    for (auto &li : r.invariants)
      li.source = "interval";
    absorb_invariants(cfa, std::move(r.invariants), opts);
  }
  absorb(cfa, drain_inbox(), opts);

  const int cap = config().bound_cap;
  int k = 1;
  for (; k <= cap; ++k) {
    if (interrupted())
      return halted();
    {
      std::lock_guard<std::mutex> g(state_mu_);
      state_.current_k = k;
    }
    BmcResult b = bmc_check(cfa, prop, k, opts);
    if (b.status == BmcStatus::Counterexample) {
      note("k=" + std::to_string(k) + " status=counterexample");
      VerifierVerdict v;
      v.verdict = Verdict::False;
      v.counterexample = std::move(b.counterexample);
      v.detail = "violation within " + std::to_string(k) + " loop iterations";
      return v;
    }
    if (b.status == BmcStatus::Unknown) {
      if (interrupted())
        return halted();
      note("k=" + std::to_string(k) + " status=bmc-unknown");
      VerifierVerdict v;
      v.detail = "bounded check exceeded the solver budget at k=" + std::to_string(k);
      return v;
    }
    {
      std::lock_guard<std::mutex> g(state_mu_);
      state_.proven_bound = k;
    }
    absorb(cfa, drain_inbox(), opts);
    std::vector<LocatedInvariant> aux;
    {
      std::lock_guard<std::mutex> g(state_mu_);
      aux = state_.aux_invariants;
    }
    if (induction_step(cfa, prop, k, aux, opts) == InductionStatus::Proven) {
      if (interrupted())
        return halted();
      note("k=" + std::to_string(k) + " status=proven");
      return proven(cfa, k);
    }
    note("k=" + std::to_string(k) + " status=not-inductive");
  }

  note("k=" + std::to_string(cap) + " status=cap-reached");
  for (;;) {
    if (interrupted())
      return halted();
    if (inbox_exhausted())
      break;
    wait_inbox(0.05);
    auto ws = drain_inbox();
    if (ws.empty() || absorb(cfa, std::move(ws), opts) == 0)
      continue;
    std::vector<LocatedInvariant> aux;
    {
      std::lock_guard<std::mutex> g(state_mu_);
      aux = state_.aux_invariants;
    }
    for (int j = 1; j <= cap; ++j) {
      if (interrupted())
        return halted();
      if (induction_step(cfa, prop, j, aux, opts) == InductionStatus::Proven) {
        if (interrupted())
          return halted();
        note("k=" + std::to_string(j) + " status=proven");
        return proven(cfa, j);
      }
    }
  }
  VerifierVerdict v;
  v.detail = "no proof up to k=" + std::to_string(cap);
  return v;
}

} // namespace coopver
