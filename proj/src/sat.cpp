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

#include "coopver/sat.hpp"

#include <algorithm>

namespace coopver {

namespace {

// Luby sequence scaled restarts: 1 1 2 1 1 2 4 ...
double luby(double y, int x) {
  int size = 1, seq = 0;
  while (size < x + 1) {
    ++seq;
    size = 2 * size + 1;
  }
  while (size - 1 != x) {
    size = (size - 1) >> 1;
    --seq;
    x = x % size;
  }
  double r = 1;
  for (int i = 0; i < seq; ++i)
    r *= y;
  return r;
}

} // namespace

SatSolver::SatSolver() {
  int t = new_var();
  add_unit(Lit::make(t));
}

int SatSolver::new_var() {
  int v = num_vars();
  assigns_.push_back(0);
  polarity_.push_back(-1);
  reason_.push_back(-1);
  level_.push_back(0);
  activity_.push_back(0);
  seen_.push_back(0);
  heap_pos_.push_back(-1);
  watches_.emplace_back();
  watches_.emplace_back();
  heap_insert(v);
  return v;
}

int SatSolver::new_clause(std::vector<Lit> lits, bool learnt) {
  int cref;
  if (!free_.empty()) {
    cref = free_.back();
    free_.pop_back();
    clauses_[cref] = Clause{std::move(lits), learnt, false, 0};
  } else {
    cref = static_cast<int>(clauses_.size());
    clauses_.push_back(Clause{std::move(lits), learnt, false, 0});
  }
  return cref;
}

void SatSolver::attach(int cref) {
  const auto &c = clauses_[cref].lits;
  watches_[(~c[0]).x].push_back({cref, c[1]});
  watches_[(~c[1]).x].push_back({cref, c[0]});
}

bool SatSolver::add_clause(std::vector<Lit> clause) {
  if (!ok_)
    return false;
  cancel_until(0);
  std::sort(clause.begin(), clause.end());
  std::vector<Lit> out;
  for (size_t i = 0; i < clause.size(); ++i) {
    Lit a = clause[i];
    if (value(a) > 0 || (i + 1 < clause.size() && clause[i + 1] == ~a))
      return true;
    if (value(a) < 0 || (!out.empty() && out.back() == a))
      continue;
    out.push_back(a);
  }
  if (out.empty())
    return ok_ = false;
  if (out.size() == 1) {
    enqueue(out[0], -1);
    if (propagate() >= 0)
      ok_ = false;
    return ok_;
  }
  ++num_problem_;
  attach(new_clause(std::move(out), false));
  return true;
}

void SatSolver::enqueue(Lit a, int reason) {
  assigns_[a.var()] = a.negated() ? -1 : 1;
  reason_[a.var()] = reason;
  level_[a.var()] = level();
  trail_.push_back(a);
}

int SatSolver::propagate() {
  while (qhead_ < trail_.size()) {
    Lit p = trail_[qhead_++];
    auto &ws = watches_[p.x];
    Lit false_lit = ~p;
    size_t i = 0, j = 0;
    while (i < ws.size()) {
      Watcher w = ws[i++];
      if (value(w.blocker) > 0) {
        ws[j++] = w;
        continue;
      }
      Clause &c = clauses_[w.cref];
      if (c.deleted)
        continue;
      auto &lits = c.lits;
      if (lits[0] == false_lit)
        std::swap(lits[0], lits[1]);
      Lit first = lits[0];
      if (first != w.blocker && value(first) > 0) {
        ws[j++] = {w.cref, first};
        continue;
      }
      bool moved = false;
      for (size_t k = 2; k < lits.size(); ++k) {
        if (value(lits[k]) >= 0) {
          std::swap(lits[1], lits[k]);
          watches_[(~lits[1]).x].push_back({w.cref, first});
          moved = true;
          break;
        }
      }
      if (moved)
        continue;
      ws[j++] = {w.cref, first};
      if (value(first) < 0) {
        while (i < ws.size())
          ws[j++] = ws[i++];
        ws.resize(j);
        qhead_ = trail_.size();
        return w.cref;
      }
      enqueue(first, w.cref);
    }
    ws.resize(j);
  }
  return -1;
}

void SatSolver::bump_var(int v) {
  if ((activity_[v] += var_inc_) > 1e100) {
    for (double &a : activity_)
      a *= 1e-100;
    var_inc_ *= 1e-100;
  }
  if (heap_pos_[v] >= 0)
    heap_up(heap_pos_[v]);
}

void SatSolver::bump_clause(Clause &c) {
  if ((c.activity += cla_inc_) > 1e20) {
    for (int r : learnts_)
      clauses_[r].activity *= 1e-20;
    cla_inc_ *= 1e-20;
  }
}

void SatSolver::analyze(int confl, std::vector<Lit> &learnt, int &back_level) {
  learnt.assign(1, Lit{});
  int pending = 0;
  Lit p{-1};
  int index = static_cast<int>(trail_.size()) - 1;
  std::vector<int> touched;
  do {
    Clause &c = clauses_[confl];
    if (c.learnt)
      bump_clause(c);
    for (size_t k = (p.x < 0 ? 0 : 1); k < c.lits.size(); ++k) {
      Lit q = c.lits[k];
      int v = q.var();
      if (seen_[v] || level_[v] == 0)
        continue;
      seen_[v] = 1;
      touched.push_back(v);
      bump_var(v);
      if (level_[v] >= level())
        ++pending;
      else
        learnt.push_back(q);
    }
    while (!seen_[trail_[index].var()])
      --index;
    p = trail_[index--];
    confl = reason_[p.var()];
    seen_[p.var()] = 0;
    --pending;
    if (pending > 0 && confl >= 0 && clauses_[confl].lits[0] != p) {
      // Keep the implied literal first so the loop above skips it.
      auto &l = clauses_[confl].lits;
      auto it = std::find(l.begin(), l.end(), p);
      std::iter_swap(l.begin(), it);
    }
  } while (pending > 0);
  learnt[0] = ~p;

  // Local minimization: drop literals implied by other learnt literals.
  size_t j = 1;
  for (size_t i = 1; i < learnt.size(); ++i) {
    int r = reason_[learnt[i].var()];
    bool redundant = r >= 0;
    if (redundant)
      for (Lit q : clauses_[r].lits)
        if (q.var() != learnt[i].var() && !seen_[q.var()] && level_[q.var()] > 0) {
          redundant = false;
          break;
        }
    if (!redundant)
      learnt[j++] = learnt[i];
  }
  learnt.resize(j);

  back_level = 0;
  if (learnt.size() > 1) {
    size_t max_i = 1;
    for (size_t i = 2; i < learnt.size(); ++i)
      if (level_[learnt[i].var()] > level_[learnt[max_i].var()])
        max_i = i;
    std::swap(learnt[1], learnt[max_i]);
    back_level = level_[learnt[1].var()];
  }
  for (int v : touched)
    seen_[v] = 0;
}

void SatSolver::cancel_until(int lvl) {
  if (level() <= lvl)
    return;
  for (int i = static_cast<int>(trail_.size()) - 1; i >= trail_lim_[lvl]; --i) {
    int v = trail_[i].var();
    polarity_[v] = assigns_[v];
    assigns_[v] = 0;
    reason_[v] = -1;
    if (heap_pos_[v] < 0)
      heap_insert(v);
  }
  trail_.resize(trail_lim_[lvl]);
  trail_lim_.resize(lvl);
  qhead_ = trail_.size();
}

Lit SatSolver::pick_branch() {
  while (!heap_.empty()) {
    int v = heap_pop();
    if (assigns_[v] == 0)
      return Lit::make(v, polarity_[v] < 0);
  }
  return Lit{-1};
}

bool SatSolver::locked(int cref) const {
  const Clause &c = clauses_[cref];
  int v = c.lits[0].var();
  return reason_[v] == cref && value(c.lits[0]) > 0;
}

void SatSolver::reduce_db() {
  std::sort(learnts_.begin(), learnts_.end(), [&](int a, int b) {
    return clauses_[a].activity < clauses_[b].activity;
  });
  std::vector<int> keep;
  size_t half = learnts_.size() / 2;
  for (size_t i = 0; i < learnts_.size(); ++i) {
    int r = learnts_[i];
    if (i < half && clauses_[r].lits.size() > 2 && !locked(r)) {
      clauses_[r].deleted = true;
      clauses_[r].lits.clear();
      free_.push_back(r);
    } else {
      keep.push_back(r);
    }
  }
  learnts_ = std::move(keep);
  for (auto &ws : watches_)
    ws.erase(std::remove_if(ws.begin(), ws.end(),
                            [&](const Watcher &w) { return clauses_[w.cref].deleted; }),
             ws.end());
}

SatSolver::Result SatSolver::solve(const std::vector<Lit> &assumptions, int64_t budget) {
  if (!ok_)
    return Result::Unsat;
  cancel_until(0);
  if (propagate() >= 0) {
    ok_ = false;
    return Result::Unsat;
  }
  int restart = 0;
  uint64_t start_conflicts = conflicts_;
  std::vector<Lit> learnt;
  for (;;) {
    int64_t restart_limit = static_cast<int64_t>(luby(2, restart++) * 100);
    int64_t local = 0;
    for (;;) {
      int confl = propagate();
      if (confl >= 0) {
        ++conflicts_;
        ++local;
        if (level() == 0) {
          ok_ = false;
          return Result::Unsat;
        }
        int back;
        analyze(confl, learnt, back);
        cancel_until(back);
        if (learnt.size() == 1) {
          enqueue(learnt[0], -1);
        } else {
          int cref = new_clause(learnt, true);
          learnts_.push_back(cref);
          attach(cref);
          bump_clause(clauses_[cref]);
          enqueue(learnt[0], cref);
        }
        var_inc_ /= 0.95;
        cla_inc_ /= 0.999;
        if ((conflicts_ & 255) == 0 && interrupt_ && interrupt_()) {
          cancel_until(0);
          return Result::Unknown;
        }
        continue;
      }
      if (budget >= 0 && static_cast<int64_t>(conflicts_ - start_conflicts) > budget) {
        cancel_until(0);
        return Result::Unknown;
      }
      if (local >= restart_limit) {
        cancel_until(0);
        break;
      }
      if (learnts_.size() > max_learnts_ + trail_.size()) {
        reduce_db();
        max_learnts_ += max_learnts_ / 10;
      }
      Lit next{-1};
      while (level() < static_cast<int>(assumptions.size())) {
        Lit a = assumptions[level()];
        if (value(a) > 0) {
          trail_lim_.push_back(static_cast<int>(trail_.size()));
        } else if (value(a) < 0) {
          cancel_until(0);
          return Result::Unsat;
        } else {
          next = a;
          break;
        }
      }
      if (next.x < 0) {
        next = pick_branch();
        if (next.x < 0) {
          model_.assign(assigns_.size(), false);
          for (size_t v = 0; v < assigns_.size(); ++v)
            model_[v] = assigns_[v] > 0;
          cancel_until(0);
          return Result::Sat;
        }
      }
      trail_lim_.push_back(static_cast<int>(trail_.size()));
      enqueue(next, -1);
    }
  }
}

void SatSolver::heap_insert(int v) {
  heap_pos_[v] = static_cast<int>(heap_.size());
  heap_.push_back(v);
  heap_up(heap_pos_[v]);
}

void SatSolver::heap_up(int i) {
  int v = heap_[i];
  while (i > 0) {
    int parent = (i - 1) / 2;
    if (activity_[heap_[parent]] >= activity_[v])
      break;
    heap_[i] = heap_[parent];
    heap_pos_[heap_[i]] = i;
    i = parent;
  }
  heap_[i] = v;
  heap_pos_[v] = i;
}

void SatSolver::heap_down(int i) {
  int v = heap_[i];
  int n = static_cast<int>(heap_.size());
  for (;;) {
    int child = 2 * i + 1;
    if (child >= n)
      break;
    if (child + 1 < n && activity_[heap_[child + 1]] > activity_[heap_[child]])
      ++child;
    if (activity_[heap_[child]] <= activity_[v])
      break;
    heap_[i] = heap_[child];
    heap_pos_[heap_[i]] = i;
    i = child;
  }
  heap_[i] = v;
  heap_pos_[v] = i;
}

int SatSolver::heap_pop() {
  int v = heap_[0];
  heap_pos_[v] = -1;
  heap_[0] = heap_.back();
  heap_.pop_back();
  if (!heap_.empty()) {
    heap_pos_[heap_[0]] = 0;
    heap_down(0);
  }
  return v;
}

} // namespace coopver
