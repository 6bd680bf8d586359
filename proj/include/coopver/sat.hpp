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
// A small CDCL propositional solver: two watched literals, first-UIP
// learning, VSIDS branching with phase saving, Luby restarts, and
// incremental solving under assumptions.
//
//===----------------------------------------------------------------------===//
#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace coopver {

struct Lit {
  int x = 0;

  static Lit make(int var, bool negated = false) { return Lit{2 * var + (negated ? 1 : 0)}; }
  int var() const { return x >> 1; }
  bool negated() const { return x & 1; }
  Lit operator~() const { return Lit{x ^ 1}; }
  bool operator==(Lit o) const { return x == o.x; }
  bool operator!=(Lit o) const { return x != o.x; }
  bool operator<(Lit o) const { return x < o.x; }
};

class SatSolver {
public:
  enum class Result { Sat, Unsat, Unknown };

  SatSolver();

  int new_var();
  int num_vars() const { return static_cast<int>(assigns_.size()); }
  /// A literal fixed to true.
  Lit true_lit() const { return Lit::make(0); }

  /// Adds a clause at decision level 0. Returns false once the clause set
  /// is known to be unsatisfiable.
  bool add_clause(std::vector<Lit> clause);
  bool add_unit(Lit a) { return add_clause({a}); }

  /// Solves under the given assumptions. A negative budget means no limit.
  Result solve(const std::vector<Lit> &assumptions = {}, int64_t conflict_budget = -1);

  /// Model value after a Sat answer.
  bool model(Lit a) const { return model_[a.var()] != a.negated(); }

  /// Polled periodically during search; returning true aborts with Unknown.
  void set_interrupt(std::function<bool()> f) { interrupt_ = std::move(f); }

  uint64_t conflicts() const { return conflicts_; }
  size_t num_clauses() const { return num_problem_; }

private:
  struct Watcher {
    int cref;
    Lit blocker;
  };
  struct Clause {
    std::vector<Lit> lits;
    bool learnt = false;
    bool deleted = false;
    double activity = 0;
  };

  int8_t value(Lit a) const {
    int8_t v = assigns_[a.var()];
    return a.negated() ? static_cast<int8_t>(-v) : v;
  }
  int level() const { return static_cast<int>(trail_lim_.size()); }
  void enqueue(Lit a, int reason);
  int propagate();
  void analyze(int confl, std::vector<Lit> &learnt, int &back_level);
  void cancel_until(int lvl);
  void attach(int cref);
  int new_clause(std::vector<Lit> lits, bool learnt);
  Lit pick_branch();
  void bump_var(int v);
  void bump_clause(Clause &c);
  void reduce_db();
  bool locked(int cref) const;

  // Binary max-heap of unassigned variables ordered by activity.
  void heap_insert(int v);
  void heap_up(int i);
  void heap_down(int i);
  int heap_pop();

  std::vector<Clause> clauses_;
  std::vector<int> free_;
  std::vector<int> learnts_;
  std::vector<std::vector<Watcher>> watches_;
  std::vector<int8_t> assigns_;
  std::vector<int8_t> polarity_;
  std::vector<bool> model_;
  std::vector<int> reason_;
  std::vector<int> level_;
  std::vector<double> activity_;
  std::vector<char> seen_;
  std::vector<Lit> trail_;
  std::vector<int> trail_lim_;
  std::vector<int> heap_;
  std::vector<int> heap_pos_;
  size_t qhead_ = 0;
  double var_inc_ = 1.0;
  double cla_inc_ = 1.0;
  bool ok_ = true;
  uint64_t conflicts_ = 0;
  size_t num_problem_ = 0;
  size_t max_learnts_ = 2000;
  std::function<bool()> interrupt_;
};

} // namespace coopver
