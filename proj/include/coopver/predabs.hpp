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
// Predicate abstraction with counterexample-guided refinement. Abstract
// states live at the initial location and at loop heads; the loop-free
// blocks between them are encoded exactly. Regions are Cartesian: a
// conjunction of predicates or their negations.
//
//===----------------------------------------------------------------------===//
#pragma once

#include <functional>
#include <map>
#include <optional>
#include <variant>
#include <vector>

#include "coopver/master.hpp"
#include "coopver/semantics.hpp"

namespace coopver {

/// Predicates per loop head.
struct Precision {
  std::map<int, std::vector<ExprPtr>> predicates;

  /// Adds the conjuncts of \p e at \p loc; returns how many were new.
  int add(int loc, const ExprPtr &e);
  size_t size() const;
  bool contains(int loc, const ExprPtr &p) const;
};

/// A Cartesian region: each entry is a predicate and its polarity.
struct Region {
  std::vector<std::pair<ExprPtr, bool>> literals;

  ExprPtr formula() const;
  /// True if every literal of \p other occurs here (this ⊆ other).
  bool within(const Region &other) const;
};

/// Strongest Cartesian region over \p preds implied by the image of
/// \p region under \p op. Undecided entailments leave a predicate out.
Region abstract_post(const SymbolTable &symbols, const ExprPtr &region, const Operation &op,
                     const std::vector<ExprPtr> &preds);
/// Same over a sequence of operations propagated exactly.
Region abstract_post(const SymbolTable &symbols, const ExprPtr &region,
                     const std::vector<Operation> &ops, const std::vector<ExprPtr> &preds);

struct Refinement {
  std::optional<Counterexample> counterexample;
  /// New predicates per loop head; empty when nothing could be learned.
  Precision predicates;
};

/// Decides the edge path from the initial location to the property
/// location. A feasible path yields a counterexample; an infeasible one
/// yields the atoms of its weakest preconditions at the loop heads it
/// visits (atoms of the path's conditions included).
Refinement cegar_refine(const Cfa &cfa, const SafetyProperty &prop,
                        const std::vector<int> &path, const Precision &prec,
                        int64_t conflict_budget = 500000);

/// Adds the conjuncts of every matched witness invariant; returns the
/// diagnostics of unmatched or unreadable witnesses.
std::vector<std::string> inject_predicates(Precision &prec, const std::vector<Witness> &witnesses,
                                           const Cfa &cfa);

class PredAbsMaster : public Master {
public:
  std::string name() const override { return "predabs"; }
  Precision precision() const;
  /// Predicates used before the run starts (merged with injections).
  void set_initial_precision(Precision p) { initial_ = std::move(p); }

protected:
  VerifierVerdict do_run(const Cfa &cfa, const SafetyProperty &prop) override;

private:
  mutable std::mutex prec_mu_;
  Precision prec_;
  Precision initial_;
};

} // namespace coopver
