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
// Explicit-state breadth-first exploration over all havoc resolutions; the
// ground truth that every symbolic engine is tested against.
//
//===----------------------------------------------------------------------===//
#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "coopver/verdict.hpp"

namespace coopver {

struct BruteForceOptions {
  size_t state_budget = 4'000'000;
  /// When set, only paths taking at most this many edges into loop heads
  /// are explored.
  std::optional<int> loop_bound;
};

/// `True` when no reachable state violates the property, `False` with a
/// shortest counterexample otherwise, `Unknown` when the budget is hit.
VerifierVerdict brute_force_verify(const Cfa &cfa, const SafetyProperty &prop,
                                   const BruteForceOptions &opts = {});

/// All reachable states at a location, or nullopt when the budget is hit.
std::optional<std::vector<State>> reachable_states(const Cfa &cfa, int location,
                                                   const BruteForceOptions &opts = {});

/// True iff `inv` evaluates to true in every reachable state at `location`
/// (a fault counts as false); nullopt when the budget is hit.
std::optional<bool> holds_at(const Cfa &cfa, const ExprPtr &inv, int location,
                             const BruteForceOptions &opts = {});

} // namespace coopver
