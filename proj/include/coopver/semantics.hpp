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
// Concrete execution: states are total valuations of the declared
// variables, paths start in the all-zero state at the initial location.
//
//===----------------------------------------------------------------------===//
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "coopver/cfa.hpp"

namespace coopver {

using State = Valuation;

struct PathStep {
  State state;
  int location = 0;
  /// Edge taken from this step, -1 for the last step.
  int edge = -1;
};

struct Path {
  std::vector<PathStep> steps;
};

struct Counterexample {
  Path path;
  size_t violated_at = 0;
  SafetyProperty property;
};

/// Successor of `state` under `op`; nullopt when the operation blocks
/// (false assumption or division fault). Havoc takes its value from
/// `havoc_value` and throws Error when none is supplied.
std::optional<State> step(const SymbolTable &symbols, const State &state, const Operation &op,
                          std::optional<uint64_t> havoc_value = std::nullopt);

/// Per-edge compiled evaluators for repeated execution of one CFA.
class Executor {
public:
  explicit Executor(const Cfa &cfa);

  std::optional<State> step(int edge, const State &state, uint64_t havoc_value = 0) const;
  /// True iff the state violates the property (a fault in the condition
  /// is not a violation).
  bool violates(const SafetyProperty &prop, const State &state) const;
  const Cfa &cfa() const { return cfa_; }

private:
  const Cfa &cfa_;
  std::vector<std::optional<Evaluator>> evals_;
};

bool violates(const Cfa &cfa, const SafetyProperty &prop, const State &state);

/// True iff the counterexample is a genuine path of the CFA from the
/// all-zero initial state whose step `violated_at` violates the property.
bool replay(const Cfa &cfa, const Counterexample &cex);

/// Plain-text trace: one line per step, `location | operation | var=val,...`,
/// preceded by `# property:` and `# violated_at:` header lines.
std::string write_trace(const Cfa &cfa, const Counterexample &cex);
/// Throws Error on malformed text or steps that name no CFA edge.
Counterexample read_trace(const Cfa &cfa, const std::string &text);

std::string format_state(const SymbolTable &symbols, const State &state);

} // namespace coopver
