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
// Validity of boolean formulas over fixed-width variables, decided by
// enumeration when the free-variable space is small and by bit-blasting
// plus propositional search otherwise. Formulas are read under the total
// division semantics.
//
//===----------------------------------------------------------------------===//
#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "coopver/eval.hpp"

namespace coopver {

enum class Validity { Valid, CounterModel, Unknown };

std::string to_string(Validity v);

struct ValidityResult {
  Validity status = Validity::Unknown;
  /// A full valuation falsifying the formula (unmentioned variables are 0).
  std::optional<Valuation> counter_model;
  /// "enumeration" or "sat".
  std::string tier;
};

struct ValidityOptions {
  /// Largest number of assignments tried by the enumeration tier.
  uint64_t enumeration_budget = uint64_t{1} << 16;
  /// Conflict limit for the propositional tier; negative means none.
  int64_t conflict_budget = 500000;
  bool allow_enumeration = true;
  bool allow_sat = true;
};

ValidityResult valid(const ExprPtr &formula, const SymbolTable &symbols,
                     const ValidityOptions &opts = {});

/// Convenience: Valid answer to `a <=> b`.
bool equivalent(const ExprPtr &a, const ExprPtr &b, const SymbolTable &symbols);

} // namespace coopver
