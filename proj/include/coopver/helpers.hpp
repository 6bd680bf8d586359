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
// Built-in invariant generators. Interval and affine results are sound;
// template results are guesses screened only by sampling.
//
//===----------------------------------------------------------------------===//
#pragma once

#include <atomic>
#include <cstdint>
#include <string>
#include <vector>

#include "coopver/cfa.hpp"
#include "coopver/witness.hpp"

namespace coopver {

enum class HelperStatus { Completed, TimedOut, Failed, Stopped };

std::string to_string(HelperStatus s);

struct HelperResult {
  std::vector<LocatedInvariant> invariants;
  double elapsed = 0;
  HelperStatus status = HelperStatus::Failed;
  std::string detail;
};

struct IntervalOptions {
  int widen_after = 3;
  bool narrowing = false;
  const std::atomic<bool> *cancel = nullptr;
};

struct AffineOptions {
  const std::atomic<bool> *cancel = nullptr;
};

struct TemplateOptions {
  int coeff_min = -2;
  int coeff_max = 2;
  int max_vars = 3;
  /// Concrete executions used to screen candidates; 0 keeps every candidate.
  int samples = 64;
  /// Edge budget per sampled execution.
  int max_steps = 4096;
  uint64_t seed = 1;
  /// Survivors kept per loop head, simplest first.
  size_t max_per_head = 64;
  const std::atomic<bool> *cancel = nullptr;
};

HelperResult interval_analysis(const Cfa &cfa, const IntervalOptions &opts = {});
HelperResult affine_equality_analysis(const Cfa &cfa, const AffineOptions &opts = {});
HelperResult template_guess_check(const Cfa &cfa, const SafetyProperty &prop,
                                  const TemplateOptions &opts = {});

/// Runs a built-in helper by name: interval, affine or template.
HelperResult run_builtin_helper(const std::string &name, const Cfa &cfa,
                                const SafetyProperty &prop,
                                const std::atomic<bool> *cancel = nullptr);

/// Witness carrying the result's invariants at their loop heads.
Witness helper_witness(const Cfa &cfa, const HelperResult &r, const std::string &producer);

} // namespace coopver
