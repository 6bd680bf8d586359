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
// Bounded model checking and k-induction over the layered unrolling,
// strengthened by auxiliary loop invariants that are checked before use.
//
//===----------------------------------------------------------------------===//
#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "coopver/master.hpp"
#include "coopver/semantics.hpp"

namespace coopver {

struct KindOptions {
  int64_t conflict_budget = 500000;
  std::function<bool()> interrupt;
};

enum class BmcStatus { Safe, Counterexample, Unknown };

struct BmcResult {
  BmcStatus status = BmcStatus::Unknown;
  std::optional<Counterexample> counterexample;
};

/// All paths with at most k loop iterations (k + 1 loop-head entries).
BmcResult bmc_check(const Cfa &cfa, const SafetyProperty &prop, int k,
                    const KindOptions &opts = {});

enum class InductionStatus { Proven, NotInductive };

InductionStatus induction_step(const Cfa &cfa, const SafetyProperty &prop, int k,
                               const std::vector<LocatedInvariant> &aux,
                               const KindOptions &opts = {});

/// Initiation plus one-step consecution relative to \p accepted.
bool validate_invariant(const Cfa &cfa, const LocatedInvariant &li,
                        const std::vector<LocatedInvariant> &accepted,
                        const KindOptions &opts = {});

/// Validates candidates one by one against the growing \p accepted set;
/// rejects are retried once everything else is in, then split into
/// conjuncts. Accepted invariants are appended to \p accepted and passed to
/// \p on_accept; \p log receives accept/reject lines.
int screen_invariants(const Cfa &cfa, const std::vector<LocatedInvariant> &candidates,
                      std::vector<LocatedInvariant> &accepted, const KindOptions &opts,
                      const std::function<void(const LocatedInvariant &)> &on_accept = {},
                      const std::function<void(const std::string &)> &log = {});

struct KInductionState {
  int current_k = 1;
  int proven_bound = 0;
  std::vector<LocatedInvariant> aux_invariants;
  bool requests_help = false;
};

class KInductionMaster : public Master {
public:
  std::string name() const override { return "kind"; }
  KInductionState state() const;

protected:
  VerifierVerdict do_run(const Cfa &cfa, const SafetyProperty &prop) override;

private:
  /// Matches and validates inbox witnesses; returns how many invariants
  /// were accepted.
  int absorb(const Cfa &cfa, std::vector<Witness> witnesses, const KindOptions &opts);
  int absorb_invariants(const Cfa &cfa, std::vector<LocatedInvariant> candidates,
                        const KindOptions &opts);
  VerifierVerdict proven(const Cfa &cfa, int k);

  mutable std::mutex state_mu_;
  KInductionState state_;
};

} // namespace coopver
