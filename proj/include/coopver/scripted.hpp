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
// Scripted masters and helpers whose behaviour is a function of clock
// time. Used to exercise the coordinator deterministically.
//
//===----------------------------------------------------------------------===//
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "coopver/orchestrator.hpp"

namespace coopver {

struct MasterScript {
  /// Seconds after a start until the master solves on its own.
  std::optional<double> solve_after;
  Verdict verdict = Verdict::True;
  /// Seconds after the first injection until it solves; unset means
  /// injections do not help.
  std::optional<double> solve_after_injection = 1.0;
  /// Raise requests_help this early regardless of the timer.
  std::optional<double> help_after;
};

struct MasterCall {
  double time;
  std::string what; // start(<timer>), stop, inject(<n>), close_inbox
};

class ScriptedMaster : public MasterHandle {
public:
  ScriptedMaster(MasterScript script, std::shared_ptr<Clock> clock,
                 std::string name = "scripted");

  std::string name() const override { return name_; }
  void start(double timer_m) override;
  bool requests_help() override;
  bool has_solution() override;
  VerifierVerdict solution() override;
  void stop() override;
  void inject(std::vector<Witness> witnesses) override;
  void close_inbox() override;

  const std::vector<MasterCall> &calls() const { return calls_; }
  const std::vector<Witness> &injected() const { return injected_; }

private:
  MasterScript script_;
  std::shared_ptr<Clock> clock_;
  std::string name_;
  bool running_ = false;
  double started_ = 0;
  double timer_ = kForever;
  std::optional<double> injected_at_;
  std::vector<Witness> injected_;
  std::vector<MasterCall> calls_;
};

struct HelperScript {
  /// Seconds after start until the result is ready; unset never finishes.
  std::optional<double> finish_after;
  HelperStatus status = HelperStatus::Completed;
  /// Invariants attached to the loop heads of `cfa` in the witness.
  std::map<int, ExprPtr> invariants;
};

class ScriptedHelper : public HelperHandle {
public:
  ScriptedHelper(std::string name, HelperScript script, const Cfa &cfa,
                 std::shared_ptr<Clock> clock);

  std::string name() const override { return name_; }
  void start(double timeout_h) override;
  bool finished() override;
  HelperResult result() override;
  Witness solution() override;
  void stop() override;

  bool was_started() const { return started_; }

private:
  std::string name_;
  HelperScript script_;
  const Cfa &cfa_;
  std::shared_ptr<Clock> clock_;
  bool started_ = false;
  double t0_ = 0;
  double timeout_ = kForever;
  std::optional<HelperStatus> final_;
  double ended_ = 0;
};

} // namespace coopver
