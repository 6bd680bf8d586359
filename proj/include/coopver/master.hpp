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
// Common contract of the master verifiers. A master runs on one worker;
// inject() and stop() may be called from other threads while run() is
// executing. Injected witnesses wait in an inbox that the analysis drains
// at its own poll points.
//
//===----------------------------------------------------------------------===//
#pragma once

#include <atomic>
#include <condition_variable>
#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "coopver/cfa.hpp"
#include "coopver/clock.hpp"
#include "coopver/verdict.hpp"
#include "coopver/witness.hpp"

namespace coopver {

struct MasterConfig {
  /// Seconds after start until requests_help is raised.
  double timer_m = kForever;
  /// Seconds after start until the run gives up with Timeout.
  double timeout = kForever;
  /// Upper bound on k (k-induction) or refinement rounds (predicate abstraction).
  int bound_cap = 64;
  int64_t conflict_budget = 500000;
  /// Use the built-in interval auxiliary invariants (k-induction).
  bool builtin_aux = true;
  /// Predicate abstraction: take predicates only from injected invariants
  /// that pass initiation and consecution.
  bool validate_injections = true;
  std::shared_ptr<Clock> clock;
  /// Receives progress lines; may be empty.
  std::function<void(const std::string &)> on_log;
};

class Master {
public:
  virtual ~Master() = default;
  virtual std::string name() const = 0;

  /// Runs to a verdict. Clears the stop flag and help request on entry;
  /// the inbox is kept so that a restarted run sees earlier injections.
  VerifierVerdict run(const Cfa &cfa, const SafetyProperty &prop, const MasterConfig &config);

  void inject(std::vector<Witness> witnesses);
  /// Declares that no further witnesses will arrive.
  void close_inbox();
  void reopen_inbox();
  void stop();
  bool stop_requested() const { return stop_.load(); }
  bool requests_help() const { return help_.load(); }
  std::vector<std::string> log() const;
  size_t injected_count() const;

protected:
  virtual VerifierVerdict do_run(const Cfa &cfa, const SafetyProperty &prop) = 0;

  const MasterConfig &config() const { return config_; }
  double elapsed() const;
  /// Raises requests_help once timer_m has passed.
  void poll_timer();
  bool past_deadline() const;
  /// True when the analysis should abandon a solver call.
  bool interrupted();
  std::vector<Witness> drain_inbox();
  bool inbox_exhausted() const;
  /// Blocks until the inbox is non-empty, closed, stopped, or \p seconds pass.
  void wait_inbox(double seconds);
  void note(const std::string &line);
  VerifierVerdict halted() const;

private:
  MasterConfig config_;
  double start_ = 0;
  std::atomic<bool> stop_{false};
  std::atomic<bool> help_{false};
  mutable std::mutex mu_;
  std::condition_variable cv_;
  std::deque<Witness> inbox_;
  bool closed_ = false;
  size_t injected_ = 0;
  std::vector<std::string> log_;
};

std::unique_ptr<Master> make_master(const std::string &name);

} // namespace coopver
