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
// Cooperative verification: a master verifier that asks for help after a
// timer, helper invariant generators run in parallel, and injection of the
// non-trivial results back into the master.
//
// Masters and helpers are driven through handles so that the coordinator
// can be exercised with scripted components on a VirtualClock.
//
//===----------------------------------------------------------------------===//
#pragma once

#include <atomic>
#include <condition_variable>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "coopver/clock.hpp"
#include "coopver/exchange.hpp"
#include "coopver/helpers.hpp"
#include "coopver/master.hpp"
#include "coopver/verdict.hpp"

namespace coopver {

/// A helper from the roster: built-in (interval, affine, template) when
/// `external` is empty, otherwise a subprocess.
struct HelperEntry {
  std::string name;
  std::optional<ExternalHelperSpec> external;
};

struct CoopConfig {
  bool restart_master = true;
  bool term_after_first_inv = true;
  double timer_m = 50;
  double timeout_h = 300;
  std::string master = "kind";
  std::vector<HelperEntry> helpers;
  /// Global task timeout in seconds.
  double timeout = 900;
  int bound_cap = 64;
  int64_t conflict_budget = 500000;
  bool builtin_aux = true;
  bool validate_injections = true;
  /// Program text handed to external helpers.
  std::string program_text;

  /// Throws Error unless timerM <= timeout, timeoutH > 0 and every helper
  /// is known (external executables must be runnable).
  void check() const;
  /// `<master>-<helpers>-<timerM>[-wait-<timeoutH>]`
  std::string run_name() const;
};

/// Reads the key-value format (option names plus master, helpers, timeout
/// and one [helper.NAME] section per external helper).
CoopConfig parse_coop_config(const std::string &text);
CoopConfig load_coop_config(const std::string &path);
std::string write_coop_config(const CoopConfig &c);

class MasterHandle {
public:
  virtual ~MasterHandle() = default;
  virtual std::string name() const = 0;
  /// Starts a run in the background; \p timer_m may be kForever.
  virtual void start(double timer_m) = 0;
  virtual bool requests_help() = 0;
  virtual bool has_solution() = 0;
  virtual VerifierVerdict solution() = 0;
  /// Stops the current run and waits for it to end.
  virtual void stop() = 0;
  virtual void inject(std::vector<Witness> witnesses) = 0;
  /// No more witnesses will follow.
  virtual void close_inbox() = 0;
};

class HelperHandle {
public:
  virtual ~HelperHandle() = default;
  virtual std::string name() const = 0;
  virtual void start(double timeout_h) = 0;
  /// timedout() or hasSolution() or stopped() (or failed).
  virtual bool finished() = 0;
  /// Valid once finished().
  virtual HelperResult result() = 0;
  virtual Witness solution() = 0;
  virtual void stop() = 0;
};

struct CoopEvent {
  double time;
  std::string what;
};

struct HelperReport {
  std::string name;
  bool started = false;
  bool injected = false;
  bool trivial = false;
  HelperResult result;
};

struct RunReport {
  std::string run_name;
  VerifierVerdict verdict;
  double master_solo = 0;
  double helper_phase = 0;
  double post_injection = 0;
  double wall = 0;
  double cpu = 0;
  std::vector<HelperReport> helpers;
  size_t witnesses_injected = 0;
  bool helped = false;
  std::vector<CoopEvent> events;
  std::vector<std::string> diagnostics;
};

/// Real handles.
std::unique_ptr<MasterHandle> make_master_handle(const std::string &name, const Cfa &cfa,
                                                 const SafetyProperty &prop,
                                                 const MasterConfig &base);
std::unique_ptr<HelperHandle> make_helper_handle(const HelperEntry &h, const Cfa &cfa,
                                                 const SafetyProperty &prop,
                                                 const std::string &program_text,
                                                 std::shared_ptr<Clock> clock);

/// One cooperative run over explicit handles. The coordinator polls every
/// \p tick seconds; on a VirtualClock it advances the clock instead of
/// sleeping.
class Coordinator {
public:
  Coordinator(const CoopConfig &config, std::unique_ptr<MasterHandle> master,
              std::vector<std::unique_ptr<HelperHandle>> helpers,
              std::shared_ptr<Clock> clock, double tick = 0.005);

  RunReport run();
  /// Cancels the master and all helpers; idempotent and safe from any
  /// thread. The report then carries Unknown unless a verdict exists.
  void stop_all();
  RunReport report() const;

private:
  void wait_step();
  bool past_deadline() const;
  void event(const std::string &what);
  RunReport finish(VerifierVerdict v);

  CoopConfig config_;
  std::unique_ptr<MasterHandle> master_;
  std::vector<std::unique_ptr<HelperHandle>> helpers_;
  std::shared_ptr<Clock> clock_;
  double tick_;
  double t0_ = 0;
  std::atomic<bool> stopped_{false};
  mutable std::mutex mu_;
  RunReport report_;
  bool done_ = false;
  bool running_ = false;
  std::thread::id runner_;
  std::condition_variable idle_;
};

/// Builds real handles and runs the coordinator on the wall clock.
RunReport run_cooperative(const Cfa &cfa, const SafetyProperty &prop, const CoopConfig &config);

} // namespace coopver
