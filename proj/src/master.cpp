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

#include "coopver/master.hpp"

#include <chrono>

#include "coopver/kinduction.hpp"
#include "coopver/predabs.hpp"

namespace coopver {

std::shared_ptr<Clock> real_clock() {
  static std::shared_ptr<Clock> c = std::make_shared<RealClock>();
  return c;
}

VerifierVerdict Master::run(const Cfa &cfa, const SafetyProperty &prop,
                            const MasterConfig &config) {
  config_ = config;
  if (!config_.clock)
    config_.clock = real_clock();
  start_ = config_.clock->now();
  stop_ = false;
  help_ = false;
  poll_timer();
  return do_run(cfa, prop);
}

void Master::inject(std::vector<Witness> witnesses) {
  {
    std::lock_guard<std::mutex> g(mu_);
    for (auto &w : witnesses) {
      inbox_.push_back(std::move(w));
      ++injected_;
    }
  }
  cv_.notify_all();
}

void Master::close_inbox() {
  {
    std::lock_guard<std::mutex> g(mu_);
    closed_ = true;
  }
  cv_.notify_all();
}

void Master::reopen_inbox() {
  std::lock_guard<std::mutex> g(mu_);
  closed_ = false;
}

void Master::stop() {
  stop_ = true;
  cv_.notify_all();
}

std::vector<std::string> Master::log() const {
  std::lock_guard<std::mutex> g(mu_);
  return log_;
}

size_t Master::injected_count() const {
  std::lock_guard<std::mutex> g(mu_);
  return injected_;
}

double Master::elapsed() const { return config_.clock->now() - start_; }

void Master::poll_timer() {
  if (!help_ && elapsed() >= config_.timer_m)
    help_ = true;
}

bool Master::past_deadline() const { return elapsed() >= config_.timeout; }

bool Master::interrupted() {
  poll_timer();
  return stop_ || past_deadline();
}

std::vector<Witness> Master::drain_inbox() {
  std::lock_guard<std::mutex> g(mu_);
  std::vector<Witness> out(std::make_move_iterator(inbox_.begin()),
                           std::make_move_iterator(inbox_.end()));
  inbox_.clear();
  return out;
}

bool Master::inbox_exhausted() const {
  std::lock_guard<std::mutex> g(mu_);
  return closed_ && inbox_.empty();
}

void Master::wait_inbox(double seconds) {
  std::unique_lock<std::mutex> lk(mu_);
  cv_.wait_for(lk, std::chrono::duration<double>(seconds),
               [&] { return !inbox_.empty() || closed_ || stop_; });
}

void Master::note(const std::string &line) {
  {
    std::lock_guard<std::mutex> g(mu_);
    log_.push_back(line);
  }
  if (config_.on_log)
    config_.on_log(line);
}

VerifierVerdict Master::halted() const {
  VerifierVerdict v;
  if (stop_) {
    v.verdict = Verdict::Unknown;
    v.detail = "stopped";
  } else {
    v.verdict = Verdict::Timeout;
    v.detail = "time limit reached";
  }
  return v;
}

std::unique_ptr<Master> make_master(const std::string &name) {
  if (name == "kind")
    return std::make_unique<KInductionMaster>();
  if (name == "predabs")
    return std::make_unique<PredAbsMaster>();
  throw Error("unknown master '" + name + "' (expected kind or predabs)");
}

} // namespace coopver
