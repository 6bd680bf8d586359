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

#include <cmath>
#include <sstream>

#include "coopver/scripted.hpp"

namespace coopver {

namespace {

std::string secs(double s) {
  if (std::isinf(s))
    return "inf";
  std::ostringstream o;
  o << s;
  return o.str();
}

} // namespace

ScriptedMaster::ScriptedMaster(MasterScript script, std::shared_ptr<Clock> clock, std::string name)
    : script_(std::move(script)), clock_(std::move(clock)), name_(std::move(name)) {}

void ScriptedMaster::start(double timer_m) {
  running_ = true;
  started_ = clock_->now();
  timer_ = timer_m;
  calls_.push_back({started_, "start(" + secs(timer_m) + ")"});
}

bool ScriptedMaster::requests_help() {
  if (!running_)
    return false;
  double e = clock_->now() - started_;
  return e >= timer_ || (script_.help_after && e >= *script_.help_after);
}

bool ScriptedMaster::has_solution() {
  if (!running_)
    return false;
  double now = clock_->now();
  if (script_.solve_after && now - started_ >= *script_.solve_after)
    return true;
  return injected_at_ && script_.solve_after_injection &&
         now - std::max(*injected_at_, started_) >= *script_.solve_after_injection;
}

VerifierVerdict ScriptedMaster::solution() {
  VerifierVerdict v;
  v.verdict = has_solution() ? script_.verdict : Verdict::Unknown;
  v.detail = name_;
  return v;
}

void ScriptedMaster::stop() {
  running_ = false;
  calls_.push_back({clock_->now(), "stop"});
}

void ScriptedMaster::inject(std::vector<Witness> witnesses) {
  calls_.push_back({clock_->now(), "inject(" + std::to_string(witnesses.size()) + ")"});
  if (!injected_at_)
    injected_at_ = clock_->now();
  for (auto &w : witnesses)
    injected_.push_back(std::move(w));
}

void ScriptedMaster::close_inbox() { calls_.push_back({clock_->now(), "close_inbox"}); }

ScriptedHelper::ScriptedHelper(std::string name, HelperScript script, const Cfa &cfa,
                               std::shared_ptr<Clock> clock)
    : name_(std::move(name)), script_(std::move(script)), cfa_(cfa), clock_(std::move(clock)) {}

void ScriptedHelper::start(double timeout_h) {
  started_ = true;
  t0_ = clock_->now();
  timeout_ = timeout_h;
}

bool ScriptedHelper::finished() {
  if (final_)
    return true;
  if (!started_)
    return false;
  double e = clock_->now() - t0_;
  if (script_.finish_after && e >= *script_.finish_after && *script_.finish_after < timeout_) {
    final_ = script_.status;
  } else if (e >= timeout_) {
    final_ = HelperStatus::TimedOut;
  } else {
    return false;
  }
  ended_ = clock_->now();
  return true;
}

HelperResult ScriptedHelper::result() {
  HelperResult r;
  r.status = final_.value_or(HelperStatus::Failed);
  r.elapsed = ended_ - t0_;
  if (r.status == HelperStatus::Completed)
    for (const auto &[h, e] : script_.invariants)
      r.invariants.push_back({h, e, name_});
  return r;
}

Witness ScriptedHelper::solution() {
  std::map<int, ExprPtr> inv;
  if (final_ == HelperStatus::Completed)
    inv = script_.invariants;
  return skeleton_witness(cfa_, inv, name_);
}

void ScriptedHelper::stop() {
  if (!final_ && started_) {
    final_ = HelperStatus::Stopped;
    ended_ = clock_->now();
  }
}

} // namespace coopver
