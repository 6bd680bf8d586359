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

#include <algorithm>
#include <cmath>
#include <ctime>
#include <sstream>
#include <thread>

#include <sys/resource.h>

#include "coopver/orchestrator.hpp"

namespace coopver {

namespace {

std::string secs(double s) {
  if (std::isinf(s))
    return "inf";
  std::ostringstream o;
  o << s;
  return o.str();
}

double cpu_seconds() {
  rusage self{}, kids{};
  ::getrusage(RUSAGE_SELF, &self);
  ::getrusage(RUSAGE_CHILDREN, &kids);
  auto tv = [](const timeval &t) { return t.tv_sec + t.tv_usec / 1e6; };
  return tv(self.ru_utime) + tv(self.ru_stime) + tv(kids.ru_utime) + tv(kids.ru_stime);
}

} // namespace

Coordinator::Coordinator(const CoopConfig &config, std::unique_ptr<MasterHandle> master,
                         std::vector<std::unique_ptr<HelperHandle>> helpers,
                         std::shared_ptr<Clock> clock, double tick)
    : config_(config), master_(std::move(master)), helpers_(std::move(helpers)),
      clock_(clock ? std::move(clock) : real_clock()), tick_(tick) {
  report_.run_name = config_.run_name();
  for (const auto &h : helpers_)
    report_.helpers.push_back({h->name(), false, false, false, {}});
}

void Coordinator::wait_step() {
  if (auto *v = dynamic_cast<VirtualClock *>(clock_.get()))
    v->advance(tick_);
  else
    std::this_thread::sleep_for(std::chrono::duration<double>(tick_));
}

bool Coordinator::past_deadline() const { return clock_->now() - t0_ >= config_.timeout; }

void Coordinator::event(const std::string &what) {
  std::lock_guard<std::mutex> g(mu_);
  report_.events.push_back({clock_->now() - t0_, what});
}

void Coordinator::stop_all() {
  std::unique_lock<std::mutex> g(mu_);
  if (done_)
    return;
  stopped_.store(true);
  if (std::this_thread::get_id() == runner_)
    return;
  idle_.wait(g, [&] { return !running_; });
}

RunReport Coordinator::report() const {
  std::lock_guard<std::mutex> g(mu_);
  return report_;
}

RunReport Coordinator::finish(VerifierVerdict v) {
  event("result " + to_string(v.verdict));
  std::lock_guard<std::mutex> g(mu_);
  report_.verdict = std::move(v);
  report_.wall = clock_->now() - t0_;
  done_ = true;
  return report_;
}

RunReport Coordinator::run() {
  {
    std::lock_guard<std::mutex> g(mu_);
    if (done_)
      return report_;
    running_ = true;
    runner_ = std::this_thread::get_id();
  }
  struct Idle {
    Coordinator *c;
    ~Idle() {
      std::lock_guard<std::mutex> g(c->mu_);
      c->running_ = false;
      c->idle_.notify_all();
    }
  } idle{this};
  double cpu0 = cpu_seconds();
  t0_ = clock_->now();
  auto with_cpu = [&](RunReport r) {
    r.cpu = cpu_seconds() - cpu0;
    std::lock_guard<std::mutex> g(mu_);
    report_.cpu = r.cpu;
    return r;
  };
  auto abort = [&]() {
    VerifierVerdict v;
    if (stopped_.load()) {
      v.verdict = Verdict::Unknown;
      v.detail = "stopped";
    } else {
      v.verdict = Verdict::Timeout;
      v.detail = "task timeout of " + secs(config_.timeout) + "s";
    }
    return v;
  };

  // Lines 1-4: the master runs alone until it asks for help or is done.
  if (helpers_.empty())
    master_->close_inbox();
  event("master start timerM=" + secs(config_.timer_m));
  master_->start(config_.timer_m);
  while (!(master_->requests_help() || master_->has_solution())) {
    if (stopped_.load() || past_deadline()) {
      master_->stop();
      return with_cpu(finish(abort()));
    }
    wait_step();
  }
  bool solved = master_->has_solution();
  {
    std::lock_guard<std::mutex> g(mu_);
    report_.master_solo = clock_->now() - t0_;
    report_.helped = !solved;
  }
  if (solved) {
    event("master solved alone");
    return with_cpu(finish(master_->solution()));
  }
  event("master requestsForHelp");

  // Lines 5-12: helpers run in parallel.
  double helper_start = clock_->now();
  double remaining = config_.timeout - (helper_start - t0_);
  double th = std::min(config_.timeout_h, remaining);
  for (size_t i = 0; i < helpers_.size(); ++i) {
    event("helper " + helpers_[i]->name() + " start timeoutH=" + secs(th));
    helpers_[i]->start(th);
    std::lock_guard<std::mutex> g(mu_);
    report_.helpers[i].started = true;
  }
  std::vector<Witness> witnesses;
  std::vector<bool> done(helpers_.size(), false);
  auto settle = [&](size_t i) {
    done[i] = true;
    HelperResult r = helpers_[i]->result();
    std::lock_guard<std::mutex> g(mu_);
    report_.helpers[i].result = r;
  };
  auto mark = [&](size_t i, bool trivial) {
    std::lock_guard<std::mutex> g(mu_);
    (trivial ? report_.helpers[i].trivial : report_.helpers[i].injected) = true;
  };
  auto pending = [&] { return std::count(done.begin(), done.end(), false) > 0; };
  auto stop_pending = [&](const std::string &why) {
    for (size_t j = 0; j < helpers_.size(); ++j)
      if (!done[j]) {
        helpers_[j]->stop();
        settle(j);
        event("helper " + helpers_[j]->name() + " stopped (" + why + ")");
      }
  };
  while (pending()) {
    for (size_t i = 0; i < helpers_.size(); ++i) {
      if (done[i] || !helpers_[i]->finished())
        continue;
      settle(i);
      HelperResult r = helpers_[i]->result();
      std::string status = to_string(r.status);
      if (r.status != HelperStatus::Completed) {
        event("helper " + helpers_[i]->name() + " " + status);
        continue;
      }
      Witness w = helpers_[i]->solution();
      if (is_trivial_witness(w)) {
        mark(i, true);
        event("helper " + helpers_[i]->name() + " completed with a trivial witness");
        continue;
      }
      witnesses.push_back(std::move(w));
      mark(i, false);
      event("helper " + helpers_[i]->name() + " completed with a witness");
      if (config_.term_after_first_inv)
        stop_pending("termAfterFirstInv");
    }
    if (!pending())
      break;
    if (stopped_.load() || past_deadline()) {
      stop_pending("cancelled");
      master_->stop();
      return with_cpu(finish(abort()));
    }
    if (master_->has_solution()) {
      stop_pending("master solved");
      break;
    }
    wait_step();
  }
  {
    std::lock_guard<std::mutex> g(mu_);
    report_.helper_phase = clock_->now() - helper_start;
  }

  // Lines 13-14.
  if (master_->has_solution()) {
    event("master solved during the helper phase");
    return with_cpu(finish(master_->solution()));
  }

  // Lines 15-22.
  double post_start = clock_->now();
  if (!witnesses.empty()) {
    if (config_.restart_master) {
      master_->stop();
      event("master stop");
    }
    master_->inject(witnesses);
    {
      std::lock_guard<std::mutex> g(mu_);
      report_.witnesses_injected = witnesses.size();
    }
    event("master inject " + std::to_string(witnesses.size()));
    master_->close_inbox();
    if (config_.restart_master) {
      master_->start(kForever);
      event("master start timerM=inf");
    }
  } else if (!helpers_.empty()) {
    master_->close_inbox();
    event("no witnesses; master continues");
  }

  auto set_post = [&](double d) {
    std::lock_guard<std::mutex> g(mu_);
    report_.post_injection = d;
  };

  // Lines 23-24.
  while (!master_->has_solution()) {
    if (stopped_.load() || past_deadline()) {
      master_->stop();
      set_post(clock_->now() - post_start);
      return with_cpu(finish(abort()));
    }
    wait_step();
  }
  set_post(clock_->now() - post_start);
  return with_cpu(finish(master_->solution()));
}

} // namespace coopver
