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

#include <thread>

#include "coopver/orchestrator.hpp"

namespace coopver {

namespace {

class ThreadMaster : public MasterHandle {
public:
  ThreadMaster(std::unique_ptr<Master> m, const Cfa &cfa, const SafetyProperty &prop,
               MasterConfig base)
      : m_(std::move(m)), cfa_(cfa), prop_(prop), base_(std::move(base)) {}
  ~ThreadMaster() override { stop(); }

  std::string name() const override { return m_->name(); }

  void start(double timer_m) override {
    stop();
    MasterConfig cfg = base_;
    cfg.timer_m = timer_m;
    finished_ = false;
    cancelled_ = false;
    th_ = std::thread([this, cfg] {
      VerifierVerdict v;
      try {
        v = m_->run(cfa_, prop_, cfg);
      } catch (const std::exception &e) {
        v.verdict = Verdict::Unknown;
        v.detail = std::string("master crashed: ") + e.what();
      }
      std::lock_guard<std::mutex> g(mu_);
      verdict_ = std::move(v);
      finished_ = true;
    });
  }

  bool requests_help() override { return m_->requests_help(); }

  bool has_solution() override { return finished_.load() && !cancelled_.load(); }

  VerifierVerdict solution() override {
    std::lock_guard<std::mutex> g(mu_);
    return verdict_;
  }

  void stop() override {
    if (!th_.joinable())
      return;
    cancelled_ = true;
    // run() clears the stop flag on entry, so keep asking until it ends
    while (!finished_.load()) {
      m_->stop();
      std::this_thread::sleep_for(std::chrono::milliseconds(1));
    }
    th_.join();
  }

  void inject(std::vector<Witness> witnesses) override { m_->inject(std::move(witnesses)); }
  void close_inbox() override { m_->close_inbox(); }

private:
  std::unique_ptr<Master> m_;
  const Cfa &cfa_;
  SafetyProperty prop_;
  MasterConfig base_;
  std::thread th_;
  std::atomic<bool> finished_{false};
  std::atomic<bool> cancelled_{false};
  std::mutex mu_;
  VerifierVerdict verdict_;
};

class ThreadHelper : public HelperHandle {
public:
  ThreadHelper(HelperEntry h, const Cfa &cfa, const SafetyProperty &prop, std::string program,
               std::shared_ptr<Clock> clock)
      : h_(std::move(h)), cfa_(cfa), prop_(prop), program_(std::move(program)),
        clock_(std::move(clock)) {}
  ~ThreadHelper() override { stop(); }

  std::string name() const override { return h_.name; }

  void start(double timeout_h) override {
    timeout_ = timeout_h;
    t0_ = clock_->now();
    th_ = std::thread([this] {
      HelperResult r;
      try {
        if (h_.external) {
          ExternalHelperSpec spec = *h_.external;
          spec.timeout = timeout_;
          r = run_external_helper(spec, program_, cfa_, &cancel_).result;
        } else {
          r = run_builtin_helper(h_.name, cfa_, prop_, &cancel_);
        }
      } catch (const std::exception &e) {
        r.status = HelperStatus::Failed;
        r.detail = e.what();
      }
      std::lock_guard<std::mutex> g(mu_);
      result_ = std::move(r);
      done_ = true;
    });
  }

  bool finished() override {
    if (done_.load())
      return true;
    if (clock_->now() - t0_ >= timeout_) {
      timed_out_ = true;
      stop();
      return true;
    }
    return false;
  }

  HelperResult result() override {
    std::lock_guard<std::mutex> g(mu_);
    HelperResult r = result_;
    if (timed_out_ && r.status != HelperStatus::Completed) {
      r.status = HelperStatus::TimedOut;
      r.detail = "timed out";
    }
    return r;
  }

  Witness solution() override { return helper_witness(cfa_, result(), h_.name); }

  void stop() override {
    if (!th_.joinable())
      return;
    cancel_ = true;
    th_.join();
  }

private:
  HelperEntry h_;
  const Cfa &cfa_;
  SafetyProperty prop_;
  std::string program_;
  std::shared_ptr<Clock> clock_;
  double timeout_ = kForever;
  double t0_ = 0;
  std::thread th_;
  std::atomic<bool> cancel_{false};
  std::atomic<bool> done_{false};
  bool timed_out_ = false;
  std::mutex mu_;
  HelperResult result_;
};

} // namespace

std::unique_ptr<MasterHandle> make_master_handle(const std::string &name, const Cfa &cfa,
                                                 const SafetyProperty &prop,
                                                 const MasterConfig &base) {
  return std::make_unique<ThreadMaster>(make_master(name), cfa, prop, base);
}

std::unique_ptr<HelperHandle> make_helper_handle(const HelperEntry &h, const Cfa &cfa,
                                                 const SafetyProperty &prop,
                                                 const std::string &program_text,
                                                 std::shared_ptr<Clock> clock) {
  return std::make_unique<ThreadHelper>(h, cfa, prop, program_text, std::move(clock));
}

RunReport run_cooperative(const Cfa &cfa, const SafetyProperty &prop, const CoopConfig &config) {
  config.check();
  auto clock = std::make_shared<RealClock>();
  MasterConfig mc;
  mc.timeout = config.timeout;
  mc.bound_cap = config.bound_cap;
  mc.conflict_budget = config.conflict_budget;
  mc.builtin_aux = config.builtin_aux;
  mc.validate_injections = config.validate_injections;
  mc.clock = clock;
  auto master = make_master_handle(config.master, cfa, prop, mc);
  std::vector<std::unique_ptr<HelperHandle>> helpers;
  for (const auto &h : config.helpers)
    helpers.push_back(make_helper_handle(h, cfa, prop, config.program_text, clock));
  Coordinator c(config, std::move(master), std::move(helpers), clock);
  return c.run();
}

} // namespace coopver
