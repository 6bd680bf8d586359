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
// Time sources. Everything that waits or measures deadlines goes through
// a Clock so that scheduling logic can run on simulated time.
//
//===----------------------------------------------------------------------===//
#pragma once

#include <chrono>
#include <limits>
#include <memory>
#include <mutex>

namespace coopver {

constexpr double kForever = std::numeric_limits<double>::infinity();

class Clock {
public:
  virtual ~Clock() = default;
  /// Seconds since an arbitrary origin.
  virtual double now() const = 0;
};

class RealClock : public Clock {
public:
  RealClock() : origin_(std::chrono::steady_clock::now()) {}
  double now() const override {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - origin_).count();
  }

private:
  std::chrono::steady_clock::time_point origin_;
};

class VirtualClock : public Clock {
public:
  double now() const override {
    std::lock_guard<std::mutex> g(mu_);
    return t_;
  }
  void set(double t) {
    std::lock_guard<std::mutex> g(mu_);
    t_ = t;
  }
  void advance(double dt) {
    std::lock_guard<std::mutex> g(mu_);
    t_ += dt;
  }

private:
  mutable std::mutex mu_;
  double t_ = 0;
};

std::shared_ptr<Clock> real_clock();

} // namespace coopver
