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
// Benchmark harness: task lists, per-task isolated runs and the CSV
// artifacts (results, summary, quantile and scatter tables).
//
//===----------------------------------------------------------------------===//
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "coopver/orchestrator.hpp"

namespace coopver {

enum class Expected { True, False, Unknown };

std::string to_string(Expected e);
Expected parse_expected(const std::string &s);

struct TaskEntry {
  std::string file; // relative to the task list's directory
  Expected expected = Expected::Unknown;
  int width = 8;
};

/// CSV with header `file,expected,width`.
std::vector<TaskEntry> load_tasks(const std::string &csv_path);
std::string write_tasks(const std::vector<TaskEntry> &tasks);

/// Inverse of CoopConfig::run_name for built-in helpers, e.g.
/// `kind`, `kind-affine-5`, `predabs-affine-interval-10-wait-20`.
CoopConfig parse_run_name(const std::string &name);

struct BenchRow {
  std::string task;
  std::string config;
  Expected expected = Expected::Unknown;
  Verdict verdict = Verdict::Unknown;
  bool correct = false;
  bool incorrect = false;
  double wall = 0;
  double cpu = 0;
  bool helped = false;
  size_t injected = 0;
  std::string note;
};

struct SummaryRow {
  std::string config;
  std::string baseline;
  int correct = 0;
  int correct_true = 0;
  int correct_false = 0;
  int incorrect = 0;
  int additional = 0;
  int additional_true = 0;
  int additional_false = 0;
};

struct BenchOptions {
  /// The coopver executable used to run each task in its own process.
  std::string exe;
  double timeout = 60;
  /// Address-space limit per task in MiB; 0 disables it.
  size_t memory_mb = 4096;
  int jobs = 1;
};

/// Runs one task under one configuration in a child process with wall
/// and memory limits; the process group is killed when the slot ends.
BenchRow run_task(const BenchOptions &opts, const std::string &task_path, const TaskEntry &task,
                  const std::string &config);

std::vector<BenchRow> run_bench(const BenchOptions &opts, const std::string &tasks_csv,
                                const std::vector<std::string> &configs);

/// Standalone rows serve as the baseline of every cooperative
/// configuration with the same master.
std::vector<SummaryRow> summarize(const std::vector<BenchRow> &rows);

std::string results_csv(const std::vector<BenchRow> &rows);
std::vector<BenchRow> parse_results_csv(const std::string &text);
std::string summary_csv(const std::vector<SummaryRow> &rows);
/// n-th fastest correct result per configuration.
std::string quantile_csv(const std::vector<BenchRow> &rows);
/// Per task: standalone versus cooperative wall time.
std::string scatter_csv(const std::vector<BenchRow> &rows);

} // namespace coopver
