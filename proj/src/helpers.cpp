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

#include "coopver/helpers.hpp"

#include <map>

namespace coopver {

std::string to_string(HelperStatus s) {
  switch (s) {
  case HelperStatus::Completed:
    return "completed";
  case HelperStatus::TimedOut:
    return "timed_out";
  case HelperStatus::Failed:
    return "failed";
  case HelperStatus::Stopped:
    return "stopped";
  }
  return "failed";
}

HelperResult run_builtin_helper(const std::string &name, const Cfa &cfa,
                                const SafetyProperty &prop, const std::atomic<bool> *cancel) {
  if (name == "interval") {
    IntervalOptions o;
    o.cancel = cancel;
    return interval_analysis(cfa, o);
  }
  if (name == "affine") {
    AffineOptions o;
    o.cancel = cancel;
    return affine_equality_analysis(cfa, o);
  }
  if (name == "template") {
    TemplateOptions o;
    o.cancel = cancel;
    return template_guess_check(cfa, prop, o);
  }
  throw Error("unknown helper '" + name + "' (expected interval, affine or template)");
}

Witness helper_witness(const Cfa &cfa, const HelperResult &r, const std::string &producer) {
  std::map<int, std::vector<ExprPtr>> parts;
  for (const auto &li : r.invariants)
    if (li.invariant && !is_trivial(li.invariant))
      parts[li.loop_head].push_back(li.invariant);
  std::map<int, ExprPtr> invs;
  for (auto &[h, ps] : parts)
    invs[h] = conjunction(ps);
  return skeleton_witness(cfa, invs, producer);
}

} // namespace coopver
