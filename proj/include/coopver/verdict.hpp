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
#pragma once

#include <optional>
#include <string>

#include "coopver/semantics.hpp"
#include "coopver/witness.hpp"

namespace coopver {

enum class Verdict { True, False, Unknown, Timeout };

std::string to_string(Verdict v);
std::optional<Verdict> parse_verdict(const std::string &s);

struct VerifierVerdict {
  Verdict verdict = Verdict::Unknown;
  std::optional<Counterexample> counterexample;
  std::optional<Witness> witness;
  std::string detail;
};

} // namespace coopver
