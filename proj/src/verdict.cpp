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

#include "coopver/verdict.hpp"

namespace coopver {

std::string to_string(Verdict v) {
  switch (v) {
  case Verdict::True:
    return "true";
  case Verdict::False:
    return "false";
  case Verdict::Unknown:
    return "unknown";
  case Verdict::Timeout:
    return "timeout";
  }
  return "unknown";
}

std::optional<Verdict> parse_verdict(const std::string &s) {
  if (s == "true")
    return Verdict::True;
  if (s == "false")
    return Verdict::False;
  if (s == "unknown")
    return Verdict::Unknown;
  if (s == "timeout")
    return Verdict::Timeout;
  return std::nullopt;
}

} // namespace coopver
