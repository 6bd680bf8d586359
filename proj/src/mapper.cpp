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

#include "coopver/exchange.hpp"

namespace coopver {

std::string encode_property(const ExprPtr &phi, EncodingStyle style) {
  std::string c = to_string(phi);
  switch (style) {
  case EncodingStyle::ErrorLabel:
    return "if (!(" + c + ")) { Error: return 1; }";
  case EncodingStyle::VerifierErrorCall:
    return "if (!(" + c + ")) { verifier_error(); }";
  case EncodingStyle::AssertStmt:
    return "assert(" + c + ");";
  }
  return "";
}

std::string map_property(std::string_view program, EncodingStyle target) {
  Cfa cfa = parse_program(program);
  if (cfa.property_sites.empty())
    throw Error("no property encoding found");
  auto sites = cfa.property_sites;
  std::sort(sites.begin(), sites.end(),
            [](const PropertySite &a, const PropertySite &b) { return a.begin_offset > b.begin_offset; });
  std::string out(program);
  for (const auto &s : sites) {
    if (s.style == target)
      continue;
    std::string_view old = program.substr(s.begin_offset, s.end_offset - s.begin_offset);
    std::string repl = encode_property(s.condition, target);
    repl.append(static_cast<size_t>(std::count(old.begin(), old.end(), '\n')), '\n');
    out.replace(s.begin_offset, s.end_offset - s.begin_offset, repl);
  }
  return out;
}

} // namespace coopver
