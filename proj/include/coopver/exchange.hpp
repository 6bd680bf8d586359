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
// Property re-encoding (mapper), translation of helper-namespace
// invariants into witnesses (adapter), and the subprocess protocol for
// black-box helpers.
//
//===----------------------------------------------------------------------===//
#pragma once

#include <atomic>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "coopver/cfa.hpp"
#include "coopver/helpers.hpp"
#include "coopver/witness.hpp"

namespace coopver {

/// Rewrites every property encoding of the program into \p target.
/// Untouched bytes are copied verbatim and each rewritten encoding keeps
/// its number of line breaks, so line numbers stay aligned.
std::string map_property(std::string_view program, EncodingStyle target);

/// Source text of one encoding of phi.
std::string encode_property(const ExprPtr &phi, EncodingStyle style);

struct NamespaceMap {
  /// Helper variable -> program expression (usually a variable).
  std::map<std::string, ExprPtr> vars;
  /// Helper location key -> source line.
  std::map<std::string, int> locations;

  /// Throws Error unless variable-to-variable entries are injective and
  /// every mapped line exists in the program.
  void check(const Cfa &cfa) const;
};

struct RawInvariant {
  std::string location_key;
  std::string expression;
};

struct RawOutput {
  std::vector<RawInvariant> invariants;
  NamespaceMap nsmap;
};

/// Line format: `KEY<TAB>EXPR` entries, then a `MAP` line followed by
/// `var<TAB>HELPER<TAB>PROGRAM_EXPR` and `loc<TAB>KEY<TAB>LINE` rows.
/// Blank lines and lines starting with '#' are ignored.
RawOutput parse_raw_output(const std::string &text);
std::string write_raw_output(const RawOutput &raw);

struct AdaptResult {
  Witness witness;
  std::vector<LocatedInvariant> invariants;
  std::vector<std::string> diagnostics;
};

AdaptResult adapt(const std::vector<RawInvariant> &raw, const NamespaceMap &nsmap, const Cfa &cfa,
                  const std::string &producer = "adapter");

/// The innermost loop whose statement range contains \p line, or nullopt
/// when no loop or more than one innermost loop qualifies.
std::optional<int> snap_to_loop_head(const Cfa &cfa, int line);

enum class HelperOutputKind { WitnessDocument, RawInvariants };

struct ExternalHelperSpec {
  std::string name;
  std::string executable;
  EncodingStyle encoding = EncodingStyle::ErrorLabel;
  HelperOutputKind output = HelperOutputKind::WitnessDocument;
  double timeout = 60;
  std::vector<std::string> extra_args;

  /// Throws Error unless the executable exists and is runnable.
  void check() const;
};

struct ExternalRun {
  HelperResult result;
  std::string stdout_text;
  std::string stderr_text;
  std::string output_text;
  int exit_code = -1;
};

/// Runs the helper on the program in a fresh working directory, killing
/// its process group on timeout or when \p cancel becomes true.
ExternalRun run_external_helper(const ExternalHelperSpec &spec, const std::string &program,
                                const Cfa &cfa, const std::atomic<bool> *cancel = nullptr);

} // namespace coopver
