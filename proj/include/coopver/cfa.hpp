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
// Control-flow automata for the mini language. Locations are numbered in
// statement order; the last location is the unique exit (a leaf). Every
// statement contributes exactly one edge (conditionals one per branch),
// except bare declarations, which contribute none.
//
//===----------------------------------------------------------------------===//
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "coopver/eval.hpp"
#include "coopver/expr.hpp"

namespace coopver {

struct SourceSpan {
  int start_line = 0;
  int start_col = 0;
  int end_line = 0;
  int end_col = 0;

  bool touches(int first, int last) const { return start_line <= last && first <= end_line; }
};

enum class OpKind { Assume, Assign, Havoc, Call, Return, ErrorLabel };

struct Operation {
  OpKind kind = OpKind::Return;
  /// Condition for Assume, right-hand side for Assign.
  ExprPtr expr;
  /// Target variable for Assign/Havoc, callee for Call.
  std::string name;
  /// Symbol index of the target for Assign/Havoc, -1 otherwise.
  int var = -1;
  /// For Assume: true on the then/loop-entry branch, false on else/exit.
  bool then_branch = true;

  static Operation assume(ExprPtr c, bool then_branch);
  static Operation assign(std::string var, int index, ExprPtr rhs);
  static Operation havoc(std::string var, int index);
  static Operation call(std::string callee);
  static Operation ret();
  static Operation error_label();
};

std::string to_string(const Operation &op);

struct Edge {
  int id;
  int src;
  int dst;
  Operation op;
  SourceSpan span;
};

struct LoopInfo {
  int head;
  int first_line; // the loop statement
  int last_line;  // end of the loop body
};

enum class EncodingStyle { ErrorLabel, VerifierErrorCall, AssertStmt };

std::string to_string(EncodingStyle s);
std::optional<EncodingStyle> parse_encoding_style(std::string_view s);

/// A syntactic occurrence of a property encoding, recorded so that the
/// mapper can rewrite it in place.
struct PropertySite {
  EncodingStyle style;
  int location; // guarding conditional (or the assert statement)
  ExprPtr condition;
  size_t begin_offset; // byte range of the whole encoding in the source
  size_t end_offset;
  int start_line;
  int end_line;
};

struct SafetyProperty {
  int location = 0;
  ExprPtr condition;
};

struct Cfa {
  std::string path;
  std::string program_hash;
  SymbolTable symbols;
  int initial = 0;
  int exit = 0;
  std::vector<SourceSpan> line_map; // indexed by location id
  std::vector<Edge> edges;
  std::vector<std::vector<int>> out_edges;
  std::vector<std::vector<int>> in_edges;
  std::vector<int> loop_heads;
  std::vector<LoopInfo> loops;
  std::vector<bool> is_loop_head;
  std::vector<PropertySite> property_sites;

  size_t num_locations() const { return line_map.size(); }
  int line_of(int loc) const { return line_map[loc].start_line; }
  const LoopInfo *loop_of_head(int head) const;
};

struct ParseOptions {
  int width = 8;
  std::string path = "<input>";
};

/// Builds the CFA of a program. Throws ParseError (syntax, with position)
/// or Error (undeclared variables, unsupported constructs).
Cfa parse_program(std::string_view text, const ParseOptions &opts = {});
Cfa parse_file(const std::string &path, const ParseOptions &opts = {});

/// One property per error label. Throws Error when there is none.
std::vector<SafetyProperty> extract_properties(const Cfa &cfa);
/// The first property in location order.
SafetyProperty extract_property(const Cfa &cfa);

std::string sha256_hex(std::string_view text);
std::string read_text_file(const std::string &path);

} // namespace coopver
