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

#include "coopver/cfa.hpp"

#include <openssl/sha.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace coopver {

Operation Operation::assume(ExprPtr c, bool then_branch) {
  Operation op;
  op.kind = OpKind::Assume;
  op.expr = std::move(c);
  op.then_branch = then_branch;
  return op;
}

Operation Operation::assign(std::string var, int index, ExprPtr rhs) {
  Operation op;
  op.kind = OpKind::Assign;
  op.name = std::move(var);
  op.var = index;
  op.expr = std::move(rhs);
  return op;
}

Operation Operation::havoc(std::string var, int index) {
  Operation op;
  op.kind = OpKind::Havoc;
  op.name = std::move(var);
  op.var = index;
  return op;
}

Operation Operation::call(std::string callee) {
  Operation op;
  op.kind = OpKind::Call;
  op.name = std::move(callee);
  return op;
}

Operation Operation::ret() { return Operation{}; }

Operation Operation::error_label() {
  Operation op;
  op.kind = OpKind::ErrorLabel;
  return op;
}

std::string to_string(const Operation &op) {
  switch (op.kind) {
  case OpKind::Assume:
    return "assume(" + to_string(op.expr) + ")";
  case OpKind::Assign:
    return op.name + " = " + to_string(op.expr);
  case OpKind::Havoc:
    return op.name + " = nondet()";
  case OpKind::Call:
    return op.name + "()";
  case OpKind::Return:
    return "return";
  case OpKind::ErrorLabel:
    return "Error:";
  }
  return "?";
}

std::string to_string(EncodingStyle s) {
  switch (s) {
  case EncodingStyle::ErrorLabel:
    return "error_label";
  case EncodingStyle::VerifierErrorCall:
    return "verifier_error_call";
  case EncodingStyle::AssertStmt:
    return "assert_stmt";
  }
  return "?";
}

std::optional<EncodingStyle> parse_encoding_style(std::string_view s) {
  if (s == "error_label")
    return EncodingStyle::ErrorLabel;
  if (s == "verifier_error_call")
    return EncodingStyle::VerifierErrorCall;
  if (s == "assert_stmt" || s == "assert")
    return EncodingStyle::AssertStmt;
  return std::nullopt;
}

const LoopInfo *Cfa::loop_of_head(int head) const {
  for (const LoopInfo &l : loops)
    if (l.head == head)
      return &l;
  return nullptr;
}

std::vector<SafetyProperty> extract_properties(const Cfa &cfa) {
  std::vector<SafetyProperty> out;
  for (const Edge &e : cfa.edges) {
    if (e.op.kind != OpKind::ErrorLabel)
      continue;
    const auto &in = cfa.in_edges[e.src];
    if (in.size() == 1 && cfa.edges[in[0]].op.kind == OpKind::Assume) {
      const Edge &guard = cfa.edges[in[0]];
      out.push_back({guard.src, mk_not(guard.op.expr)});
    } else {
      out.push_back({e.src, Expr::bool_lit(false)});
    }
  }
  if (out.empty())
    throw Error("no error label found in " + cfa.path);
  std::stable_sort(out.begin(), out.end(),
                   [](const SafetyProperty &a, const SafetyProperty &b) {
                     return a.location < b.location;
                   });
  return out;
}

SafetyProperty extract_property(const Cfa &cfa) { return extract_properties(cfa).front(); }

std::string sha256_hex(std::string_view text) {
  unsigned char digest[SHA256_DIGEST_LENGTH];
  SHA256(reinterpret_cast<const unsigned char *>(text.data()), text.size(), digest);
  std::string out;
  char buf[3];
  for (unsigned char b : digest) {
    std::snprintf(buf, sizeof buf, "%02x", b);
    out += buf;
  }
  return out;
}

std::string read_text_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

} // namespace coopver
