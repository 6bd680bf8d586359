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
// Correctness witnesses: automata whose transitions carry source-code
// guards and whose states carry invariants, serialized as GraphML.
//
//===----------------------------------------------------------------------===//
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "coopver/cfa.hpp"

namespace coopver {

enum class GuardType { Then, Else, EnterFunc, EnterLoopHead, Otherwise };

std::string to_string(GuardType g);

struct SourceCodeGuard {
  int startline = 0;
  int endline = 0;
  GuardType type = GuardType::Otherwise;
};

struct WitnessState {
  std::string id;
  ExprPtr invariant; // null when absent
  std::string scope;
  bool entry = false;
  bool sink = false;
  std::map<std::string, std::string> extras;
};

struct WitnessTransition {
  std::string source;
  std::string target;
  SourceCodeGuard guard;
  std::map<std::string, std::string> extras;
};

struct WitnessMetadata {
  std::string producer;
  std::string program_hash;
  std::string creation_time;
  std::map<std::string, std::string> extras;
};

struct Witness {
  std::vector<WitnessState> states;
  std::string initial;
  std::vector<WitnessTransition> transitions;
  WitnessMetadata metadata;

  const WitnessState *state(const std::string &id) const;
};

struct LocatedInvariant {
  int loop_head = 0;
  ExprPtr invariant;
  std::string source;
};

/// Deterministic GraphML rendering; key declarations, graph data, nodes and
/// edges are emitted in a fixed order.
std::string write_graphml(const Witness &w);
/// Throws Error on malformed documents, a missing entry node, dangling
/// transitions or unparseable invariants (naming the state).
Witness read_graphml(const std::string &doc);

bool is_trivial_witness(const Witness &w);

struct MatchOptions {
  bool force = false;
  std::string source = "witness";
};

struct MatchResult {
  std::vector<LocatedInvariant> invariants;
  std::vector<std::string> diagnostics;
};

/// Co-simulates the witness with the CFA and returns the non-trivial
/// invariants of witness states reached together with loop heads (one
/// conjunction per head). Throws Error on a program hash mismatch unless
/// `force` is set.
MatchResult match_to_cfa(const Witness &w, const Cfa &cfa, const MatchOptions &opts = {});

/// A witness isomorphic to the CFA: one state per location (`q<id>`), one
/// transition per edge, the given invariants attached to loop-head states.
Witness skeleton_witness(const Cfa &cfa, const std::map<int, ExprPtr> &invariants,
                         const std::string &producer);

std::string current_timestamp();

} // namespace coopver
