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
// Layered unrolling of a CFA into propositional logic. A node is a pair
// (location, layer); every edge entering a loop head moves to the next
// layer, all other edges stay within one. Since each cycle passes through
// a loop head, a layer is acyclic and the whole unrolling is a DAG.
//
// Each node carries a reach literal and a bit-level state. A node whose
// reach literal holds in a model lies on a concrete path segment whose
// states are those of the model.
//
//===----------------------------------------------------------------------===//
#pragma once

#include <map>
#include <optional>
#include <vector>

#include "coopver/bitblast.hpp"
#include "coopver/cfa.hpp"
#include "coopver/semantics.hpp"

namespace coopver {

class Unrolling {
public:
  struct Pred {
    int node;
    int edge;
    Lit taken;
    std::optional<Bits> havoc;
  };
  struct Node {
    int loc;
    int layer;
    Lit reach;
    std::vector<Bits> state;
    /// Arbitrary-start selector when this node may begin a segment.
    std::optional<Lit> start;
    std::vector<Pred> preds;
  };

  Unrolling(const Cfa &cfa, BitBlaster &bb, int first_layer, int last_layer);

  /// The all-zero state at the initial location in the first layer.
  void start_initial();
  /// An arbitrary state at every loop head in the first layer, optionally
  /// constrained by an assumption per head.
  void start_at_heads(const std::map<int, ExprPtr> &assume = {});
  /// An arbitrary state at one location in the first layer.
  void start_at(int loc, const ExprPtr &assume);
  /// Expands all layers. Call after the start_* methods.
  void build();

  const std::vector<Node> &nodes() const { return nodes_; }
  const Node &node(int i) const { return nodes_[i]; }
  std::optional<int> find(int loc, int layer) const;

  /// Literal for e evaluated on a node's state (total semantics).
  Lit holds(int node, const ExprPtr &e);
  /// reach ∧ φ defined ∧ ¬φ at the node.
  Lit violation(int node, const ExprPtr &phi);
  /// Adds clauses reach ⇒ inv at every node of the head's location.
  void assume_at(int loc, const ExprPtr &inv);

  /// Under the solver's current model, walks back from a reached node to a
  /// start node, returning the edges in path order and per edge the
  /// havoc value (0 when the edge does not havoc).
  std::vector<std::pair<int, uint64_t>> trace(int node) const;
  int trace_start(int node) const;

private:
  int add_node(int loc, int layer);
  void expand(int node);

  const Cfa &cfa_;
  BitBlaster &bb_;
  int first_;
  int last_;
  std::vector<int> topo_;     // locations in intra-layer topological order
  std::vector<int> topo_pos_; // position of each location in topo_
  std::vector<Node> nodes_;
  std::map<std::pair<int, int>, int> index_; // (layer, loc) -> node
  // pending until a node is finalized
  std::map<int, std::vector<Bits>> starts_;
  std::map<int, std::vector<std::vector<Bits>>> posts_;
};

/// Replays a traced edge sequence from the all-zero state at the initial
/// location and packages it as a counterexample if the last state violates
/// the property. Returns nullopt when the sequence does not replay.
std::optional<Counterexample> concretize(const Cfa &cfa, const SafetyProperty &prop,
                                         const std::vector<std::pair<int, uint64_t>> &edges);

} // namespace coopver
