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

#include "coopver/unroll.hpp"

#include <deque>

namespace coopver {

Unrolling::Unrolling(const Cfa &cfa, BitBlaster &bb, int first_layer, int last_layer)
    : cfa_(cfa), bb_(bb), first_(first_layer), last_(last_layer) {
  const size_t n = cfa.num_locations();
  std::vector<int> indeg(n, 0);
  for (const Edge &e : cfa.edges)
    if (!cfa.is_loop_head[e.dst])
      ++indeg[e.dst];
  std::deque<int> ready;
  for (size_t l = 0; l < n; ++l)
    if (indeg[l] == 0)
      ready.push_back(static_cast<int>(l));
  while (!ready.empty()) {
    int l = ready.front();
    ready.pop_front();
    topo_.push_back(l);
    for (int eid : cfa.out_edges[l]) {
      const Edge &e = cfa.edges[eid];
      if (!cfa.is_loop_head[e.dst] && --indeg[e.dst] == 0)
        ready.push_back(e.dst);
    }
  }
  if (topo_.size() != n)
    throw Error("control flow has a cycle that avoids every loop head");
  topo_pos_.assign(n, 0);
  for (size_t i = 0; i < n; ++i)
    topo_pos_[topo_[i]] = static_cast<int>(i);
}

int Unrolling::add_node(int loc, int layer) {
  auto key = std::make_pair(layer, loc);
  auto it = index_.find(key);
  if (it != index_.end())
    return it->second;
  int id = static_cast<int>(nodes_.size());
  nodes_.push_back({loc, layer, bb_.lit_false(), {}, std::nullopt, {}});
  index_.emplace(key, id);
  return id;
}

std::optional<int> Unrolling::find(int loc, int layer) const {
  auto it = index_.find({layer, loc});
  if (it == index_.end())
    return std::nullopt;
  return it->second;
}

void Unrolling::start_initial() {
  int id = add_node(cfa_.initial, first_);
  nodes_[id].start = bb_.lit_true();
  std::vector<Bits> zero(cfa_.symbols.size(), bb_.constant(0));
  starts_.emplace(id, std::move(zero));
}

void Unrolling::start_at_heads(const std::map<int, ExprPtr> &assume) {
  for (int h : cfa_.loop_heads) {
    int id = add_node(h, first_);
    Lit sel = bb_.fresh_lit();
    nodes_[id].start = sel;
    std::vector<Bits> s;
    for (size_t v = 0; v < cfa_.symbols.size(); ++v)
      s.push_back(bb_.fresh());
    auto it = assume.find(h);
    if (it != assume.end() && it->second) {
      std::vector<Lit> defs;
      Lit a = bb_.boolean(it->second, s, &defs);
      bb_.solver().add_clause({~sel, a});
    }
    starts_.emplace(id, std::move(s));
  }
}

void Unrolling::start_at(int loc, const ExprPtr &assume) {
  int id = add_node(loc, first_);
  nodes_[id].start = bb_.lit_true();
  std::vector<Bits> s;
  for (size_t v = 0; v < cfa_.symbols.size(); ++v)
    s.push_back(bb_.fresh());
  if (assume)
    bb_.solver().add_clause({bb_.boolean(assume, s, nullptr)});
  starts_.emplace(id, std::move(s));
}

void Unrolling::build() {
  for (int layer = first_; layer <= last_; ++layer)
    for (int loc : topo_) {
      auto id = find(loc, layer);
      if (id)
        expand(*id);
    }
  starts_.clear();
  posts_.clear();
}

void Unrolling::expand(int id) {
  // finalize reach and state from the start option and the predecessors
  {
    Node &n = nodes_[id];
    std::vector<Lit> options;
    std::vector<const std::vector<Bits> *> states;
    auto st = starts_.find(id);
    if (n.start) {
      options.push_back(*n.start);
      states.push_back(&st->second);
    }
    auto &posts = posts_[id];
    for (size_t i = 0; i < n.preds.size(); ++i) {
      options.push_back(n.preds[i].taken);
      states.push_back(&posts[i]);
    }
    n.reach = bb_.or_all(options);
    if (states.empty()) {
      n.state.assign(cfa_.symbols.size(), bb_.constant(0));
    } else {
      std::vector<Bits> cur = *states.back();
      for (size_t i = states.size() - 1; i-- > 0;)
        for (size_t v = 0; v < cur.size(); ++v)
          cur[v] = bb_.ite(options[i], (*states[i])[v], cur[v]);
      n.state = std::move(cur);
    }
    posts_.erase(id);
  }
  if (nodes_[id].reach == bb_.lit_false())
    return;

  const int loc = nodes_[id].loc;
  const int layer = nodes_[id].layer;
  for (int eid : cfa_.out_edges[loc]) {
    const Edge &e = cfa_.edges[eid];
    int next_layer = cfa_.is_loop_head[e.dst] ? layer + 1 : layer;
    if (next_layer > last_)
      continue;
    const Node &n = nodes_[id];
    std::vector<Bits> post = n.state;
    std::vector<Lit> defs;
    Lit taken = n.reach;
    std::optional<Bits> havoc;
    switch (e.op.kind) {
    case OpKind::Assume:
      taken = bb_.mk_and(taken, bb_.boolean(e.op.expr, n.state, &defs));
      break;
    case OpKind::Assign:
      post[e.op.var] = bb_.arith(e.op.expr, n.state, &defs);
      break;
    case OpKind::Havoc:
      havoc = bb_.fresh();
      post[e.op.var] = *havoc;
      break;
    default:
      break;
    }
    for (Lit d : defs)
      taken = bb_.mk_and(taken, d);
    if (taken == bb_.lit_false())
      continue;
    int dst = add_node(e.dst, next_layer);
    nodes_[dst].preds.push_back({id, eid, taken, havoc});
    posts_[dst].push_back(std::move(post));
  }
}

Lit Unrolling::holds(int node, const ExprPtr &e) {
  return bb_.boolean(e, nodes_[node].state, nullptr);
}

Lit Unrolling::violation(int node, const ExprPtr &phi) {
  std::vector<Lit> defs;
  Lit p = bb_.boolean(phi, nodes_[node].state, &defs);
  Lit v = bb_.mk_and(nodes_[node].reach, ~p);
  for (Lit d : defs)
    v = bb_.mk_and(v, d);
  return v;
}

void Unrolling::assume_at(int loc, const ExprPtr &inv) {
  for (size_t i = 0; i < nodes_.size(); ++i)
    if (nodes_[i].loc == loc)
      bb_.solver().add_clause({~nodes_[i].reach, holds(static_cast<int>(i), inv)});
}

int Unrolling::trace_start(int node) const {
  const SatSolver &s = bb_.solver();
  for (;;) {
    const Node &n = nodes_[node];
    if (n.start && s.model(*n.start))
      return node;
    int next = -1;
    for (const Pred &p : n.preds)
      if (s.model(p.taken)) {
        next = p.node;
        break;
      }
    if (next < 0)
      throw Error("unrolling trace: node is not reached in the model");
    node = next;
  }
}

std::vector<std::pair<int, uint64_t>> Unrolling::trace(int node) const {
  const SatSolver &s = bb_.solver();
  std::vector<std::pair<int, uint64_t>> rev;
  for (;;) {
    const Node &n = nodes_[node];
    if (n.start && s.model(*n.start))
      break;
    const Pred *taken = nullptr;
    for (const Pred &p : n.preds)
      if (s.model(p.taken)) {
        taken = &p;
        break;
      }
    if (!taken)
      throw Error("unrolling trace: node is not reached in the model");
    rev.push_back({taken->edge, taken->havoc ? bb_.model_value(*taken->havoc) : 0});
    node = taken->node;
  }
  return {rev.rbegin(), rev.rend()};
}

std::optional<Counterexample> concretize(const Cfa &cfa, const SafetyProperty &prop,
                                         const std::vector<std::pair<int, uint64_t>> &edges) {
  Executor ex(cfa);
  Counterexample cex;
  cex.property = prop;
  State s(cfa.symbols.size(), 0);
  int loc = cfa.initial;
  for (auto [eid, hv] : edges) {
    const Edge &e = cfa.edges[eid];
    if (e.src != loc)
      return std::nullopt;
    auto next = ex.step(eid, s, hv);
    if (!next)
      return std::nullopt;
    cex.path.steps.push_back({s, loc, eid});
    s = std::move(*next);
    loc = e.dst;
  }
  cex.path.steps.push_back({s, loc, -1});
  if (loc != prop.location || !ex.violates(prop, s))
    return std::nullopt;
  cex.violated_at = cex.path.steps.size() - 1;
  if (!replay(cfa, cex))
    return std::nullopt;
  return cex;
}

} // namespace coopver
