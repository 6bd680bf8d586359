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

#include "coopver/oracle.hpp"

#include <deque>
#include <string>
#include <unordered_map>

namespace coopver {

namespace {

enum class Stop { Complete, Found, Budget };

struct Explorer {
  const Cfa &cfa;
  Executor exec;
  BruteForceOptions opts;
  size_t nvars;
  int width;
  bool packed;

  std::vector<int32_t> loc;
  std::vector<int64_t> parent;
  std::vector<int32_t> via;
  std::vector<uint16_t> count;
  std::vector<uint32_t> vals;
  std::unordered_map<uint64_t, int64_t> seen_packed;
  std::unordered_map<std::string, int64_t> seen_wide;

  Explorer(const Cfa &c, const BruteForceOptions &o)
      : cfa(c), exec(c), opts(o), nvars(c.symbols.size()), width(c.symbols.width()) {
    int locbits = 1;
    while ((size_t{1} << locbits) < cfa.num_locations())
      ++locbits;
    // Under a loop bound the visit count is part of the node identity.
    packed = !o.loop_bound &&
             static_cast<size_t>(width) * nvars + static_cast<size_t>(locbits) <= 64;
  }

  State state_of(int64_t n) const {
    return State(vals.begin() + n * nvars, vals.begin() + (n + 1) * nvars);
  }

  // Returns the node id, or -1 if the pair was already seen.
  int64_t insert(int l, const State &s, int64_t par, int edge, uint16_t c) {
    int64_t id = static_cast<int64_t>(loc.size());
    bool fresh;
    if (packed) {
      uint64_t key = 0;
      for (uint64_t v : s)
        key = (key << width) | v;
      key |= static_cast<uint64_t>(l) << (width * nvars);
      fresh = seen_packed.emplace(key, id).second;
    } else {
      std::string key(reinterpret_cast<const char *>(&l), sizeof l);
      key.append(reinterpret_cast<const char *>(&c), sizeof c);
      for (uint64_t v : s)
        key.append(reinterpret_cast<const char *>(&v), (width + 7) / 8);
      fresh = seen_wide.emplace(std::move(key), id).second;
    }
    if (!fresh)
      return -1;
    loc.push_back(l);
    parent.push_back(par);
    via.push_back(edge);
    count.push_back(c);
    for (uint64_t v : s)
      vals.push_back(static_cast<uint32_t>(v));
    return id;
  }

  template <typename Visit> Stop run(Visit &&visit, int64_t &hit) {
    std::deque<int64_t> queue;
    State zero(nvars, 0);
    queue.push_back(insert(cfa.initial, zero, -1, -1, 0));
    const uint64_t values = uint64_t{1} << width;
    while (!queue.empty()) {
      int64_t n = queue.front();
      queue.pop_front();
      State s = state_of(n);
      if (visit(loc[n], s)) {
        hit = n;
        return Stop::Found;
      }
      for (int e : cfa.out_edges[loc[n]]) {
        const Edge &edge = cfa.edges[e];
        bool into_head = cfa.is_loop_head[edge.dst];
        uint16_t c = count[n] + (into_head ? 1 : 0);
        if (opts.loop_bound && c > *opts.loop_bound)
          continue;
        uint64_t choices = edge.op.kind == OpKind::Havoc ? values : 1;
        for (uint64_t h = 0; h < choices; ++h) {
          auto next = exec.step(e, s, h);
          if (!next)
            continue;
          int64_t m = insert(edge.dst, *next, n, e, c);
          if (m < 0)
            continue;
          if (loc.size() > opts.state_budget)
            return Stop::Budget;
          queue.push_back(m);
        }
      }
    }
    return Stop::Complete;
  }

  Path path_to(int64_t n) const {
    std::vector<int64_t> chain;
    for (int64_t m = n; m >= 0; m = parent[m])
      chain.push_back(m);
    Path p;
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
      PathStep st;
      st.state = state_of(*it);
      st.location = loc[*it];
      p.steps.push_back(std::move(st));
    }
    for (size_t i = 0; i + 1 < p.steps.size(); ++i)
      p.steps[i].edge = via[chain[chain.size() - 2 - i]];
    return p;
  }
};

} // namespace

VerifierVerdict brute_force_verify(const Cfa &cfa, const SafetyProperty &prop,
                                   const BruteForceOptions &opts) {
  Explorer ex(cfa, opts);
  int64_t hit = -1;
  Stop r = ex.run(
      [&](int l, const State &s) {
        return l == prop.location && violates(cfa, prop, s);
      },
      hit);
  VerifierVerdict v;
  switch (r) {
  case Stop::Complete:
    v.verdict = Verdict::True;
    v.detail = std::to_string(ex.loc.size()) + " states explored";
    break;
  case Stop::Budget:
    v.verdict = Verdict::Unknown;
    v.detail = "state budget exceeded";
    break;
  case Stop::Found: {
    v.verdict = Verdict::False;
    Counterexample cex;
    cex.path = ex.path_to(hit);
    cex.violated_at = cex.path.steps.size() - 1;
    cex.property = prop;
    v.counterexample = std::move(cex);
    break;
  }
  }
  return v;
}

std::optional<std::vector<State>> reachable_states(const Cfa &cfa, int location,
                                                   const BruteForceOptions &opts) {
  Explorer ex(cfa, opts);
  std::vector<State> out;
  int64_t hit = -1;
  Stop r = ex.run(
      [&](int l, const State &s) {
        if (l == location)
          out.push_back(s);
        return false;
      },
      hit);
  if (r == Stop::Budget)
    return std::nullopt;
  return out;
}

std::optional<bool> holds_at(const Cfa &cfa, const ExprPtr &inv, int location,
                             const BruteForceOptions &opts) {
  Evaluator ev(inv, cfa.symbols);
  Explorer ex(cfa, opts);
  int64_t hit = -1;
  Stop r = ex.run(
      [&](int l, const State &s) {
        if (l != location)
          return false;
        auto v = ev(s);
        return !v || *v == 0;
      },
      hit);
  if (r == Stop::Budget)
    return std::nullopt;
  return r == Stop::Complete;
}

} // namespace coopver
