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

#include <functional>
#include <set>
#include <sstream>

#include "coopver/exchange.hpp"

namespace coopver {

void NamespaceMap::check(const Cfa &cfa) const {
  std::map<std::string, std::string> seen;
  for (const auto &[h, e] : vars) {
    if (e->kind() != ExprKind::Var)
      continue;
    auto [it, fresh] = seen.emplace(e->name(), h);
    if (!fresh)
      throw Error("helper variables '" + it->second + "' and '" + h +
                  "' both map to '" + e->name() + "'");
  }
  int last = 0;
  for (const auto &sp : cfa.line_map)
    last = std::max(last, sp.end_line);
  for (const auto &[k, line] : locations)
    if (line < 1 || line > last)
      throw Error("location '" + k + "' maps to line " + std::to_string(line) +
                  " outside the program");
}

namespace {

std::vector<std::string> split_tabs(const std::string &line) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(line);
  while (std::getline(in, cur, '\t'))
    out.push_back(cur);
  return out;
}

} // namespace

RawOutput parse_raw_output(const std::string &text) {
  RawOutput raw;
  std::istringstream in(text);
  std::string line;
  bool in_map = false;
  int no = 0;
  while (std::getline(in, line)) {
    ++no;
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    if (line.empty() || line[0] == '#')
      continue;
    if (line == "MAP") {
      in_map = true;
      continue;
    }
    auto f = split_tabs(line);
    auto bad = [&] { return Error("raw output line " + std::to_string(no) + ": malformed"); };
    if (!in_map) {
      if (f.size() != 2)
        throw bad();
      raw.invariants.push_back({f[0], f[1]});
    } else if (f.size() == 3 && f[0] == "var") {
      try {
        raw.nsmap.vars[f[1]] = parse_expr(f[2]);
      } catch (const Error &e) {
        throw Error("raw output line " + std::to_string(no) + ": " + e.what());
      }
    } else if (f.size() == 3 && f[0] == "loc") {
      try {
        raw.nsmap.locations[f[1]] = std::stoi(f[2]);
      } catch (const std::exception &) {
        throw bad();
      }
    } else {
      throw bad();
    }
  }
  return raw;
}

std::string write_raw_output(const RawOutput &raw) {
  std::ostringstream out;
  for (const auto &r : raw.invariants)
    out << r.location_key << '\t' << r.expression << '\n';
  out << "MAP\n";
  for (const auto &[h, e] : raw.nsmap.vars)
    out << "var\t" << h << '\t' << to_string(e) << '\n';
  for (const auto &[k, l] : raw.nsmap.locations)
    out << "loc\t" << k << '\t' << l << '\n';
  return out.str();
}

std::optional<int> snap_to_loop_head(const Cfa &cfa, int line) {
  const LoopInfo *best = nullptr;
  bool tie = false;
  for (const auto &l : cfa.loops) {
    if (line < l.first_line || line > l.last_line)
      continue;
    int span = l.last_line - l.first_line;
    if (!best || span < best->last_line - best->first_line) {
      best = &l;
      tie = false;
    } else if (span == best->last_line - best->first_line && l.head != best->head) {
      tie = true;
    }
  }
  if (!best || tie)
    return std::nullopt;
  return best->head;
}

AdaptResult adapt(const std::vector<RawInvariant> &raw, const NamespaceMap &nsmap, const Cfa &cfa,
                  const std::string &producer) {
  AdaptResult res;
  // helper variable -> program expression, resolving chains of intermediates
  std::map<std::string, ExprPtr> resolved;
  std::function<ExprPtr(const std::string &, std::set<std::string> &)> resolve =
      [&](const std::string &v, std::set<std::string> &active) -> ExprPtr {
    auto done = resolved.find(v);
    if (done != resolved.end())
      return done->second;
    auto it = nsmap.vars.find(v);
    if (it == nsmap.vars.end())
      return nullptr;
    if (!active.insert(v).second)
      throw Error("cyclic namespace entry for '" + v + "'");
    std::map<std::string, ExprPtr> sub;
    for (const auto &w : free_vars(it->second)) {
      if (w == v || nsmap.vars.count(w) == 0) {
        if (!cfa.symbols.contains(w))
          return nullptr;
        continue;
      }
      ExprPtr r = resolve(w, active);
      if (!r)
        return nullptr;
      sub[w] = r;
    }
    active.erase(v);
    ExprPtr out = sub.empty() ? it->second : substitute(it->second, sub);
    resolved[v] = out;
    return out;
  };

  std::map<int, std::vector<ExprPtr>> per_head;
  for (const auto &r : raw) {
    ExprPtr e;
    try {
      e = parse_bool_expr(r.expression);
    } catch (const Error &err) {
      res.diagnostics.push_back("unparseable invariant '" + r.expression + "': " + err.what());
      continue;
    }
    std::map<std::string, ExprPtr> sub;
    std::string missing;
    for (const auto &v : free_vars(e)) {
      std::set<std::string> active;
      ExprPtr p;
      try {
        p = resolve(v, active);
      } catch (const Error &err) {
        missing = v;
        break;
      }
      if (!p) {
        missing = v;
        break;
      }
      sub[v] = p;
    }
    if (!missing.empty()) {
      res.diagnostics.push_back("invariant '" + r.expression + "' dropped: unmapped variable '" +
                                missing + "'");
      continue;
    }
    ExprPtr prog = substitute(e, sub);
    auto loc = nsmap.locations.find(r.location_key);
    if (loc == nsmap.locations.end()) {
      res.diagnostics.push_back("invariant '" + r.expression + "' dropped: unknown location '" +
                                r.location_key + "'");
      continue;
    }
    auto head = snap_to_loop_head(cfa, loc->second);
    if (!head) {
      res.diagnostics.push_back("invariant '" + r.expression + "' dropped: line " +
                                std::to_string(loc->second) +
                                " has no unique enclosing loop");
      continue;
    }
    if (is_trivial(prog))
      continue;
    per_head[*head].push_back(prog);
    res.invariants.push_back({*head, prog, producer});
  }
  std::map<int, ExprPtr> invs;
  for (auto &[h, ps] : per_head)
    invs[h] = conjunction(ps);
  res.witness = skeleton_witness(cfa, invs, producer);
  return res;
}

} // namespace coopver
