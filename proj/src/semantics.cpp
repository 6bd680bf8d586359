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

#include "coopver/semantics.hpp"

#include <sstream>

namespace coopver {

std::optional<State> step(const SymbolTable &symbols, const State &state, const Operation &op,
                          std::optional<uint64_t> havoc_value) {
  switch (op.kind) {
  case OpKind::Assume: {
    auto v = eval_bool(op.expr, symbols, state);
    if (!v || !*v)
      return std::nullopt;
    return state;
  }
  case OpKind::Assign: {
    auto v = eval(op.expr, symbols, state);
    if (!v)
      return std::nullopt;
    State next = state;
    next[op.var] = *v;
    return next;
  }
  case OpKind::Havoc: {
    if (!havoc_value)
      throw Error("havoc of '" + op.name + "' needs an oracle value");
    State next = state;
    next[op.var] = *havoc_value & symbols.mask();
    return next;
  }
  default:
    return state;
  }
}

Executor::Executor(const Cfa &cfa) : cfa_(cfa) {
  evals_.reserve(cfa.edges.size());
  for (const Edge &e : cfa.edges) {
    if (e.op.expr)
      evals_.emplace_back(Evaluator(e.op.expr, cfa.symbols));
    else
      evals_.emplace_back(std::nullopt);
  }
}

std::optional<State> Executor::step(int edge, const State &state, uint64_t havoc_value) const {
  const Operation &op = cfa_.edges[edge].op;
  switch (op.kind) {
  case OpKind::Assume: {
    auto v = (*evals_[edge])(state);
    if (!v || !*v)
      return std::nullopt;
    return state;
  }
  case OpKind::Assign: {
    auto v = (*evals_[edge])(state);
    if (!v)
      return std::nullopt;
    State next = state;
    next[op.var] = *v;
    return next;
  }
  case OpKind::Havoc: {
    State next = state;
    next[op.var] = havoc_value & cfa_.symbols.mask();
    return next;
  }
  default:
    return state;
  }
}

bool Executor::violates(const SafetyProperty &prop, const State &state) const {
  return coopver::violates(cfa_, prop, state);
}

bool violates(const Cfa &cfa, const SafetyProperty &prop, const State &state) {
  auto v = eval_bool(prop.condition, cfa.symbols, state);
  return v && !*v;
}

bool replay(const Cfa &cfa, const Counterexample &cex) {
  const auto &steps = cex.path.steps;
  const size_t nvars = cfa.symbols.size();
  if (steps.empty() || cex.violated_at >= steps.size())
    return false;
  if (steps[0].location != cfa.initial)
    return false;
  for (const PathStep &s : steps) {
    if (s.state.size() != nvars || s.location < 0 ||
        static_cast<size_t>(s.location) >= cfa.num_locations())
      return false;
    for (uint64_t v : s.state)
      if (v > cfa.symbols.mask())
        return false;
  }
  for (uint64_t v : steps[0].state)
    if (v != 0)
      return false;
  for (size_t i = 0; i + 1 < steps.size(); ++i) {
    int e = steps[i].edge;
    if (e < 0 || static_cast<size_t>(e) >= cfa.edges.size())
      return false;
    const Edge &edge = cfa.edges[e];
    if (edge.src != steps[i].location || edge.dst != steps[i + 1].location)
      return false;
    std::optional<uint64_t> havoc;
    if (edge.op.kind == OpKind::Havoc)
      havoc = steps[i + 1].state[edge.op.var];
    auto next = step(cfa.symbols, steps[i].state, edge.op, havoc);
    if (!next || *next != steps[i + 1].state)
      return false;
  }
  const PathStep &bad = steps[cex.violated_at];
  return bad.location == cex.property.location && violates(cfa, cex.property, bad.state);
}

std::string format_state(const SymbolTable &symbols, const State &state) {
  std::string out;
  for (size_t i = 0; i < state.size(); ++i) {
    if (i)
      out += ',';
    out += symbols[i].name + "=" + symbols.format(i, state[i]);
  }
  return out;
}

std::string write_trace(const Cfa &cfa, const Counterexample &cex) {
  std::ostringstream os;
  os << "# property: " << cex.property.location << " " << to_string(cex.property.condition)
     << "\n";
  os << "# violated_at: " << cex.violated_at << "\n";
  for (const PathStep &s : cex.path.steps) {
    os << s.location << " | " << (s.edge >= 0 ? to_string(cfa.edges[s.edge].op) : "-") << " | "
       << format_state(cfa.symbols, s.state) << "\n";
  }
  return os.str();
}

namespace {

std::string trim(std::string s) {
  size_t b = s.find_first_not_of(" \t\r");
  size_t e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

} // namespace

Counterexample read_trace(const Cfa &cfa, const std::string &text) {
  Counterexample cex;
  bool have_prop = false;
  std::vector<std::string> ops;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  auto bad = [&](const std::string &msg) {
    throw Error("trace line " + std::to_string(lineno) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty())
      continue;
    if (line.rfind("# property:", 0) == 0) {
      std::istringstream ps(line.substr(11));
      int loc;
      if (!(ps >> loc))
        bad("malformed property header");
      std::string rest;
      std::getline(ps, rest);
      cex.property = {loc, parse_expr(trim(rest))};
      have_prop = true;
      continue;
    }
    if (line.rfind("# violated_at:", 0) == 0) {
      cex.violated_at = std::stoul(line.substr(14));
      continue;
    }
    if (line[0] == '#')
      continue;
    size_t a = line.find('|');
    size_t b = line.find('|', a == std::string::npos ? a : a + 1);
    if (a == std::string::npos || b == std::string::npos)
      bad("expected 'location | operation | state'");
    PathStep s;
    try {
      s.location = std::stoi(trim(line.substr(0, a)));
    } catch (const std::exception &) {
      bad("malformed location");
    }
    ops.push_back(trim(line.substr(a + 1, b - a - 1)));
    s.state.assign(cfa.symbols.size(), 0);
    std::vector<bool> seen(cfa.symbols.size(), false);
    std::istringstream vs(line.substr(b + 1));
    std::string item;
    while (std::getline(vs, item, ',')) {
      item = trim(item);
      if (item.empty())
        continue;
      size_t eq = item.find('=');
      if (eq == std::string::npos)
        bad("malformed assignment '" + item + "'");
      auto id = cfa.symbols.find(trim(item.substr(0, eq)));
      if (!id)
        bad("unknown variable in '" + item + "'");
      try {
        s.state[*id] = cfa.symbols.truncate(std::stoll(trim(item.substr(eq + 1))));
      } catch (const std::exception &) {
        bad("malformed value in '" + item + "'");
      }
      seen[*id] = true;
    }
    for (size_t i = 0; i < seen.size(); ++i)
      if (!seen[i])
        bad("missing value for '" + cfa.symbols[i].name + "'");
    cex.path.steps.push_back(std::move(s));
  }
  if (!have_prop)
    throw Error("trace has no '# property:' header");
  auto &steps = cex.path.steps;
  for (size_t i = 0; i + 1 < steps.size(); ++i) {
    int loc = steps[i].location;
    if (loc < 0 || static_cast<size_t>(loc) >= cfa.num_locations())
      throw Error("trace step " + std::to_string(i) + " names no location");
    for (int e : cfa.out_edges[loc]) {
      const Edge &edge = cfa.edges[e];
      if (edge.dst == steps[i + 1].location && to_string(edge.op) == ops[i]) {
        steps[i].edge = e;
        break;
      }
    }
    if (steps[i].edge < 0)
      throw Error("trace step " + std::to_string(i) + " names no CFA edge");
  }
  return cex;
}

} // namespace coopver
