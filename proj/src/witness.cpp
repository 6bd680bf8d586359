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

#include "coopver/witness.hpp"

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include <chrono>
#include <ctime>
#include <deque>
#include <set>
#include <sstream>

namespace coopver {

namespace pt = boost::property_tree;

std::string to_string(GuardType g) {
  switch (g) {
  case GuardType::Then:
    return "then";
  case GuardType::Else:
    return "else";
  case GuardType::EnterFunc:
    return "enterFunc";
  case GuardType::EnterLoopHead:
    return "enterLoopHead";
  case GuardType::Otherwise:
    return "o/w";
  }
  return "o/w";
}

const WitnessState *Witness::state(const std::string &id) const {
  for (const auto &s : states)
    if (s.id == id)
      return &s;
  return nullptr;
}

std::string current_timestamp() {
  std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

namespace {

std::string escape(const std::string &s) {
  std::string out;
  for (char c : s) {
    switch (c) {
    case '<':
      out += "&lt;";
      break;
    case '>':
      out += "&gt;";
      break;
    case '&':
      out += "&amp;";
      break;
    case '"':
      out += "&quot;";
      break;
    default:
      out += c;
    }
  }
  return out;
}

struct KeyDecl {
  const char *id;
  const char *domain;
  const char *type;
  const char *dflt;
};

constexpr KeyDecl kKeys[] = {
    {"witness-type", "graph", "string", nullptr},
    {"producer", "graph", "string", nullptr},
    {"programhash", "graph", "string", nullptr},
    {"creationtime", "graph", "string", nullptr},
    {"entry", "node", "boolean", "false"},
    {"sink", "node", "boolean", "false"},
    {"invariant", "node", "string", nullptr},
    {"invariant.scope", "node", "string", nullptr},
    {"enterLoopHead", "edge", "boolean", "false"},
    {"control", "edge", "string", nullptr},
    {"enterFunction", "edge", "string", nullptr},
    {"startline", "edge", "int", nullptr},
    {"endline", "edge", "int", nullptr},
};

void data(std::ostream &os, const char *indent, const std::string &key, const std::string &v) {
  os << indent << "<data key=\"" << escape(key) << "\">" << escape(v) << "</data>\n";
}

} // namespace

std::string write_graphml(const Witness &w) {
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n";
  os << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\" "
        "xmlns:xsi=\"http://www.w3.org/2001/XMLSchema-instance\">\n";
  for (const auto &k : kKeys) {
    os << " <key attr.name=\"" << k.id << "\" attr.type=\"" << k.type << "\" for=\"" << k.domain
       << "\" id=\"" << k.id << "\"";
    if (k.dflt)
      os << ">\n  <default>" << k.dflt << "</default>\n </key>\n";
    else
      os << "/>\n";
  }
  std::set<std::pair<std::string, std::string>> extra_keys;
  for (const auto &[k, v] : w.metadata.extras)
    extra_keys.insert({k, "graph"});
  for (const auto &s : w.states)
    for (const auto &[k, v] : s.extras)
      extra_keys.insert({k, "node"});
  for (const auto &t : w.transitions)
    for (const auto &[k, v] : t.extras)
      extra_keys.insert({k, "edge"});
  for (const auto &[k, domain] : extra_keys)
    os << " <key attr.name=\"" << escape(k) << "\" attr.type=\"string\" for=\"" << domain
       << "\" id=\"" << escape(k) << "\"/>\n";

  os << " <graph edgedefault=\"directed\">\n";
  data(os, "  ", "witness-type", "correctness_witness");
  data(os, "  ", "producer", w.metadata.producer);
  data(os, "  ", "programhash", w.metadata.program_hash);
  data(os, "  ", "creationtime", w.metadata.creation_time);
  for (const auto &[k, v] : w.metadata.extras)
    data(os, "  ", k, v);
  for (const auto &s : w.states) {
    os << "  <node id=\"" << escape(s.id) << "\">\n";
    if (s.entry)
      data(os, "   ", "entry", "true");
    if (s.sink)
      data(os, "   ", "sink", "true");
    if (s.invariant) {
      data(os, "   ", "invariant", to_string(s.invariant));
      data(os, "   ", "invariant.scope", s.scope.empty() ? "main" : s.scope);
    }
    for (const auto &[k, v] : s.extras)
      data(os, "   ", k, v);
    os << "  </node>\n";
  }
  for (const auto &t : w.transitions) {
    os << "  <edge source=\"" << escape(t.source) << "\" target=\"" << escape(t.target)
       << "\">\n";
    switch (t.guard.type) {
    case GuardType::EnterLoopHead:
      data(os, "   ", "enterLoopHead", "true");
      break;
    case GuardType::Then:
      data(os, "   ", "control", "condition-true");
      break;
    case GuardType::Else:
      data(os, "   ", "control", "condition-false");
      break;
    case GuardType::EnterFunc:
      data(os, "   ", "enterFunction", "main");
      break;
    case GuardType::Otherwise:
      break;
    }
    if (t.guard.startline > 0) {
      data(os, "   ", "startline", std::to_string(t.guard.startline));
      data(os, "   ", "endline", std::to_string(t.guard.endline));
    }
    for (const auto &[k, v] : t.extras)
      data(os, "   ", k, v);
    os << "  </edge>\n";
  }
  os << " </graph>\n</graphml>\n";
  return os.str();
}

namespace {

int to_int(const std::string &s, const std::string &what) {
  try {
    size_t used = 0;
    int v = std::stoi(s, &used);
    if (used == s.size())
      return v;
  } catch (const std::exception &) {
  }
  throw Error("malformed " + what + " '" + s + "'");
}

} // namespace

Witness read_graphml(const std::string &doc) {
  pt::ptree tree;
  try {
    std::istringstream in(doc);
    pt::read_xml(in, tree);
  } catch (const pt::xml_parser_error &e) {
    throw Error(std::string("malformed witness document: ") + e.what());
  }
  auto root = tree.get_child_optional("graphml");
  if (!root)
    throw Error("witness document has no <graphml> element");

  std::map<std::string, std::string> key_names; // id -> attr.name
  for (const auto &[tag, child] : *root)
    if (tag == "key") {
      std::string id = child.get("<xmlattr>.id", "");
      key_names[id] = child.get("<xmlattr>.attr.name", id);
    }
  auto name_of = [&](const pt::ptree &d) {
    std::string k = d.get("<xmlattr>.key", "");
    auto it = key_names.find(k);
    std::string n = it == key_names.end() ? k : it->second;
    if (n == "isEntryNode")
      return std::string("entry");
    if (n == "isSinkNode")
      return std::string("sink");
    return n;
  };

  Witness w;
  auto graph = root->get_child_optional("graph");
  if (!graph)
    throw Error("witness document has no <graph> element");
  std::set<std::string> ids;
  for (const auto &[tag, child] : *graph) {
    if (tag == "data") {
      std::string n = name_of(child);
      std::string v = child.get_value<std::string>();
      if (n == "producer")
        w.metadata.producer = v;
      else if (n == "programhash")
        w.metadata.program_hash = v;
      else if (n == "creationtime")
        w.metadata.creation_time = v;
      else if (n != "witness-type")
        w.metadata.extras[n] = v;
    } else if (tag == "node") {
      WitnessState s;
      s.id = child.get("<xmlattr>.id", "");
      if (s.id.empty())
        throw Error("witness node without id");
      if (!ids.insert(s.id).second)
        throw Error("duplicate witness node '" + s.id + "'");
      for (const auto &[dtag, d] : child) {
        if (dtag != "data")
          continue;
        std::string n = name_of(d);
        std::string v = d.get_value<std::string>();
        if (n == "entry")
          s.entry = v == "true";
        else if (n == "sink")
          s.sink = v == "true";
        else if (n == "invariant") {
          try {
            s.invariant = parse_bool_expr(v);
          } catch (const Error &e) {
            throw Error("state " + s.id + ": unparseable invariant '" + v + "': " + e.what());
          }
        } else if (n == "invariant.scope")
          s.scope = v;
        else
          s.extras[n] = v;
      }
      if (s.entry) {
        if (!w.initial.empty())
          throw Error("witness has more than one entry node");
        w.initial = s.id;
      }
      w.states.push_back(std::move(s));
    } else if (tag == "edge") {
      WitnessTransition t;
      t.source = child.get("<xmlattr>.source", "");
      t.target = child.get("<xmlattr>.target", "");
      bool have_end = false;
      for (const auto &[dtag, d] : child) {
        if (dtag != "data")
          continue;
        std::string n = name_of(d);
        std::string v = d.get_value<std::string>();
        if (n == "enterLoopHead") {
          if (v == "true")
            t.guard.type = GuardType::EnterLoopHead;
        } else if (n == "control") {
          if (v == "condition-true")
            t.guard.type = GuardType::Then;
          else if (v == "condition-false")
            t.guard.type = GuardType::Else;
          else
            throw Error("unknown control value '" + v + "'");
        } else if (n == "enterFunction") {
          t.guard.type = GuardType::EnterFunc;
        } else if (n == "startline") {
          t.guard.startline = to_int(v, "startline");
        } else if (n == "endline") {
          t.guard.endline = to_int(v, "endline");
          have_end = true;
        } else {
          t.extras[n] = v;
        }
      }
      if (!have_end)
        t.guard.endline = t.guard.startline;
      if (t.guard.startline > t.guard.endline)
        throw Error("transition " + t.source + " -> " + t.target + " has startline > endline");
      w.transitions.push_back(std::move(t));
    }
  }
  if (w.initial.empty())
    throw Error("witness has no initial state (missing entry node)");
  for (const auto &t : w.transitions)
    if (!ids.count(t.source) || !ids.count(t.target))
      throw Error("dangling transition " + t.source + " -> " + t.target);
  return w;
}

bool is_trivial_witness(const Witness &w) {
  for (const auto &s : w.states)
    if (s.invariant && !is_trivial(s.invariant))
      return false;
  return true;
}

namespace {

bool guard_matches(const SourceCodeGuard &g, const Edge &e, const Cfa &cfa) {
  bool lines = g.startline <= 0 || e.span.touches(g.startline, g.endline);
  if (!lines)
    return false;
  switch (g.type) {
  case GuardType::EnterLoopHead:
    return cfa.is_loop_head[e.dst];
  case GuardType::Then:
    return e.op.kind == OpKind::Assume && e.op.then_branch;
  case GuardType::Else:
    return e.op.kind == OpKind::Assume && !e.op.then_branch;
  case GuardType::EnterFunc:
    return e.op.kind == OpKind::Call || e.src == cfa.initial;
  case GuardType::Otherwise:
    return true;
  }
  return false;
}

} // namespace

MatchResult match_to_cfa(const Witness &w, const Cfa &cfa, const MatchOptions &opts) {
  MatchResult result;
  if (w.metadata.program_hash.empty()) {
    result.diagnostics.push_back("witness carries no program hash");
  } else if (w.metadata.program_hash != cfa.program_hash) {
    if (!opts.force)
      throw Error("witness program hash does not match the program");
    result.diagnostics.push_back("program hash mismatch ignored");
  }

  std::map<std::string, int> index;
  for (size_t i = 0; i < w.states.size(); ++i)
    index[w.states[i].id] = static_cast<int>(i);
  std::vector<std::vector<int>> out(w.states.size());
  for (size_t i = 0; i < w.transitions.size(); ++i)
    out[index.at(w.transitions[i].source)].push_back(static_cast<int>(i));

  const size_t nq = w.states.size();
  std::vector<char> seen(cfa.num_locations() * nq, 0);
  std::deque<std::pair<int, int>> queue;
  auto visit = [&](int l, int q) {
    if (w.states[q].sink)
      return;
    char &s = seen[static_cast<size_t>(l) * nq + q];
    if (!s) {
      s = 1;
      queue.push_back({l, q});
    }
  };
  visit(cfa.initial, index.at(w.initial));
  bool any_match = false;
  while (!queue.empty()) {
    auto [l, q] = queue.front();
    queue.pop_front();
    for (int eid : cfa.out_edges[l]) {
      const Edge &e = cfa.edges[eid];
      std::vector<int> typed, other;
      for (int ti : out[q]) {
        const auto &t = w.transitions[ti];
        if (!guard_matches(t.guard, e, cfa))
          continue;
        (t.guard.type == GuardType::Otherwise ? other : typed).push_back(ti);
      }
      const auto &chosen = typed.empty() ? other : typed;
      if (chosen.empty()) {
        visit(e.dst, q);
        continue;
      }
      any_match = true;
      for (int ti : chosen)
        visit(e.dst, index.at(w.transitions[ti].target));
    }
  }
  if (!any_match && !w.transitions.empty())
    result.diagnostics.push_back("no witness transition matches any CFA edge");

  std::map<int, std::vector<ExprPtr>> per_head;
  for (int head : cfa.loop_heads)
    for (size_t q = 0; q < nq; ++q) {
      if (!seen[static_cast<size_t>(head) * nq + q])
        continue;
      const WitnessState &s = w.states[q];
      if (!s.invariant || is_trivial(s.invariant))
        continue;
      if (!s.scope.empty() && s.scope != "main") {
        result.diagnostics.push_back("state " + s.id + ": scope '" + s.scope + "' ignored");
        continue;
      }
      auto &list = per_head[head];
      bool dup = false;
      for (const auto &x : list)
        dup |= equal(x, s.invariant);
      if (!dup)
        list.push_back(s.invariant);
    }
  for (auto &[head, list] : per_head) {
    if (list.size() > 1)
      result.diagnostics.push_back("several witness states at loop head line " +
                                   std::to_string(cfa.line_of(head)) + "; conjoined");
    result.invariants.push_back({head, conjunction(list), opts.source});
  }
  return result;
}

Witness skeleton_witness(const Cfa &cfa, const std::map<int, ExprPtr> &invariants,
                         const std::string &producer) {
  Witness w;
  w.metadata.producer = producer;
  w.metadata.program_hash = cfa.program_hash;
  w.metadata.creation_time = current_timestamp();
  for (size_t l = 0; l < cfa.num_locations(); ++l) {
    WitnessState s;
    s.id = "q" + std::to_string(l);
    s.entry = static_cast<int>(l) == cfa.initial;
    auto it = invariants.find(static_cast<int>(l));
    if (it != invariants.end() && cfa.is_loop_head[l]) {
      s.invariant = it->second;
      s.scope = "main";
    }
    w.states.push_back(std::move(s));
  }
  w.initial = "q" + std::to_string(cfa.initial);
  for (const Edge &e : cfa.edges) {
    WitnessTransition t;
    t.source = "q" + std::to_string(e.src);
    t.target = "q" + std::to_string(e.dst);
    t.guard.startline = e.span.start_line;
    t.guard.endline = e.span.end_line;
    if (cfa.is_loop_head[e.dst])
      t.guard.type = GuardType::EnterLoopHead;
    else if (e.op.kind == OpKind::Assume)
      t.guard.type = e.op.then_branch ? GuardType::Then : GuardType::Else;
    else
      t.guard.type = GuardType::Otherwise;
    w.transitions.push_back(std::move(t));
  }
  return w;
}

} // namespace coopver
