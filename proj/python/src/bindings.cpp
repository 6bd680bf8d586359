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
// Python bindings: parse a program, run a cooperative configuration,
// run one helper, and check a verdict against the exhaustive oracle.
//
//===----------------------------------------------------------------------===//
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "coopver/cfa.hpp"
#include "coopver/exchange.hpp"
#include "coopver/helpers.hpp"
#include "coopver/oracle.hpp"
#include "coopver/orchestrator.hpp"
#include "coopver/witness.hpp"

namespace py = pybind11;
using namespace coopver;

namespace {

struct Program {
  std::string text;
  Cfa cfa;
  SafetyProperty prop;
};

Program make_program(const std::string &text, int width, const std::string &path) {
  ParseOptions o;
  o.width = width;
  o.path = path;
  Program p{text, parse_program(text, o), {}};
  p.prop = extract_property(p.cfa);
  return p;
}

std::vector<std::string> variables(const Program &p) {
  std::vector<std::string> out;
  for (const auto &v : p.cfa.symbols.vars())
    out.push_back(v.name);
  return out;
}

std::vector<int> loop_head_lines(const Program &p) {
  std::vector<int> out;
  for (int h : p.cfa.loop_heads)
    out.push_back(p.cfa.line_of(h));
  return out;
}

py::dict verify(const Program &p, const std::string &master, const std::vector<std::string> &helpers,
                double timer_m, double timeout_h, double timeout, bool restart_master,
                bool term_after_first_inv, int bound_cap, bool validate_injections) {
  CoopConfig c;
  c.master = master;
  for (const auto &h : helpers)
    c.helpers.push_back({h, std::nullopt});
  c.timer_m = timer_m;
  c.timeout_h = timeout_h;
  c.timeout = timeout;
  c.restart_master = restart_master;
  c.term_after_first_inv = term_after_first_inv;
  c.bound_cap = bound_cap;
  c.validate_injections = validate_injections;
  c.program_text = p.text;
  c.check();
  RunReport r;
  {
    py::gil_scoped_release release;
    r = run_cooperative(p.cfa, p.prop, c);
  }
  py::dict d;
  d["run_name"] = r.run_name;
  d["verdict"] = to_string(r.verdict.verdict);
  d["detail"] = r.verdict.detail;
  d["wall"] = r.wall;
  d["cpu"] = r.cpu;
  d["helped"] = r.helped;
  d["witnesses_injected"] = r.witnesses_injected;
  std::vector<std::pair<double, std::string>> events;
  for (const auto &e : r.events)
    events.emplace_back(e.time, e.what);
  d["events"] = events;
  d["diagnostics"] = r.diagnostics;
  if (r.verdict.witness)
    d["witness"] = write_graphml(*r.verdict.witness);
  else
    d["witness"] = py::none();
  return d;
}

py::dict run_helper(const Program &p, const std::string &name) {
  HelperResult r;
  {
    py::gil_scoped_release release;
    r = run_builtin_helper(name, p.cfa, p.prop);
  }
  py::dict d;
  d["status"] = to_string(r.status);
  d["elapsed"] = r.elapsed;
  std::vector<std::pair<int, std::string>> invs;
  for (const auto &li : r.invariants)
    invs.emplace_back(p.cfa.line_of(li.loop_head), to_string(li.invariant));
  d["invariants"] = invs;
  d["witness"] = write_graphml(helper_witness(p.cfa, r, name));
  return d;
}

std::string oracle_verdict(const Program &p) {
  py::gil_scoped_release release;
  return to_string(brute_force_verify(p.cfa, p.prop).verdict);
}

py::object invariant_holds(const Program &p, const std::string &expr, int line) {
  for (int h : p.cfa.loop_heads)
    if (p.cfa.line_of(h) == line) {
      auto r = holds_at(p.cfa, parse_bool_expr(expr), h);
      if (!r)
        return py::none();
      return py::bool_(*r);
    }
  throw py::value_error("no loop head at line " + std::to_string(line));
}

std::string map_to(const std::string &text, const std::string &style) {
  auto s = parse_encoding_style(style);
  if (!s)
    throw py::value_error("unknown encoding style: " + style);
  return map_property(text, *s);
}

} // namespace

PYBIND11_MODULE(_coopver, m) {
  m.doc() = "Cooperative verification of integer programs";

  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);

  py::class_<Program>(m, "Program")
      .def(py::init(&make_program), py::arg("text"), py::arg("width") = 8,
           py::arg("path") = "<input>")
      .def_property_readonly("variables", &variables)
      .def_property_readonly("loop_head_lines", &loop_head_lines)
      .def_property_readonly("num_locations", [](const Program &p) { return p.cfa.num_locations(); })
      .def_property_readonly("program_hash", [](const Program &p) { return p.cfa.program_hash; })
      .def_property_readonly("property", [](const Program &p) { return to_string(p.prop.condition); })
      .def_readonly("text", &Program::text);

  m.def("verify", &verify, py::arg("program"), py::arg("master") = "kind",
        py::arg("helpers") = std::vector<std::string>{}, py::arg("timer_m") = 50.0,
        py::arg("timeout_h") = 300.0, py::arg("timeout") = 900.0, py::arg("restart_master") = true,
        py::arg("term_after_first_inv") = true, py::arg("bound_cap") = 64,
        py::arg("validate_injections") = true);
  m.def("run_helper", &run_helper, py::arg("program"), py::arg("name"));
  m.def("oracle_verdict", &oracle_verdict, py::arg("program"));
  m.def("invariant_holds", &invariant_holds, py::arg("program"), py::arg("expr"), py::arg("line"));
  m.def("map_property", &map_to, py::arg("text"), py::arg("style"));
  m.def("witness_is_trivial",
        [](const std::string &doc) { return is_trivial_witness(read_graphml(doc)); },
        py::arg("graphml"));
}
