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

// Built-in invariant generators packaged as black-box helper executables.

#include <atomic>
#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "coopver/exchange.hpp"
#include "coopver/helpers.hpp"

using namespace coopver;

namespace {

std::atomic<bool> g_cancel{false};

extern "C" void on_signal(int) { g_cancel.store(true); }

RawOutput to_raw(const Cfa &cfa, const HelperResult &r) {
  RawOutput raw;
  std::map<std::string, ExprPtr> rename;
  const auto &vars = cfa.symbols.vars();
  for (size_t i = 0; i < vars.size(); ++i) {
    std::string h = "v" + std::to_string(i + 1);
    rename[vars[i].name] = Expr::var(h);
    raw.nsmap.vars[h] = Expr::var(vars[i].name);
  }
  for (const auto &li : r.invariants) {
    const LoopInfo *loop = cfa.loop_of_head(li.loop_head);
    if (!loop)
      continue;
    std::string key = "_bb" + std::to_string(li.loop_head);
    // report against a line inside the body, as block-based tools do
    raw.nsmap.locations[key] = std::min(loop->first_line + 1, loop->last_line);
    raw.invariants.push_back({key, to_string(substitute(li.invariant, rename))});
  }
  return raw;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"coopver invariant helper"};
  std::string analysis = "interval", emit = "witness", task, property = "error_label", output;
  double timeout = 60;
  int width = 8;
  app.add_option("--analysis", analysis, "interval, affine or template")
      ->check(CLI::IsMember({"interval", "affine", "template"}));
  app.add_option("--emit", emit, "witness or raw")->check(CLI::IsMember({"witness", "raw"}));
  app.add_option("--task", task, "program file")->required();
  app.add_option("--property", property, "property encoding of the task");
  app.add_option("--output", output, "output path")->required();
  app.add_option("--timeout", timeout, "seconds");
  app.add_option("--width", width, "integer width")->check(CLI::Range(1, 32));
  CLI11_PARSE(app, argc, argv);

  std::signal(SIGTERM, on_signal);
  std::signal(SIGINT, on_signal);
  try {
    if (!parse_encoding_style(property))
      throw Error("unknown property encoding '" + property + "'");
    ParseOptions po;
    po.width = width;
    po.path = task;
    Cfa cfa = parse_file(task, po);
    auto props = extract_properties(cfa);
    HelperResult r = run_builtin_helper(analysis, cfa, props.front(), &g_cancel);
    if (r.status != HelperStatus::Completed) {
      std::cerr << analysis << ": " << to_string(r.status) << " " << r.detail << "\n";
      return 2;
    }
    std::ofstream out(output, std::ios::binary);
    if (emit == "witness")
      out << write_graphml(helper_witness(cfa, r, "coopver-" + analysis));
    else
      out << write_raw_output(to_raw(cfa, r));
    if (!out)
      throw Error("cannot write '" + output + "'");
    std::cout << r.invariants.size() << " invariants\n";
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
