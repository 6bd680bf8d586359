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

// Command-line driver: verify, bench, corpus check, witness inspect, adapt
// and map-property.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "coopver/bench.hpp"
#include "coopver/exchange.hpp"
#include "coopver/oracle.hpp"
#include "coopver/orchestrator.hpp"

using namespace coopver;
namespace fs = std::filesystem;

namespace {

constexpr int kUsage = 64;

std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error("cannot read '" + path + "'");
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const std::string &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out)
    throw Error("cannot write '" + path + "'");
}

int exit_for(Verdict v) {
  switch (v) {
  case Verdict::True:
    return 0;
  case Verdict::False:
    return 1;
  default:
    return 2;
  }
}

std::string self_exe() {
  std::error_code ec;
  auto p = fs::read_symlink("/proc/self/exe", ec);
  return ec ? std::string() : p.string();
}

struct VerifyArgs {
  std::string file;
  int width = 8;
  std::string config_file;
  std::string config_name;
  std::string master;
  std::string helpers;
  std::optional<double> timer_m, timeout_h, timeout;
  std::optional<bool> restart, term_first;
  std::optional<int> bound_cap;
  std::optional<bool> builtin_aux;
  std::optional<bool> validate_injections;
  std::string emit_witness;
  std::string trace_out;
  std::string replay;
  bool json = false;
  bool events = false;
};

CoopConfig build_config(const VerifyArgs &a) {
  CoopConfig c;
  if (!a.config_file.empty())
    c = load_coop_config(a.config_file);
  else if (!a.config_name.empty())
    c = parse_run_name(a.config_name);
  else
    c.timeout = 60;
  if (!a.master.empty())
    c.master = a.master;
  if (!a.helpers.empty()) {
    c.helpers.clear();
    std::stringstream s(a.helpers);
    for (std::string h; std::getline(s, h, ',');)
      if (!h.empty() && h != "none")
        c.helpers.push_back({h, std::nullopt});
  }
  if (a.timer_m)
    c.timer_m = *a.timer_m;
  if (a.timeout_h)
    c.timeout_h = *a.timeout_h;
  if (a.timeout)
    c.timeout = *a.timeout;
  if (a.restart)
    c.restart_master = *a.restart;
  if (a.term_first)
    c.term_after_first_inv = *a.term_first;
  if (a.bound_cap)
    c.bound_cap = *a.bound_cap;
  if (a.builtin_aux)
    c.builtin_aux = *a.builtin_aux;
  if (a.validate_injections)
    c.validate_injections = *a.validate_injections;
  if (c.timer_m > c.timeout)
    c.timer_m = c.timeout;
  for (auto &h : c.helpers)
    if (h.external)
      h.external->timeout = c.timeout_h;
  return c;
}

int do_replay(const VerifyArgs &a, const Cfa &cfa) {
  Counterexample cex = read_trace(cfa, read_file(a.replay));
  if (replay(cfa, cex)) {
    std::cout << "replay: confirmed violation at step " << cex.violated_at << "\n";
    return 1;
  }
  std::cout << "replay: rejected\n";
  return 2;
}

int do_verify(const VerifyArgs &a) {
  std::string text = read_file(a.file);
  ParseOptions po;
  po.width = a.width;
  po.path = a.file;
  Cfa cfa = parse_program(text, po);
  if (!a.replay.empty())
    return do_replay(a, cfa);
  SafetyProperty prop = extract_property(cfa);
  CoopConfig c = build_config(a);
  c.program_text = text;
  RunReport rep = run_cooperative(cfa, prop, c);
  const auto &v = rep.verdict;
  if (v.verdict == Verdict::False && v.counterexample && !replay(cfa, *v.counterexample))
    throw Error("internal: counterexample does not replay");
  if (!a.emit_witness.empty() && v.witness)
    write_file(a.emit_witness, write_graphml(*v.witness));
  if (!a.trace_out.empty() && v.counterexample)
    write_file(a.trace_out, write_trace(cfa, *v.counterexample));
  if (a.json) {
    nlohmann::json j;
    j["task"] = a.file;
    j["config"] = rep.run_name;
    j["verdict"] = to_string(v.verdict);
    j["detail"] = v.detail;
    j["wall"] = rep.wall;
    j["cpu"] = rep.cpu;
    j["helped"] = rep.helped;
    j["injected"] = rep.witnesses_injected;
    j["master_solo"] = rep.master_solo;
    j["helper_phase"] = rep.helper_phase;
    j["post_injection"] = rep.post_injection;
    nlohmann::json hs = nlohmann::json::array();
    for (const auto &h : rep.helpers)
      hs.push_back({{"name", h.name},
                    {"started", h.started},
                    {"status", to_string(h.result.status)},
                    {"trivial", h.trivial},
                    {"injected", h.injected},
                    {"invariants", h.result.invariants.size()}});
    j["helpers"] = hs;
    std::cout << j.dump() << "\n";
  } else {
    std::cout << to_string(v.verdict) << "\n";
    if (!v.detail.empty())
      std::cout << "detail: " << v.detail << "\n";
    std::cout << "config: " << rep.run_name << "  wall: " << rep.wall << "s\n";
    if (v.counterexample && a.trace_out.empty())
      std::cout << write_trace(cfa, *v.counterexample);
    if (a.events)
      for (const auto &e : rep.events)
        std::cout << "[" << e.time << "] " << e.what << "\n";
  }
  return exit_for(v.verdict);
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"coopver: cooperative verification with invariant helpers"};
  app.require_subcommand(1);

  VerifyArgs va;
  auto *verify = app.add_subcommand("verify", "verify one task");
  verify->add_option("file", va.file, "program")->required()->check(CLI::ExistingFile);
  verify->add_option("--width", va.width, "integer width")->check(CLI::Range(1, 32));
  verify->add_option("--config", va.config_file, "configuration file")
      ->check(CLI::ExistingFile);
  verify->add_option("--config-name", va.config_name,
                     "configuration by run name, e.g. kind-affine-5");
  verify->add_option("--master", va.master, "kind or predabs")
      ->check(CLI::IsMember({"kind", "predabs"}));
  verify->add_option("--helpers", va.helpers, "comma-separated: interval,affine,template");
  verify->add_option("--timerM", va.timer_m, "seconds until the master asks for help");
  verify->add_option("--timeoutH", va.timeout_h, "seconds per helper");
  verify->add_option("--restartMaster", va.restart, "restart the master after injection");
  verify->add_option("--termAfterFirstInv", va.term_first, "use the first witness only");
  verify->add_option("--timeout", va.timeout, "task timeout in seconds");
  verify->add_option("--bound-cap", va.bound_cap, "maximum k or refinement rounds");
  verify->add_option("--builtin-aux", va.builtin_aux, "interval auxiliary invariants (kind)");
  verify->add_option("--validate-injections", va.validate_injections,
                     "predabs: only predicates from validated invariants");
  verify->add_option("--emit-witness", va.emit_witness, "write the overall witness");
  verify->add_option("--trace-out", va.trace_out, "write the counterexample trace");
  verify->add_option("--replay", va.replay, "check a counterexample trace instead")
      ->check(CLI::ExistingFile);
  verify->add_flag("--json", va.json, "machine-readable report");
  verify->add_flag("--events", va.events, "print the coordinator event log");

  std::string tasks_csv, out_dir = "bench-out";
  std::vector<std::string> configs;
  BenchOptions bo;
  auto *bench = app.add_subcommand("bench", "run a task list under several configurations");
  bench->add_option("--tasks", tasks_csv, "task list CSV")->required()->check(CLI::ExistingFile);
  bench->add_option("--configs", configs, "run names, e.g. kind kind-affine-5")
      ->required()
      ->delimiter(',');
  bench->add_option("--timeout", bo.timeout, "wall seconds per task");
  bench->add_option("--memory", bo.memory_mb, "MiB per task, 0 disables");
  bench->add_option("--jobs", bo.jobs, "parallel tasks")->check(CLI::PositiveNumber);
  bench->add_option("--out", out_dir, "output directory");

  auto *corpus = app.add_subcommand("corpus", "corpus maintenance");
  corpus->require_subcommand(1);
  std::string corpus_csv;
  auto *check = corpus->add_subcommand("check", "re-derive expected verdicts by enumeration");
  check->add_option("tasks", corpus_csv, "task list CSV")->required()->check(CLI::ExistingFile);

  auto *witness = app.add_subcommand("witness", "witness tools");
  witness->require_subcommand(1);
  std::string w_file, w_task;
  int w_width = 8;
  bool w_force = false;
  auto *inspect = witness->add_subcommand("inspect", "summarize a witness");
  inspect->add_option("file", w_file, "GraphML witness")->required()->check(CLI::ExistingFile);
  inspect->add_option("--task", w_task, "match against this program")->check(CLI::ExistingFile);
  inspect->add_option("--width", w_width, "integer width")->check(CLI::Range(1, 32));
  inspect->add_flag("--force", w_force, "ignore a program hash mismatch");

  std::string a_raw, a_task, a_out;
  int a_width = 8;
  auto *adapt_cmd = app.add_subcommand("adapt", "turn raw helper output into a witness");
  adapt_cmd->add_option("raw", a_raw, "raw invariants with MAP section")
      ->required()
      ->check(CLI::ExistingFile);
  adapt_cmd->add_option("--task", a_task, "program")->required()->check(CLI::ExistingFile);
  adapt_cmd->add_option("--width", a_width, "integer width")->check(CLI::Range(1, 32));
  adapt_cmd->add_option("-o,--output", a_out, "witness path (default stdout)");

  std::string m_file, m_to, m_out;
  auto *mapc = app.add_subcommand("map-property", "re-encode the safety property");
  mapc->add_option("file", m_file, "program")->required()->check(CLI::ExistingFile);
  mapc->add_option("--to", m_to, "error_label, verifier_error_call or assert_stmt")
      ->required()
      ->check(CLI::IsMember({"error_label", "verifier_error_call", "assert_stmt"}));
  mapc->add_option("-o,--output", m_out, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*verify)
      return do_verify(va);

    if (*bench) {
      if (bo.exe.empty())
        bo.exe = self_exe();
      auto rows = run_bench(bo, tasks_csv, configs);
      fs::create_directories(out_dir);
      auto summary = summarize(rows);
      write_file(out_dir + "/results.csv", results_csv(rows));
      write_file(out_dir + "/summary.csv", summary_csv(summary));
      write_file(out_dir + "/quantile.csv", quantile_csv(rows));
      write_file(out_dir + "/scatter.csv", scatter_csv(rows));
      std::cout << summary_csv(summary);
      return 0;
    }

    if (*check) {
      auto tasks = load_tasks(corpus_csv);
      fs::path dir = fs::path(corpus_csv).parent_path();
      int bad = 0;
      for (const auto &t : tasks) {
        ParseOptions po;
        po.width = t.width;
        Cfa cfa = parse_file((dir / t.file).string(), po);
        auto v = brute_force_verify(cfa, extract_property(cfa)).verdict;
        Expected got = v == Verdict::True    ? Expected::True
                       : v == Verdict::False ? Expected::False
                                             : Expected::Unknown;
        bool ok = got == t.expected;
        bad += !ok;
        std::cout << (ok ? "ok   " : "FAIL ") << t.file << " expected=" << to_string(t.expected)
                  << " oracle=" << to_string(got) << "\n";
      }
      std::cout << tasks.size() - bad << "/" << tasks.size() << " agree\n";
      return bad ? 1 : 0;
    }

    if (*inspect) {
      Witness w = read_graphml(read_file(w_file));
      std::cout << "producer: " << w.metadata.producer << "\n"
                << "programhash: " << w.metadata.program_hash << "\n"
                << "states: " << w.states.size() << "  transitions: " << w.transitions.size()
                << "\n"
                << "trivial: " << (is_trivial_witness(w) ? "yes" : "no") << "\n";
      for (const auto &s : w.states)
        if (s.invariant)
          std::cout << "  " << s.id << ": " << to_string(s.invariant) << "\n";
      if (!w_task.empty()) {
        ParseOptions po;
        po.width = w_width;
        Cfa cfa = parse_file(w_task, po);
        MatchOptions mo;
        mo.force = w_force;
        auto m = match_to_cfa(w, cfa, mo);
        for (const auto &li : m.invariants)
          std::cout << "loop head at line " << cfa.line_of(li.loop_head) << ": "
                    << to_string(li.invariant) << "\n";
        for (const auto &d : m.diagnostics)
          std::cout << "note: " << d << "\n";
      }
      return 0;
    }

    if (*adapt_cmd) {
      ParseOptions po;
      po.width = a_width;
      Cfa cfa = parse_file(a_task, po);
      RawOutput raw = parse_raw_output(read_file(a_raw));
      raw.nsmap.check(cfa);
      auto r = adapt(raw.invariants, raw.nsmap, cfa);
      for (const auto &d : r.diagnostics)
        std::cerr << "note: " << d << "\n";
      std::string doc = write_graphml(r.witness);
      if (a_out.empty())
        std::cout << doc;
      else
        write_file(a_out, doc);
      return 0;
    }

    if (*mapc) {
      std::string out = map_property(read_file(m_file), *parse_encoding_style(m_to));
      if (m_out.empty())
        std::cout << out;
      else
        write_file(m_out, out);
      return 0;
    }
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
