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

#include <chrono>
#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <fcntl.h>
#include <sys/stat.h>
#include <sys/wait.h>
#include <unistd.h>

#include "coopver/exchange.hpp"

namespace coopver {

namespace fs = std::filesystem;

void ExternalHelperSpec::check() const {
  if (executable.empty())
    throw Error("helper '" + name + "': no executable");
  struct stat st {};
  if (::stat(executable.c_str(), &st) != 0 || !S_ISREG(st.st_mode))
    throw Error("helper '" + name + "': executable '" + executable + "' not found");
  if (::access(executable.c_str(), X_OK) != 0)
    throw Error("helper '" + name + "': '" + executable + "' is not executable");
  if (!(timeout > 0))
    throw Error("helper '" + name + "': timeout must be positive");
}

namespace {

std::string slurp(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void spit(const fs::path &p, const std::string &text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

struct WorkDir {
  fs::path path;
  WorkDir() {
    std::string tmpl = (fs::temp_directory_path() / "coopver-XXXXXX").string();
    if (!::mkdtemp(tmpl.data()))
      throw Error("cannot create helper work directory");
    path = tmpl;
  }
  ~WorkDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

std::string fmt_secs(double s) {
  std::ostringstream o;
  o << s;
  return o.str();
}

} // namespace

ExternalRun run_external_helper(const ExternalHelperSpec &spec, const std::string &program,
                                const Cfa &cfa, const std::atomic<bool> *cancel) {
  ExternalRun run;
  auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };
  auto finish = [&](HelperStatus st, std::string detail) {
    run.result.status = st;
    run.result.detail = std::move(detail);
    run.result.elapsed = elapsed();
    return run;
  };

  std::string mapped;
  try {
    mapped = map_property(program, spec.encoding);
  } catch (const Error &e) {
    return finish(HelperStatus::Failed, std::string("mapper: ") + e.what());
  }

  WorkDir wd;
  fs::path task = wd.path / "task.mc";
  fs::path out = wd.path / (spec.output == HelperOutputKind::WitnessDocument ? "witness.graphml"
                                                                              : "invariants.txt");
  fs::path so = wd.path / "stdout.txt";
  fs::path se = wd.path / "stderr.txt";
  spit(task, mapped);

  std::vector<std::string> args = {spec.executable,      "--task",   task.string(),
                                   "--property",         to_string(spec.encoding),
                                   "--output",           out.string(),
                                   "--timeout",          fmt_secs(spec.timeout)};
  args.insert(args.end(), spec.extra_args.begin(), spec.extra_args.end());
  std::vector<char *> argv;
  for (auto &a : args)
    argv.push_back(a.data());
  argv.push_back(nullptr);

  pid_t pid = ::fork();
  if (pid < 0)
    return finish(HelperStatus::Failed, "fork failed");
  if (pid == 0) {
    ::setpgid(0, 0);
    if (::chdir(wd.path.c_str()) != 0)
      ::_exit(127);
    int fo = ::open(so.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
    int fe = ::open(se.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
    if (fo < 0 || fe < 0)
      ::_exit(127);
    ::dup2(fo, 1);
    ::dup2(fe, 2);
    ::execv(argv[0], argv.data());
    ::_exit(127);
  }
  ::setpgid(pid, pid);

  int wstatus = 0;
  bool timed_out = false, stopped = false;
  for (;;) {
    pid_t r = ::waitpid(pid, &wstatus, WNOHANG);
    if (r == pid)
      break;
    if (r < 0)
      return finish(HelperStatus::Failed, "waitpid failed");
    if (cancel && cancel->load())
      stopped = true;
    else if (elapsed() >= spec.timeout)
      timed_out = true;
    if (stopped || timed_out) {
      ::killpg(pid, SIGKILL);
      ::kill(pid, SIGKILL);
      ::waitpid(pid, &wstatus, 0);
      break;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(10));
  }
  // reap stragglers left in the group
  ::killpg(pid, SIGKILL);

  run.stdout_text = slurp(so);
  run.stderr_text = slurp(se);
  if (stopped)
    return finish(HelperStatus::Stopped, "stopped");
  if (timed_out)
    return finish(HelperStatus::TimedOut, "timed out after " + fmt_secs(spec.timeout) + "s");
  run.exit_code = WIFEXITED(wstatus) ? WEXITSTATUS(wstatus) : 128 + WTERMSIG(wstatus);
  if (run.exit_code != 0)
    return finish(HelperStatus::Failed, "exit code " + std::to_string(run.exit_code) + "\n" +
                                            run.stderr_text);
  if (!fs::exists(out))
    return finish(HelperStatus::Failed, "no output file\n" + run.stdout_text);
  run.output_text = slurp(out);

  try {
    if (spec.output == HelperOutputKind::WitnessDocument) {
      Witness w = read_graphml(run.output_text);
      MatchOptions mo;
      mo.source = spec.name;
      // the helper saw the re-encoded program; lines are unchanged
      mo.force = w.metadata.program_hash == sha256_hex(mapped);
      MatchResult m = match_to_cfa(w, cfa, mo);
      run.result.invariants = std::move(m.invariants);
      std::string detail;
      for (const auto &d : m.diagnostics)
        detail += d + "\n";
      return finish(HelperStatus::Completed, detail);
    }
    RawOutput raw = parse_raw_output(run.output_text);
    raw.nsmap.check(cfa);
    AdaptResult a = adapt(raw.invariants, raw.nsmap, cfa, spec.name);
    for (auto &li : a.invariants)
      li.source = spec.name;
    run.result.invariants = std::move(a.invariants);
    std::string detail;
    for (const auto &d : a.diagnostics)
      detail += d + "\n";
    return finish(HelperStatus::Completed, detail);
  } catch (const Error &e) {
    return finish(HelperStatus::Failed,
                  std::string("malformed output: ") + e.what() + "\n" + run.output_text);
  }
}

} // namespace coopver
