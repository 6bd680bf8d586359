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

#include <algorithm>
#include <atomic>
#include <chrono>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <fcntl.h>
#include <sys/resource.h>
#include <sys/wait.h>
#include <unistd.h>

#include <json.hpp>

#include "coopver/bench.hpp"

namespace coopver {

namespace fs = std::filesystem;

std::string to_string(Expected e) {
  switch (e) {
  case Expected::True:
    return "true";
  case Expected::False:
    return "false";
  case Expected::Unknown:
    return "unknown";
  }
  return "unknown";
}

Expected parse_expected(const std::string &s) {
  if (s == "true")
    return Expected::True;
  if (s == "false")
    return Expected::False;
  if (s == "unknown")
    return Expected::Unknown;
  throw Error("bad expected verdict '" + s + "'");
}

namespace {

std::vector<std::string> split(const std::string &s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep))
    out.push_back(cur);
  if (!s.empty() && s.back() == sep)
    out.emplace_back();
  return out;
}

std::vector<std::string> csv_lines(const std::string &text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) {
    if (!l.empty() && l.back() == '\r')
      l.pop_back();
    if (!l.empty())
      out.push_back(l);
  }
  return out;
}

std::string clean(std::string s) {
  for (char &c : s)
    if (c == ',' || c == '\n' || c == '\r')
      c = ' ';
  return s;
}

std::string num(double d) {
  std::ostringstream o;
  o.precision(6);
  o << std::fixed << d;
  return o.str();
}

bool is_number(const std::string &s) {
  if (s.empty())
    return false;
  try {
    size_t used = 0;
    std::stod(s, &used);
    return used == s.size();
  } catch (const std::exception &) {
    return false;
  }
}

} // namespace

std::vector<TaskEntry> load_tasks(const std::string &csv_path) {
  std::ifstream in(csv_path);
  if (!in)
    throw Error("cannot read task list '" + csv_path + "'");
  std::stringstream s;
  s << in.rdbuf();
  auto lines = csv_lines(s.str());
  if (lines.empty() || lines[0] != "file,expected,width")
    throw Error("task list must start with 'file,expected,width'");
  std::vector<TaskEntry> out;
  for (size_t i = 1; i < lines.size(); ++i) {
    auto f = split(lines[i], ',');
    if (f.size() != 3)
      throw Error("task list line " + std::to_string(i + 1) + ": expected three fields");
    out.push_back({f[0], parse_expected(f[1]), std::stoi(f[2])});
  }
  return out;
}

std::string write_tasks(const std::vector<TaskEntry> &tasks) {
  std::ostringstream o;
  o << "file,expected,width\n";
  for (const auto &t : tasks)
    o << t.file << ',' << to_string(t.expected) << ',' << t.width << "\n";
  return o.str();
}

CoopConfig parse_run_name(const std::string &name) {
  auto tok = split(name, '-');
  if (tok.empty() || tok[0].empty())
    throw Error("empty configuration name");
  if (tok[0] != "kind" && tok[0] != "predabs")
    throw Error("unknown master '" + tok[0] + "'");
  CoopConfig c;
  c.master = tok[0];
  size_t i = 1;
  static const std::set<std::string> builtins = {"interval", "affine", "template"};
  while (i < tok.size() && builtins.count(tok[i]))
    c.helpers.push_back({tok[i++], std::nullopt});
  if (i < tok.size() && is_number(tok[i]))
    c.timer_m = std::stod(tok[i++]);
  if (i + 1 < tok.size() && tok[i] == "wait" && is_number(tok[i + 1])) {
    c.term_after_first_inv = false;
    c.timeout_h = std::stod(tok[i + 1]);
    i += 2;
  }
  if (i != tok.size())
    throw Error("cannot parse configuration name '" + name + "'");
  return c;
}

BenchRow run_task(const BenchOptions &opts, const std::string &task_path, const TaskEntry &task,
                  const std::string &config) {
  BenchRow row;
  row.task = task.file;
  row.config = config;
  row.expected = task.expected;

  char tmpl[] = "/tmp/coopver-bench-XXXXXX";
  int fd = ::mkstemp(tmpl);
  if (fd < 0)
    throw Error("cannot create a temporary file");
  std::string out_path = tmpl;

  std::vector<std::string> args = {opts.exe,   "verify",          task_path,
                                   "--width",  std::to_string(task.width),
                                   "--config-name", config,
                                   "--timeout", num(opts.timeout),
                                   "--json"};
  std::vector<char *> argv;
  for (auto &a : args)
    argv.push_back(a.data());
  argv.push_back(nullptr);

  auto t0 = std::chrono::steady_clock::now();
  pid_t pid = ::fork();
  if (pid < 0) {
    ::close(fd);
    throw Error("fork failed");
  }
  if (pid == 0) {
    ::setpgid(0, 0);
    if (opts.memory_mb > 0) {
      rlimit lim{};
      lim.rlim_cur = lim.rlim_max = static_cast<rlim_t>(opts.memory_mb) << 20;
      ::setrlimit(RLIMIT_AS, &lim);
    }
    ::dup2(fd, 1);
    int devnull = ::open("/dev/null", O_WRONLY);
    if (devnull >= 0)
      ::dup2(devnull, 2);
    ::execv(argv[0], argv.data());
    ::_exit(127);
  }
  ::setpgid(pid, pid);
  ::close(fd);

  // the child enforces the task timeout itself; this is the backstop
  double hard = opts.timeout + 10;
  int status = 0;
  bool killed = false;
  for (;;) {
    pid_t r = ::waitpid(pid, &status, WNOHANG);
    if (r == pid || r < 0)
      break;
    double e = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (e > hard) {
      ::killpg(pid, SIGKILL);
      ::waitpid(pid, &status, 0);
      killed = true;
      break;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
  }
  ::killpg(pid, SIGKILL);
  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  std::ifstream in(out_path);
  std::stringstream text;
  text << in.rdbuf();
  fs::remove(out_path);
  row.wall = wall;
  if (killed) {
    row.verdict = Verdict::Timeout;
    row.note = "killed at the slot limit";
  } else {
    try {
      auto j = nlohmann::json::parse(text.str());
      row.verdict = parse_verdict(j.at("verdict").get<std::string>()).value_or(Verdict::Unknown);
      row.wall = j.at("wall").get<double>();
      row.cpu = j.at("cpu").get<double>();
      row.helped = j.at("helped").get<bool>();
      row.injected = j.at("injected").get<size_t>();
      row.note = clean(j.value("detail", ""));
    } catch (const std::exception &) {
      row.verdict = Verdict::Unknown;
      int code = WIFEXITED(status) ? WEXITSTATUS(status) : 128 + WTERMSIG(status);
      row.note = "no report (exit " + std::to_string(code) + ")";
    }
  }
  bool t = row.verdict == Verdict::True, f = row.verdict == Verdict::False;
  row.correct = (t && task.expected == Expected::True) || (f && task.expected == Expected::False);
  row.incorrect = (t && task.expected == Expected::False) || (f && task.expected == Expected::True);
  return row;
}

std::vector<BenchRow> run_bench(const BenchOptions &opts, const std::string &tasks_csv,
                                const std::vector<std::string> &configs) {
  auto tasks = load_tasks(tasks_csv);
  fs::path dir = fs::path(tasks_csv).parent_path();
  for (const auto &c : configs)
    parse_run_name(c).check();
  std::vector<std::pair<size_t, size_t>> jobs;
  for (size_t t = 0; t < tasks.size(); ++t)
    for (size_t c = 0; c < configs.size(); ++c)
      jobs.emplace_back(t, c);
  std::vector<BenchRow> rows(jobs.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t k; (k = next++) < jobs.size();) {
      auto [t, c] = jobs[k];
      try {
        rows[k] = run_task(opts, (dir / tasks[t].file).string(), tasks[t], configs[c]);
      } catch (const std::exception &e) {
        rows[k].task = tasks[t].file;
        rows[k].config = configs[c];
        rows[k].expected = tasks[t].expected;
        rows[k].note = clean(e.what());
      }
    }
  };
  std::vector<std::thread> pool;
  for (int i = 0; i < std::max(1, opts.jobs); ++i)
    pool.emplace_back(worker);
  for (auto &th : pool)
    th.join();
  return rows;
}

std::vector<SummaryRow> summarize(const std::vector<BenchRow> &rows) {
  std::vector<std::string> order;
  std::map<std::string, std::map<std::string, const BenchRow *>> by;
  for (const auto &r : rows) {
    if (!by.count(r.config))
      order.push_back(r.config);
    by[r.config][r.task] = &r;
  }
  std::vector<SummaryRow> out;
  for (const auto &cfg : order) {
    SummaryRow s;
    s.config = cfg;
    CoopConfig cc = parse_run_name(cfg);
    if (!cc.helpers.empty() && by.count(cc.master))
      s.baseline = cc.master;
    for (const auto &[task, r] : by[cfg]) {
      if (r->incorrect)
        ++s.incorrect;
      if (!r->correct)
        continue;
      ++s.correct;
      (r->verdict == Verdict::True ? s.correct_true : s.correct_false)++;
      if (s.baseline.empty())
        continue;
      auto b = by[s.baseline].find(task);
      if (b != by[s.baseline].end() && b->second->correct)
        continue;
      ++s.additional;
      (r->verdict == Verdict::True ? s.additional_true : s.additional_false)++;
    }
    out.push_back(s);
  }
  return out;
}

std::string results_csv(const std::vector<BenchRow> &rows) {
  std::ostringstream o;
  o << "task,config,expected,verdict,correct,incorrect,wall,cpu,helped,injected,note\n";
  for (const auto &r : rows)
    o << r.task << ',' << r.config << ',' << to_string(r.expected) << ','
      << to_string(r.verdict) << ',' << r.correct << ',' << r.incorrect << ',' << num(r.wall)
      << ',' << num(r.cpu) << ',' << r.helped << ',' << r.injected << ',' << clean(r.note)
      << "\n";
  return o.str();
}

std::vector<BenchRow> parse_results_csv(const std::string &text) {
  auto lines = csv_lines(text);
  if (lines.empty() ||
      lines[0] != "task,config,expected,verdict,correct,incorrect,wall,cpu,helped,injected,note")
    throw Error("not a results table");
  std::vector<BenchRow> out;
  for (size_t i = 1; i < lines.size(); ++i) {
    auto f = split(lines[i], ',');
    if (f.size() != 11)
      throw Error("results line " + std::to_string(i + 1) + ": expected 11 fields");
    BenchRow r;
    r.task = f[0];
    r.config = f[1];
    r.expected = parse_expected(f[2]);
    auto v = parse_verdict(f[3]);
    if (!v)
      throw Error("results line " + std::to_string(i + 1) + ": bad verdict");
    r.verdict = *v;
    r.correct = f[4] == "1";
    r.incorrect = f[5] == "1";
    r.wall = std::stod(f[6]);
    r.cpu = std::stod(f[7]);
    r.helped = f[8] == "1";
    r.injected = std::stoul(f[9]);
    r.note = f[10];
    out.push_back(r);
  }
  return out;
}

std::string summary_csv(const std::vector<SummaryRow> &rows) {
  std::ostringstream o;
  o << "config,baseline,correct,correct_true,correct_false,incorrect,additional,"
       "additional_true,additional_false\n";
  for (const auto &s : rows)
    o << s.config << ',' << s.baseline << ',' << s.correct << ',' << s.correct_true << ','
      << s.correct_false << ',' << s.incorrect << ',' << s.additional << ','
      << s.additional_true << ',' << s.additional_false << "\n";
  return o.str();
}

std::string quantile_csv(const std::vector<BenchRow> &rows) {
  std::vector<std::string> order;
  std::map<std::string, std::vector<double>> times;
  for (const auto &r : rows) {
    if (!times.count(r.config))
      order.push_back(r.config);
    auto &v = times[r.config];
    if (r.correct)
      v.push_back(r.wall);
  }
  std::ostringstream o;
  o << "config,n,wall\n";
  for (const auto &c : order) {
    auto v = times[c];
    std::sort(v.begin(), v.end());
    for (size_t i = 0; i < v.size(); ++i)
      o << c << ',' << i + 1 << ',' << num(v[i]) << "\n";
  }
  return o.str();
}

std::string scatter_csv(const std::vector<BenchRow> &rows) {
  std::map<std::pair<std::string, std::string>, const BenchRow *> at;
  std::vector<std::string> order;
  for (const auto &r : rows) {
    if (std::find(order.begin(), order.end(), r.config) == order.end())
      order.push_back(r.config);
    at[{r.config, r.task}] = &r;
  }
  std::ostringstream o;
  o << "task,baseline,config,baseline_wall,config_wall,baseline_verdict,config_verdict\n";
  for (const auto &cfg : order) {
    CoopConfig cc = parse_run_name(cfg);
    if (cc.helpers.empty())
      continue;
    for (const auto &r : rows) {
      if (r.config != cfg)
        continue;
      auto b = at.find({cc.master, r.task});
      if (b == at.end())
        continue;
      o << r.task << ',' << cc.master << ',' << cfg << ',' << num(b->second->wall) << ','
        << num(r.wall) << ',' << to_string(b->second->verdict) << ',' << to_string(r.verdict)
        << "\n";
    }
  }
  return o.str();
}

} // namespace coopver
