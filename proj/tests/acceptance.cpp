// Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "coopver/bench.hpp"
#include "coopver/exchange.hpp"
#include "coopver/kinduction.hpp"
#include "coopver/oracle.hpp"
#include "coopver/scripted.hpp"
#include "coopver/validity.hpp"
#include "random_program.hpp"

using namespace coopver;
namespace fs = std::filesystem;

namespace {

// Pinned tolerances.
constexpr double kFlagshipSeconds = 10;
constexpr int kRandomPrograms = 200;
constexpr double kOracleSuiteSeconds = 600;
constexpr int kFalseCandidates = 50;
constexpr int kRobustnessTasks = 20;
constexpr double kBenchBudget = 60;
constexpr double kMedianRatio = 1.5;
constexpr int kRoundTrips = 1000;
constexpr int kMapperTasks = 20;

const std::string kCorpus = COOPVER_CORPUS_DIR;

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock_ = std::chrono::steady_clock;

double since(Clock_::time_point t) {
  return std::chrono::duration<double>(Clock_::now() - t).count();
}

std::string read_text(const std::string &path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Cfa parse_at(const std::string &text, int width) {
  ParseOptions o;
  o.width = width;
  return parse_program(text, o);
}

std::vector<TaskEntry> corpus() { return load_tasks(kCorpus + "/tasks.csv"); }

std::string task_text(const TaskEntry &t) { return read_text(kCorpus + "/" + t.file); }

Outcome flagship() {
  auto t0 = Clock_::now();
  Cfa cfa = parse_at(task_text({"s01_countdown.mc", Expected::True, 8}), 8);
  SafetyProperty prop = extract_property(cfa);
  if (cfa.line_of(prop.location) != 8 || to_string(prop.condition) != "n == y")
    return {false, "property is not (8, n == y)"};
  CoopConfig c;
  c.master = "kind";
  c.timer_m = 0.5;
  c.timeout_h = 30;
  c.timeout = 60;
  c.helpers = {{"affine", std::nullopt}};
  RunReport rep = run_cooperative(cfa, prop, c);
  double secs = since(t0);
  ExprPtr want = parse_bool_expr("n - x - y == 0");
  bool found = false;
  for (const auto &h : rep.helpers)
    if (h.injected)
      for (const auto &li : h.result.invariants)
        found = found || equivalent(li.invariant, want, cfa.symbols);
  std::ostringstream d;
  d << "verdict=" << to_string(rep.verdict.verdict) << " invariant=" << (found ? "yes" : "no")
    << " runtime=" << secs << "s (limit " << kFlagshipSeconds << "s)";
  return {rep.verdict.verdict == Verdict::True && found && secs < kFlagshipSeconds, d.str()};
}

Outcome oracle_equivalence() {
  auto t0 = Clock_::now();
  test::ProgramGenerator gen(20240611);
  int runs = 0, decided = 0, mismatches = 0, programs = 0;
  std::string first_bad;
  while (programs < kRandomPrograms) {
    std::string src = gen.next();
    Cfa cfa = parse_at(src, 4);
    SafetyProperty prop = extract_property(cfa);
    Verdict truth = brute_force_verify(cfa, prop).verdict;
    if (truth != Verdict::True && truth != Verdict::False)
      continue;
    ++programs;
    for (const char *m : {"kind", "predabs"}) {
      std::vector<CoopConfig> cfgs;
      CoopConfig solo;
      solo.master = m;
      cfgs.push_back(solo);
      for (bool restart : {true, false})
        for (bool first : {true, false}) {
          CoopConfig c;
          c.master = m;
          c.restart_master = restart;
          c.term_after_first_inv = first;
          c.helpers = {{"affine", std::nullopt}, {"interval", std::nullopt},
                       {"template", std::nullopt}};
          cfgs.push_back(c);
        }
      for (auto &c : cfgs) {
        c.timer_m = 0.01;
        c.timeout = 20;
        c.timeout_h = 10;
        c.bound_cap = 24;
        Verdict v = run_cooperative(cfa, prop, c).verdict.verdict;
        ++runs;
        if (v != Verdict::True && v != Verdict::False)
          continue;
        ++decided;
        if (v != truth) {
          ++mismatches;
          if (first_bad.empty())
            first_bad = c.run_name() + " said " + to_string(v) + " on:\n" + src;
        }
      }
    }
  }
  double secs = since(t0);
  std::ostringstream d;
  d << programs << " programs, " << runs << " runs, " << decided << " decided, " << mismatches
    << " disagreements, " << secs << "s (limit " << kOracleSuiteSeconds << "s)";
  if (!first_bad.empty())
    d << "\n" << first_bad;
  return {mismatches == 0 && secs < kOracleSuiteSeconds, d.str()};
}

// Random linear candidates over the program variables that the oracle
// certifies false at the loop head.
std::vector<ExprPtr> false_candidates(const Cfa &cfa, int head, std::mt19937_64 &rng) {
  std::vector<std::string> vars;
  for (const auto &v : cfa.symbols.vars())
    vars.push_back(v.name);
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  static const char *ops[] = {"<", "<=", "==", "!=", ">", ">="};
  std::vector<ExprPtr> out;
  std::set<std::string> seen;
  for (int tries = 0; out.size() < static_cast<size_t>(kFalseCandidates) && tries < 20000;
       ++tries) {
    std::string lhs = vars[pick(0, static_cast<int>(vars.size()) - 1)];
    if (pick(0, 1))
      lhs += std::string(pick(0, 1) ? " + " : " - ") + vars[pick(0, static_cast<int>(vars.size()) - 1)];
    std::string text = lhs + " " + ops[pick(0, 5)] + " " + std::to_string(pick(0, 40));
    if (!seen.insert(text).second)
      continue;
    ExprPtr e = parse_bool_expr(text);
    if (holds_at(cfa, e, head) == std::optional<bool>(false))
      out.push_back(e);
  }
  return out;
}

Outcome robustness() {
  std::mt19937_64 rng(7);
  int tasks = 0, runs = 0, changed = 0, injected = 0;
  std::string first_bad;
  for (const auto &t : corpus()) {
    if (tasks == kRobustnessTasks)
      break;
    if (t.expected != Expected::True)
      continue;
    Cfa cfa = parse_at(task_text(t), t.width);
    if (cfa.loop_heads.empty())
      continue;
    ++tasks;
    SafetyProperty prop = extract_property(cfa);
    auto cands = false_candidates(cfa, cfa.loop_heads[0], rng);
    if (cands.size() < static_cast<size_t>(kFalseCandidates))
      return {false, t.file + ": only " + std::to_string(cands.size()) + " false candidates"};
    std::vector<Witness> ws;
    for (const auto &e : cands)
      ws.push_back(skeleton_witness(cfa, {{cfa.loop_heads[0], e}}, "wrong"));
    injected += static_cast<int>(ws.size());
    for (const char *m : {"kind", "predabs"}) {
      MasterConfig mc;
      mc.timeout = 30;
      mc.clock = real_clock();
      auto base = make_master(m);
      base->close_inbox();
      Verdict before = base->run(cfa, prop, mc).verdict;
      auto with = make_master(m);
      with->inject(ws);
      with->close_inbox();
      Verdict after = with->run(cfa, prop, mc).verdict;
      runs += 2;
      if (before != after) {
        ++changed;
        if (first_bad.empty())
          first_bad = std::string(m) + " on " + t.file + ": " + to_string(before) + " -> " +
                      to_string(after);
      }
    }
  }
  std::ostringstream d;
  d << tasks << " safe tasks, " << injected << " false candidates injected, " << runs
    << " runs, " << changed << " verdicts changed";
  if (!first_bad.empty())
    d << " (" << first_bad << ")";
  return {tasks == kRobustnessTasks && changed == 0, d.str()};
}

Outcome algorithm_conformance() {
  auto once = [](std::vector<std::string> &events, std::vector<std::string> &calls,
                 RunReport &rep, std::vector<std::string> &injected) {
    Cfa cfa = parse_at(task_text({"s01_countdown.mc", Expected::True, 8}), 8);
    auto clock = std::make_shared<VirtualClock>();
    int h = cfa.loop_heads.at(0);
    std::vector<HelperScript> scripts = {
        {10.0, HelperStatus::Completed, {{h, Expr::bool_lit(true)}}},
        {50.0, HelperStatus::Completed, {{h, parse_bool_expr("n >= y")}}},
        {100.0, HelperStatus::Completed, {{h, parse_bool_expr("n == x + y")}}},
        {500.0, HelperStatus::Completed, {{h, parse_bool_expr("n - x - y == 0")}}},
    };
    std::vector<std::unique_ptr<HelperHandle>> hs;
    for (size_t i = 0; i < scripts.size(); ++i)
      hs.push_back(std::make_unique<ScriptedHelper>("h" + std::to_string(i + 1), scripts[i],
                                                    cfa, clock));
    auto m = std::make_unique<ScriptedMaster>(MasterScript{}, clock);
    ScriptedMaster *mp = m.get();
    CoopConfig c;
    c.restart_master = true;
    c.term_after_first_inv = false;
    c.timer_m = 50;
    c.timeout_h = 300;
    c.timeout = 900;
    Coordinator coord(c, std::move(m), std::move(hs), clock, 1.0);
    rep = coord.run();
    for (const auto &e : rep.events) {
      std::ostringstream s;
      s << e.time << " " << e.what;
      events.push_back(s.str());
    }
    for (const auto &call : mp->calls())
      calls.push_back(std::to_string(static_cast<int>(call.time)) + " " + call.what);
    for (const auto &w : mp->injected())
      for (const auto &li : match_to_cfa(w, cfa).invariants)
        injected.push_back(to_string(li.invariant));
  };
  std::vector<std::string> ev1, ev2, calls1, calls2, inj1, inj2;
  RunReport r1, r2;
  once(ev1, calls1, r1, inj1);
  once(ev2, calls2, r2, inj2);
  const std::vector<std::string> want_events = {
      "0 master start timerM=50",
      "50 master requestsForHelp",
      "50 helper h1 start timeoutH=300",
      "50 helper h2 start timeoutH=300",
      "50 helper h3 start timeoutH=300",
      "50 helper h4 start timeoutH=300",
      "60 helper h1 completed with a trivial witness",
      "100 helper h2 completed with a witness",
      "150 helper h3 completed with a witness",
      "350 helper h4 timed_out",
      "350 master stop",
      "350 master inject 2",
      "350 master start timerM=inf",
      "351 result true",
  };
  const std::vector<std::string> want_calls = {"0 start(50)", "350 stop", "350 inject(2)",
                                               "350 close_inbox", "350 start(inf)"};
  bool ok = ev1 == want_events && ev1 == ev2 && calls1 == want_calls &&
            inj1 == std::vector<std::string>{"n >= y", "n == x + y"} &&
            r1.verdict.verdict == Verdict::True;
  std::ostringstream d;
  d << ev1.size() << " events, deterministic=" << (ev1 == ev2 ? "yes" : "no")
    << ", injected={";
  for (size_t i = 0; i < inj1.size(); ++i)
    d << (i ? ", " : "") << inj1[i];
  d << "}";
  if (!ok) {
    d << "\nevent log:";
    for (const auto &e : ev1)
      d << "\n  " << e;
  }
  return {ok, d.str()};
}

struct BenchData {
  std::vector<BenchRow> rows;
  double secs = 0;
  bool ok = false;
  std::string error;
};

BenchData &bench() {
  static BenchData data;
  static bool ran = false;
  if (ran)
    return data;
  ran = true;
  auto t0 = Clock_::now();
  BenchOptions o;
  o.exe = COOPVER_EXE;
  o.timeout = kBenchBudget;
  try {
    data.rows = run_bench(o, kCorpus + "/tasks.csv",
                          {"kind", "kind-affine-5", "predabs", "predabs-affine-5"});
    data.ok = true;
  } catch (const std::exception &e) {
    data.error = e.what();
  }
  data.secs = since(t0);
  return data;
}

Outcome cooperative_gain() {
  auto &b = bench();
  if (!b.ok)
    return {false, b.error};
  auto summary = summarize(b.rows);
  bool strict_gain = false, no_false = true;
  int incorrect = 0;
  std::ostringstream d;
  for (const auto &s : summary) {
    incorrect += s.incorrect;
    if (!s.baseline.empty()) {
      int base = 0;
      for (const auto &t : summary)
        if (t.config == s.baseline)
          base = t.correct;
      strict_gain = strict_gain || s.correct > base;
      no_false = no_false && s.additional_false == 0;
    }
    d << s.config << ": " << s.correct << " correct (" << s.correct_true << " true, "
      << s.correct_false << " false, +" << s.additional << ") ";
  }
  size_t tasks = corpus().size();
  d << "over " << tasks << " tasks in " << b.secs << "s";
  return {strict_gain && no_false && incorrect == 0 && tasks >= 25, d.str()};
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  size_t n = v.size();
  return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2;
}

Outcome efficiency() {
  auto &b = bench();
  if (!b.ok)
    return {false, b.error};
  std::map<std::pair<std::string, std::string>, const BenchRow *> at;
  for (const auto &r : b.rows)
    at[{r.config, r.task}] = &r;
  bool ok = true;
  std::ostringstream d;
  for (const auto &[base, coop] : std::vector<std::pair<std::string, std::string>>{
           {"kind", "kind-affine-5"}, {"predabs", "predabs-affine-5"}}) {
    std::vector<double> bw, cw;
    for (const auto &r : b.rows) {
      if (r.config != base || !r.correct)
        continue;
      const BenchRow *c = at[{coop, r.task}];
      if (c && c->correct) {
        bw.push_back(r.wall);
        cw.push_back(c->wall);
      }
    }
    if (bw.empty()) {
      d << base << ": no common tasks ";
      ok = false;
      continue;
    }
    double mb = median(bw), mc = median(cw);
    ok = ok && mc <= kMedianRatio * mb;
    d << base << ": " << bw.size() << " common, median " << mc << "s vs " << mb << "s; ";
  }
  d << "(limit " << kMedianRatio << "x)";
  return {ok, d.str()};
}

ExprPtr random_invariant(const Cfa &cfa, std::mt19937_64 &rng) {
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  const auto &vars = cfa.symbols.vars();
  static const char *ops[] = {"<", "<=", "==", "!=", ">", ">="};
  std::function<std::string(int)> gen = [&](int depth) -> std::string {
    if (depth > 0 && pick(0, 2) == 0)
      return "(" + gen(depth - 1) + (pick(0, 1) ? " && " : " || ") + gen(depth - 1) + ")";
    std::string a = vars[pick(0, static_cast<int>(vars.size()) - 1)].name;
    if (pick(0, 1))
      a += std::string(pick(0, 1) ? " + " : " - ") + std::to_string(pick(1, 9)) + " * " +
           vars[pick(0, static_cast<int>(vars.size()) - 1)].name;
    return a + " " + ops[pick(0, 5)] + " " + std::to_string(pick(-20, 300));
  };
  return parse_bool_expr(gen(2));
}

Outcome witness_interchange() {
  std::mt19937_64 rng(99);
  std::vector<Cfa> cfas;
  for (const auto &t : corpus())
    cfas.push_back(parse_at(task_text(t), t.width));
  int identical = 0;
  for (int i = 0; i < kRoundTrips; ++i) {
    const Cfa &cfa = cfas[i % cfas.size()];
    std::map<int, ExprPtr> inv;
    for (int h : cfa.loop_heads)
      if (rng() % 4 != 0)
        inv[h] = random_invariant(cfa, rng);
    Witness w = skeleton_witness(cfa, inv, "gen<" + std::to_string(i) + ">&\"q\"");
    w.metadata.extras["note"] = "round trip #" + std::to_string(i) + " <&>";
    if (!w.states.empty())
      w.states[rng() % w.states.size()].extras["color"] = "c" + std::to_string(rng() % 7);
    std::string first = write_graphml(w);
    std::string second = write_graphml(read_graphml(first));
    std::string third = write_graphml(read_graphml(second));
    identical += first == second && second == third;
  }
  Cfa fig = parse_at(task_text({"s01_countdown.mc", Expected::True, 8}), 8);
  auto m = match_to_cfa(read_graphml(read_text(COOPVER_TEST_DATA "/countdown_witness.graphml")), fig);
  bool golden = m.invariants.size() == 1 && m.invariants[0].loop_head == fig.loop_heads.at(0) &&
                to_string(m.invariants[0].invariant) == "n == x + y";
  std::ostringstream d;
  d << identical << "/" << kRoundTrips << " round trips byte-identical; golden file yields "
    << (m.invariants.empty() ? std::string("nothing") : to_string(m.invariants[0].invariant));
  return {identical == kRoundTrips && golden, d.str()};
}

Outcome mapper_fidelity() {
  auto tasks = corpus();
  std::sort(tasks.begin(), tasks.end(),
            [](const TaskEntry &a, const TaskEntry &b) { return a.file < b.file; });
  tasks.resize(std::min<size_t>(tasks.size(), kMapperTasks));
  const EncodingStyle styles[] = {EncodingStyle::ErrorLabel, EncodingStyle::VerifierErrorCall,
                                  EncodingStyle::AssertStmt};
  auto lines = [](const std::string &t) {
    std::vector<std::string> out;
    std::istringstream in(t);
    for (std::string l; std::getline(in, l);)
      out.push_back(l);
    return out;
  };
  int checks = 0, bad = 0;
  std::string first_bad;
  for (const auto &t : tasks) {
    std::string src = task_text(t);
    Cfa orig = parse_at(src, t.width);
    Verdict truth = brute_force_verify(orig, extract_property(orig)).verdict;
    std::set<int> touched;
    for (const auto &s : orig.property_sites)
      for (int l = s.start_line; l <= s.end_line; ++l)
        touched.insert(l);
    auto lo = lines(src);
    for (auto style : styles) {
      std::string mapped = map_property(src, style);
      Cfa m = parse_at(mapped, t.width);
      bool same = brute_force_verify(m, extract_property(m)).verdict == truth;
      auto lm = lines(mapped);
      bool untouched = lm.size() == lo.size();
      for (size_t i = 0; untouched && i < lo.size(); ++i)
        if (!touched.count(static_cast<int>(i) + 1) && lo[i] != lm[i])
          untouched = false;
      ++checks;
      if (!(same && untouched)) {
        ++bad;
        if (first_bad.empty())
          first_bad = t.file + " to " + to_string(style);
      }
    }
  }
  std::ostringstream d;
  d << tasks.size() << " tasks x 3 styles: " << checks - bad << "/" << checks
    << " agree with identical untouched lines";
  if (!first_bad.empty())
    d << " (first failure: " << first_bad << ")";
  return {bad == 0 && tasks.size() == static_cast<size_t>(kMapperTasks), d.str()};
}

} // namespace

int main(int argc, char **argv) {
  std::set<int> only;
  for (int i = 1; i < argc; ++i)
    only.insert(std::atoi(argv[i]));
  struct Criterion {
    int id;
    const char *name;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {1, "flagship cooperation on the countdown task", flagship},
      {2, "oracle equivalence on random programs", oracle_equivalence},
      {3, "wrong-invariant robustness", robustness},
      {4, "cooperation loop conformance (scripted scenario)", algorithm_conformance},
      {5, "cooperative gain on the corpus", cooperative_gain},
      {6, "efficiency non-regression", efficiency},
      {7, "witness interchange", witness_interchange},
      {8, "mapper fidelity", mapper_fidelity},
  };
  int failed = 0;
  for (const auto &c : criteria) {
    if (!only.empty() && !only.count(c.id))
      continue;
    auto t0 = Clock_::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception &e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << c.id << " " << c.name << ": "
              << o.detail << " [" << since(t0) << "s]" << std::endl;
  }
  return failed ? 1 : 0;
}
