#include <fstream>
#include <sstream>
#include <thread>

#include <gtest/gtest.h>

#include "coopver/kinduction.hpp"
#include "coopver/oracle.hpp"
#include "coopver/scripted.hpp"
#include "test_util.hpp"

using namespace coopver;
using namespace coopver::test;

namespace {

struct Rig {
  Cfa cfa = load("countdown.mc");
  std::shared_ptr<VirtualClock> clock = std::make_shared<VirtualClock>();
  ScriptedMaster *master = nullptr;
  std::vector<ScriptedHelper *> helpers;
  std::unique_ptr<Coordinator> coord;

  int head() const { return cfa.loop_heads.at(0); }

  void build(const CoopConfig &cfg, MasterScript ms, std::vector<HelperScript> hs) {
    auto m = std::make_unique<ScriptedMaster>(ms, clock);
    master = m.get();
    std::vector<std::unique_ptr<HelperHandle>> hv;
    for (size_t i = 0; i < hs.size(); ++i) {
      auto h = std::make_unique<ScriptedHelper>("h" + std::to_string(i + 1), hs[i], cfa, clock);
      helpers.push_back(h.get());
      hv.push_back(std::move(h));
    }
    coord = std::make_unique<Coordinator>(cfg, std::move(m), std::move(hv), clock, 1.0);
  }

  std::vector<std::string> calls() const {
    std::vector<std::string> out;
    for (const auto &c : master->calls())
      out.push_back(std::to_string(static_cast<int>(c.time)) + " " + c.what);
    return out;
  }

  std::vector<std::string> injected_invariants() const {
    std::vector<std::string> out;
    for (const auto &w : master->injected())
      for (const auto &li : match_to_cfa(w, cfa).invariants)
        out.push_back(to_string(li.invariant));
    return out;
  }
};

CoopConfig example_config() {
  CoopConfig c;
  c.restart_master = true;
  c.term_after_first_inv = false;
  c.timer_m = 50;
  c.timeout_h = 300;
  c.timeout = 900;
  return c;
}

std::vector<HelperScript> example_helpers(int head) {
  return {
      {10.0, HelperStatus::Completed, {{head, Expr::bool_lit(true)}}},
      {50.0, HelperStatus::Completed, {{head, parse_bool_expr("n >= y")}}},
      {100.0, HelperStatus::Completed, {{head, parse_bool_expr("n == x + y")}}},
      {500.0, HelperStatus::Completed, {{head, parse_bool_expr("n - x - y == 0")}}},
  };
}

} // namespace

TEST(Coordinator, ExampleScenario) {
  Rig r;
  r.build(example_config(), MasterScript{}, example_helpers(r.head()));
  RunReport rep = r.coord->run();
  EXPECT_EQ(rep.verdict.verdict, Verdict::True);
  ASSERT_EQ(rep.helpers.size(), 4u);
  EXPECT_TRUE(rep.helpers[0].trivial);
  EXPECT_FALSE(rep.helpers[0].injected);
  EXPECT_TRUE(rep.helpers[1].injected);
  EXPECT_TRUE(rep.helpers[2].injected);
  EXPECT_EQ(rep.helpers[3].result.status, HelperStatus::TimedOut);
  EXPECT_EQ(rep.witnesses_injected, 2u);
  EXPECT_EQ(r.injected_invariants(), (std::vector<std::string>{"n >= y", "n == x + y"}));
  // helpers start at 50, the sleeper times out at 350
  EXPECT_EQ(r.calls(), (std::vector<std::string>{"0 start(50)", "350 stop", "350 inject(2)",
                                                  "350 close_inbox", "350 start(inf)"}));
  EXPECT_DOUBLE_EQ(rep.master_solo, 50);
  EXPECT_DOUBLE_EQ(rep.helper_phase, 300);
  EXPECT_DOUBLE_EQ(rep.wall, 351);
}

TEST(Coordinator, FirstWitnessOnly) {
  Rig r;
  CoopConfig c = example_config();
  c.term_after_first_inv = true;
  r.build(c, MasterScript{}, example_helpers(r.head()));
  RunReport rep = r.coord->run();
  EXPECT_EQ(rep.verdict.verdict, Verdict::True);
  EXPECT_EQ(rep.helpers[2].result.status, HelperStatus::Stopped);
  EXPECT_EQ(rep.helpers[3].result.status, HelperStatus::Stopped);
  EXPECT_EQ(rep.witnesses_injected, 1u);
  EXPECT_EQ(r.injected_invariants(), (std::vector<std::string>{"n >= y"}));
  int completed_after_first = 0;
  for (size_t i = 2; i < rep.helpers.size(); ++i)
    completed_after_first += rep.helpers[i].result.status == HelperStatus::Completed;
  EXPECT_LE(completed_after_first, 1);
  EXPECT_EQ(r.calls().at(1), "100 stop");
}

TEST(Coordinator, EmptyRosterIsStandalone) {
  Rig r;
  MasterScript ms;
  ms.solve_after = 70;
  CoopConfig c = example_config();
  r.build(c, ms, {});
  RunReport rep = r.coord->run();
  EXPECT_EQ(rep.verdict.verdict, Verdict::True);
  EXPECT_DOUBLE_EQ(rep.wall, 70);
  EXPECT_EQ(rep.witnesses_injected, 0u);
  EXPECT_EQ(r.calls(), (std::vector<std::string>{"0 close_inbox", "0 start(50)"}));
}

TEST(Coordinator, SolvedAloneStartsNoHelper) {
  Rig r;
  MasterScript ms;
  ms.solve_after = 20;
  r.build(example_config(), ms, example_helpers(r.head()));
  RunReport rep = r.coord->run();
  EXPECT_EQ(rep.verdict.verdict, Verdict::True);
  EXPECT_FALSE(rep.helped);
  for (auto *h : r.helpers)
    EXPECT_FALSE(h->was_started());
  for (const auto &h : rep.helpers)
    EXPECT_FALSE(h.started);
}

TEST(Coordinator, TrivialWitnessesNeverInjected) {
  Rig r;
  int h = r.head();
  r.build(example_config(), MasterScript{},
          {{5.0, HelperStatus::Completed, {{h, Expr::bool_lit(true)}}},
           {6.0, HelperStatus::Completed, {}}});
  MasterScript ms;
  RunReport rep = r.coord->run();
  EXPECT_EQ(rep.witnesses_injected, 0u);
  EXPECT_TRUE(r.master->injected().empty());
  // nothing to inject: the master keeps running and never solves
  EXPECT_EQ(rep.verdict.verdict, Verdict::Timeout);
}

TEST(Coordinator, AllHelpersFailedMasterContinues) {
  Rig r;
  MasterScript ms;
  ms.solve_after = 120;
  r.build(example_config(), ms,
          {{5.0, HelperStatus::Failed, {}}, {std::nullopt, HelperStatus::Completed, {}}});
  RunReport rep = r.coord->run();
  EXPECT_EQ(rep.verdict.verdict, Verdict::True);
  EXPECT_EQ(rep.helpers[0].result.status, HelperStatus::Failed);
  // master solved while the second helper was still running
  EXPECT_EQ(rep.helpers[1].result.status, HelperStatus::Stopped);
  for (const auto &c : r.calls())
    EXPECT_EQ(c.find("stop"), std::string::npos) << c;
}

TEST(Coordinator, ContinueInjectsIntoRunningMaster) {
  Rig r;
  CoopConfig c = example_config();
  c.restart_master = false;
  r.build(c, MasterScript{}, example_helpers(r.head()));
  RunReport rep = r.coord->run();
  EXPECT_EQ(rep.verdict.verdict, Verdict::True);
  EXPECT_EQ(r.calls(),
            (std::vector<std::string>{"0 start(50)", "350 inject(2)", "350 close_inbox"}));
}

TEST(Coordinator, RestartIsOneStopStartSequence) {
  Rig r;
  r.build(example_config(), MasterScript{}, example_helpers(r.head()));
  r.coord->run();
  int starts = 0, stops = 0;
  for (const auto &c : r.master->calls()) {
    starts += c.what.rfind("start", 0) == 0;
    stops += c.what == "stop";
  }
  EXPECT_EQ(starts, 2);
  EXPECT_EQ(stops, 1);
}

TEST(Coordinator, HelperTimeoutCappedByTaskBudget) {
  Rig r;
  CoopConfig c = example_config();
  c.timeout = 200;
  r.build(c, MasterScript{}, {{std::nullopt, HelperStatus::Completed, {}}});
  RunReport rep = r.coord->run();
  EXPECT_EQ(rep.helpers[0].result.status, HelperStatus::TimedOut);
  EXPECT_DOUBLE_EQ(rep.helper_phase, 150);
  EXPECT_EQ(rep.verdict.verdict, Verdict::Timeout);
}

TEST(Coordinator, DeterministicReports) {
  auto once = [] {
    Rig r;
    r.build(example_config(), MasterScript{}, example_helpers(r.head()));
    RunReport rep = r.coord->run();
    std::ostringstream s;
    for (const auto &e : rep.events)
      s << e.time << " " << e.what << "\n";
    return s.str();
  };
  std::string a = once();
  EXPECT_EQ(a, once());
  EXPECT_NE(a.find("helper h1 completed with a trivial witness"), std::string::npos);
}

namespace {

// Forwards to a scripted helper and cancels the whole run once the clock
// passes a given time.
class StoppingHelper : public HelperHandle {
public:
  StoppingHelper(std::unique_ptr<HelperHandle> inner, std::shared_ptr<Clock> clock, double at,
                 Coordinator **coord)
      : inner_(std::move(inner)), clock_(std::move(clock)), at_(at), coord_(coord) {}
  std::string name() const override { return inner_->name(); }
  void start(double t) override { inner_->start(t); }
  bool finished() override {
    if (clock_->now() >= at_)
      (*coord_)->stop_all();
    return inner_->finished();
  }
  HelperResult result() override { return inner_->result(); }
  Witness solution() override { return inner_->solution(); }
  void stop() override { inner_->stop(); }

private:
  std::unique_ptr<HelperHandle> inner_;
  std::shared_ptr<Clock> clock_;
  double at_;
  Coordinator **coord_;
};

} // namespace

TEST(Coordinator, StopAll) {
  Cfa cfa = load("countdown.mc");
  auto clock = std::make_shared<VirtualClock>();
  Coordinator *cp = nullptr;
  std::vector<std::unique_ptr<HelperHandle>> hv;
  auto scripts = example_helpers(cfa.loop_heads.at(0));
  for (size_t i = 0; i < scripts.size(); ++i)
    hv.push_back(std::make_unique<StoppingHelper>(
        std::make_unique<ScriptedHelper>("h" + std::to_string(i), scripts[i], cfa, clock),
        clock, 120, &cp));
  Coordinator coord(example_config(), std::make_unique<ScriptedMaster>(MasterScript{}, clock),
                    std::move(hv), clock, 1.0);
  cp = &coord;
  RunReport rep = coord.run();
  EXPECT_EQ(rep.verdict.verdict, Verdict::Unknown);
  for (const auto &h : rep.helpers) {
    auto s = h.result.status;
    EXPECT_TRUE(s == HelperStatus::Completed || s == HelperStatus::TimedOut ||
                s == HelperStatus::Failed || s == HelperStatus::Stopped);
  }
  auto snapshot = [](const RunReport &x) {
    std::ostringstream s;
    s << to_string(x.verdict.verdict) << x.wall << x.events.size();
    return s.str();
  };
  EXPECT_EQ(rep.helpers[2].result.status, HelperStatus::Stopped);
  EXPECT_EQ(rep.helpers[3].result.status, HelperStatus::Stopped);
  coord.stop_all();
  EXPECT_EQ(snapshot(coord.report()), snapshot(rep));
  coord.stop_all();
  EXPECT_EQ(snapshot(coord.report()), snapshot(rep));
}

TEST(Coordinator, StopAfterVerdictKeepsReport) {
  Rig r;
  r.build(example_config(), MasterScript{}, example_helpers(r.head()));
  RunReport rep = r.coord->run();
  r.coord->stop_all();
  RunReport after = r.coord->report();
  EXPECT_EQ(after.verdict.verdict, rep.verdict.verdict);
  EXPECT_EQ(after.events.size(), rep.events.size());
  EXPECT_EQ(after.wall, rep.wall);
}

TEST(Config, ParsesTableNames) {
  CoopConfig c = parse_coop_config(R"(# cooperative run
restartMaster = false
termAfterFirstInv = false
timerM = 100
timeoutH = 200
master = kind
helpers = affine, template
)");
  EXPECT_FALSE(c.restart_master);
  EXPECT_FALSE(c.term_after_first_inv);
  EXPECT_EQ(c.timer_m, 100);
  EXPECT_EQ(c.timeout_h, 200);
  ASSERT_EQ(c.helpers.size(), 2u);
  EXPECT_EQ(c.run_name(), "kind-affine-template-100-wait-200");
  c.check();
  CoopConfig back = parse_coop_config(write_coop_config(c));
  EXPECT_EQ(back.run_name(), c.run_name());
  c.term_after_first_inv = true;
  EXPECT_EQ(c.run_name(), "kind-affine-template-100");
  c.helpers.clear();
  EXPECT_EQ(c.run_name(), "kind");
}

TEST(Config, Rejects) {
  EXPECT_THROW(parse_coop_config("restartMaster = maybe\n"), Error);
  EXPECT_THROW(parse_coop_config("timerM = soon\n"), Error);
  EXPECT_THROW(parse_coop_config("unknownKey = 1\n"), Error);
  CoopConfig c = parse_coop_config("timerM = 1000\ntimeout = 10\n");
  EXPECT_THROW(c.check(), Error);
  c = parse_coop_config("timeoutH = 0\n");
  EXPECT_THROW(c.check(), Error);
  c = parse_coop_config("helpers = nosuch\n");
  EXPECT_THROW(c.check(), Error);
}

TEST(Config, ExternalHelperSection) {
  std::string text = std::string("helpers = ext\n[helper.ext]\nexecutable = ") +
                     COOPVER_HELPER_EXE + "\nencoding = assert_stmt\noutput = raw\n" +
                     "args = --analysis affine --emit raw\n";
  CoopConfig c = parse_coop_config(text);
  ASSERT_TRUE(c.helpers.at(0).external);
  EXPECT_EQ(c.helpers[0].external->encoding, EncodingStyle::AssertStmt);
  EXPECT_EQ(c.helpers[0].external->extra_args.size(), 4u);
  c.check();
}

namespace {

std::string read_text(const std::string &path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

} // namespace

TEST(Cooperative, KindWithAffineProvesCountdown) {
  Cfa cfa = load("countdown.mc");
  CoopConfig c;
  c.timer_m = 0.2;
  c.timeout_h = 30;
  c.timeout = 120;
  c.bound_cap = 4;
  c.builtin_aux = false;
  c.helpers = {{"affine", std::nullopt}};
  RunReport rep = run_cooperative(cfa, extract_property(cfa), c);
  EXPECT_EQ(rep.verdict.verdict, Verdict::True) << rep.verdict.detail;
  EXPECT_TRUE(rep.helped);
  EXPECT_EQ(rep.witnesses_injected, 1u);
}

TEST(Cooperative, ExternalHelperProvesCountdown) {
  Cfa cfa = load("countdown.mc");
  CoopConfig c;
  c.timer_m = 0.2;
  c.timeout_h = 30;
  c.timeout = 120;
  c.bound_cap = 4;
  c.builtin_aux = false;
  c.program_text = read_text(data_path("countdown.mc"));
  ExternalHelperSpec s;
  s.name = "affine-raw";
  s.executable = COOPVER_HELPER_EXE;
  s.encoding = EncodingStyle::VerifierErrorCall;
  s.output = HelperOutputKind::RawInvariants;
  s.extra_args = {"--analysis", "affine", "--emit", "raw"};
  c.helpers = {{"affine-raw", s}};
  RunReport rep = run_cooperative(cfa, extract_property(cfa), c);
  EXPECT_EQ(rep.verdict.verdict, Verdict::True) << rep.verdict.detail;
}

TEST(Cooperative, UnsafeStaysFalse) {
  Cfa cfa = load("countdown_unsafe.mc", 4);
  auto prop = extract_property(cfa);
  for (const char *m : {"kind", "predabs"}) {
    CoopConfig c;
    c.master = m;
    c.timer_m = 0;
    c.timeout = 60;
    c.helpers = {{"affine", std::nullopt}, {"interval", std::nullopt}};
    RunReport rep = run_cooperative(cfa, prop, c);
    EXPECT_EQ(rep.verdict.verdict, Verdict::False) << m << " " << rep.verdict.detail;
    ASSERT_TRUE(rep.verdict.counterexample);
    EXPECT_EQ(brute_force_verify(cfa, prop).verdict, Verdict::False);
  }
}
