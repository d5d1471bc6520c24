// Copyright 2026 The condisc Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <memory>
#include <vector>

#include "condisc/errors.h"
#include "condisc/programs.h"
#include "doctest.h"
#include "engine_props.h"

namespace condisc {
namespace {

// Plays action 0 and discloses everything without calling anyone.
class Quiet : public Program {
 public:
  explicit Quiet(int player) : Program("quiet", player) {}
  Output Run(CallContext& ctx, bool flag) const override {
    if (flag) return Output::Action(0);
    return Output::Disclosure(std::vector<bool>(ctx.num_players() - 1, true));
  }
};

// Asks `other` for a disclosure, truncated or not, and plays 1 when it
// comes back as no output.
class Asker : public Program {
 public:
  Asker(int player, int other, bool truncated)
      : Program("asker", player), other_(other), truncated_(truncated) {}
  Output Run(CallContext& ctx, bool flag) const override {
    const Output o = truncated_ ? ctx.CallTruncated(other_, false)
                                : ctx.Call(other_, false);
    if (flag) return Output::Action(o.kind == Output::Kind::kNoOutput ? 1 : 0);
    return Output::Disclosure(std::vector<bool>(ctx.num_players() - 1, false));
  }

 private:
  int other_;
  bool truncated_;
};

// Reads the other player's type without checking.
class Snoop : public Program {
 public:
  explicit Snoop(int player) : Program("snoop", player) {}
  Output Run(CallContext& ctx, bool flag) const override {
    if (!flag) return Output::Disclosure({false});
    return Output::Action(ctx.ReadType(1 - ctx.self()) % 2);
  }
};

TEST_CASE("output helpers") {
  const Output y = Output::Disclosure({true, false});
  CHECK_FALSE(y.AllOnes());
  CHECK(y.DisclosesTo(1, 0));
  CHECK_FALSE(y.DisclosesTo(1, 2));
  CHECK(y.DisclosesTo(0, 1));
  CHECK_FALSE(y.DisclosesTo(0, 2));
  CHECK(y.ToString() == "y10");
  CHECK(Output::Action(2).ToString() == "a2");
  CHECK(Output::NoOutput().ToString() == "none");
  CHECK(Output::Disclosure({true, true}).AllOnes());
}

TEST_CASE("truncated calls") {
  const BayesianGame g = PublicGoodsGame(2);
  const RandomizationSignal sig(1);
  // A truncated program that calls nobody answers normally.
  ProgramProfile p = {std::make_shared<Asker>(0, 1, true),
                      std::make_shared<Quiet>(1)};
  BaseResult r = RunBaseCalls(g, p, 0, sig, 0);
  CHECK(r.actions[0] == 0);
  // A truncated program that tries to call yields no output.
  p = {std::make_shared<Asker>(0, 1, true),
       std::make_shared<Asker>(1, 0, false)};
  r = RunBaseCalls(g, p, 0, sig, 0);
  CHECK(r.actions[0] == 1);
}

TEST_CASE("mutual unconditional calls hit the depth cap") {
  const BayesianGame g = PublicGoodsGame(2);
  const RandomizationSignal sig(1);
  ProgramProfile p = {std::make_shared<Asker>(0, 1, false),
                      std::make_shared<Asker>(1, 0, false)};
  EngineOptions o;
  o.depth_cap = 50;
  CHECK_THROWS_AS(RunBaseCalls(g, p, 0, sig, 0, o), DepthExceeded);
}

TEST_CASE("reading an undisclosed type is refused") {
  const BayesianGame g = PublicGoodsGame(2);
  const RandomizationSignal sig(1);
  ProgramProfile p = {std::make_shared<Snoop>(0), std::make_shared<Quiet>(1)};
  CHECK_THROWS_AS(RunBaseCalls(g, p, 0, sig, 0), InformationViolation);
}

TEST_CASE("public goods game") {
  const BayesianGame g = PublicGoodsGame(3);
  CHECK(g.num_players() == 3);
  CHECK(g.utility_bound() == doctest::Approx(1.0));
  // Everyone cooperates: high types get (3 - 1) / 3.
  const std::vector<int> cc = {0, 0, 0};
  const std::vector<int> hh = {1, 1, 1};
  CHECK(g.Utility(g.type_space().Encode(hh), g.action_space().Encode(cc), 0) ==
        doctest::Approx(2.0 / 3));
}

TEST_CASE("all sirbot profiles reach the target") {
  for (int n : {2, 3}) {
    const BayesianGame g = PublicGoodsGame(n);
    std::vector<std::size_t> coop(g.num_joint_types(), 0);
    const auto plan = MakeSirbotPlanForPolicy(
        g, CorrelatedPolicy::Deterministic(g, coop), 0.1);
    SimulationOptions o;
    o.trials = 300;
    const std::vector<TrialRow> rows = SimulateProfile(*plan, SirbotProfile(plan), o);
    for (const TrialRow& r : rows) {
      CHECK(r.on_target);
      CHECK_FALSE(r.punished);
    }
  }
}

TEST_CASE("deviators gain at most the slack") {
  const BayesianGame g = PublicGoodsGame(2);
  std::vector<std::size_t> coop(g.num_joint_types(), 0);
  const auto plan = MakeSirbotPlanForPolicy(
      g, CorrelatedPolicy::Deterministic(g, coop), 0.2);
  CHECK(DeltaSlack(1.0, 0.2) == doctest::Approx(1 / 0.64 - 1));
  SimulationOptions o;
  o.trials = 500;
  for (const NamedProgram& d : DeviatorLibrary(plan, 1)) {
    ProgramProfile p = SirbotProfile(plan);
    p[1] = d.program;
    const ExploitabilityReport r = EstimateExploitability(*plan, p, 1, d.name, o);
    INFO(d.name);
    CHECK(r.within_bound);
    CHECK(r.depth_exceeded == 0);
  }
}

TEST_CASE("non disclosure is always punished") {
  for (int n : {2, 3}) {
    const BayesianGame g = PublicGoodsGame(n);
    std::vector<std::size_t> coop(g.num_joint_types(), 0);
    const auto plan = MakeSirbotPlanForPolicy(
        g, CorrelatedPolicy::Deterministic(g, coop), 0.1);
    const int j = n - 1;
    ProgramProfile p = SirbotProfile(plan);
    p[j] = NeverDisclose(plan, j);
    const RandomizationSignal sig(12);
    for (std::uint64_t trial = 0; trial < 200; ++trial) {
      const std::size_t t = SampleTypes(g, sig, trial);
      const BaseResult r = RunBaseCalls(g, p, t, sig, trial);
      const std::vector<int> types = g.type_space().Decode(t);
      for (int i = 0; i < n; ++i) {
        if (i == j) continue;
        CHECK(r.actions[i] == plan->PunishAction(j, i, types, r.c));
      }
    }
  }
}

TEST_CASE("programs cannot see their depth") {
  const testing::TraceSetup s = testing::RandomSetup(77, 0.1, 0.3, 1.1);
  const RandomizationSignal sig(s.signal_seed);
  const BaseResult a = RunBaseCalls(*s.game, s.programs, s.t, sig, s.trial);
  EngineOptions shifted;
  shifted.base_depth = 40;
  shifted.depth_cap = 10000 + 39;
  shifted.u_source = [&](std::uint64_t level) {
    return sig.ULevel(s.trial, level - 39);
  };
  const BaseResult b =
      RunBaseCalls(*s.game, s.programs, s.t, sig, s.trial, shifted);
  CHECK(a.actions == b.actions);
  CHECK(a.disclosures == b.disclosures);
  CHECK(b.stats.max_depth == a.stats.max_depth + 39);
}

TEST_CASE("a fresh identity leaves the trace unchanged") {
  const BayesianGame g = PublicGoodsGame(2);
  std::vector<std::size_t> coop(g.num_joint_types(), 0);
  const auto plan = MakeSirbotPlanForPolicy(
      g, CorrelatedPolicy::Deterministic(g, coop), 0.1);
  ProgramProfile p = SirbotProfile(plan), q = p;
  q[1] = FreshIdentitySirbot(plan, 1);
  const RandomizationSignal sig(3);
  EngineOptions o;
  o.record_trace = true;
  for (std::uint64_t trial = 0; trial < 50; ++trial) {
    const std::size_t t = SampleTypes(g, sig, trial);
    const BaseResult a = RunBaseCalls(g, p, t, sig, trial, o);
    const BaseResult b = RunBaseCalls(g, q, t, sig, trial, o);
    CHECK(a.trace == b.trace);
  }
}

TEST_CASE("termination tail stays under the geometric bound") {
  const BayesianGame g = PublicGoodsGame(2);
  std::vector<std::size_t> coop(g.num_joint_types(), 0);
  const auto plan = MakeSirbotPlanForPolicy(
      g, CorrelatedPolicy::Deterministic(g, coop), 0.2);
  SimulationOptions o;
  o.trials = 1000;
  const TerminationReport r = TerminationProfile(*plan, SirbotProfile(plan), o, 50);
  CHECK(r.pass);
  for (const TailPoint& p : r.tail) {
    CHECK(p.bound == doctest::Approx(std::pow(1 - 0.04, p.k)));
  }
}

TEST_CASE("engine trace properties") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    INFO("seed " << seed);
    CHECK(testing::ReplayDeterminism(seed));
    CHECK(testing::MemoEquality(seed));
    CHECK(testing::UndisclosedPermutation(seed));
    CHECK(testing::CorrelatedCollapse(seed));
  }
}

}  // namespace
}  // namespace condisc
