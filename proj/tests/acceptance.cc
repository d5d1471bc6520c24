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

// Acceptance run: one PASS/FAIL line per criterion. Tolerances and budgets
// are fixed here and not configurable.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#include "condisc/auction.h"
#include "condisc/devices.h"
#include "condisc/disclosure.h"
#include "condisc/mountain.h"
#include "condisc/programs.h"
#include "condisc/solvers.h"
#include "condisc/war.h"
#include "engine_props.h"
#include "solver_cases.h"

namespace condisc {
namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string Fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), format, v);
  return buf;
}

std::shared_ptr<const SirbotPlan> CooperationPlan(const BayesianGame& g,
                                                  double eps) {
  std::vector<std::size_t> coop(g.num_joint_types(), 0);
  return MakeSirbotPlanForPolicy(g, CorrelatedPolicy::Deterministic(g, coop),
                                 eps);
}

Outcome FolkOnWar() {
  const WarGame war(WarParams{});
  const BayesianGame& g = war.game();
  const CorrelatedPolicy mu = war.TargetPolicy();
  const PayoffVector x = InducedPayoff(g, mu);
  const DeviceProfile profile = BuildFolkDevicesForPolicy(g, mu);
  const BneReport bne = VerifyBNE(g, profile);
  const bool feasible = CheckFeasible(g, x).verdict;
  const bool intir = CheckINTIR(g, x).verdict;
  const bool ic = CheckIC(g, mu, x).verdict;
  // Country 2's strong types are targeted at 0.6 and country 1 gets 0.4
  // against them.
  bool target = true;
  for (int t = 0; t < g.num_types(1); ++t) {
    if (war.IsStrong(t)) target = target && std::abs(x.at(1, t) - 0.6) <= 1e-12;
  }
  return {bne.max_gain <= 1e-9 && bne.verdict && feasible && intir && !ic &&
              target,
          "max gain " + Fmt("%.3g", bne.max_gain) + " over " +
              std::to_string(bne.deviations_checked) + " deviations; feasible " +
              (feasible ? "yes" : "no") + " INTIR " + (intir ? "yes" : "no") +
              " IC " + (ic ? "yes" : "no")};
}

Outcome Cooperation() {
  std::string detail;
  bool pass = true;
  for (int n : {2, 3}) {
    const BayesianGame g = PublicGoodsGame(n);
    const auto plan = CooperationPlan(g, 0.1);
    SimulationOptions o;
    o.trials = 10000;
    o.seed = 2024;
    const auto rows = SimulateProfile(*plan, SirbotProfile(plan), o);
    std::uint64_t hit = 0, capped = 0, deepest = 0;
    for (const TrialRow& r : rows) {
      hit += r.on_target && !r.depth_exceeded;
      capped += r.depth_exceeded;
      deepest = std::max(deepest, r.depth);
    }
    pass = pass && hit == rows.size() && capped == 0;
    detail += "n=" + std::to_string(n) + " " + std::to_string(hit) + "/" +
              std::to_string(rows.size()) + " on target (max depth " +
              std::to_string(deepest) + ") ";
  }
  return {pass, detail};
}

Outcome Exploitability() {
  const BayesianGame g = PublicGoodsGame(2);
  const double eps = 0.05;
  const auto plan = CooperationPlan(g, eps);
  const double delta = DeltaSlack(1.0, eps);
  bool pass = std::abs(delta - (1 / 0.9025 - 1)) <= 1e-12;
  std::string detail = "delta " + Fmt("%.6f", delta) + ";";
  SimulationOptions o;
  o.trials = 100000;
  o.seed = 31;
  const int j = 1;
  for (const NamedProgram& d : DeviatorLibrary(plan, j)) {
    ProgramProfile p = SirbotProfile(plan);
    p[j] = d.program;
    const ExploitabilityReport r = EstimateExploitability(*plan, p, j, d.name, o);
    bool ok = r.within_bound && r.depth_exceeded == 0;
    detail += " " + d.name + " " + Fmt("%.4f", r.mean_gain);
    if (d.name == "DiscloseThenDefect") {
      const bool punished =
          r.punished_fraction >= (1 - eps) * (1 - eps) - 3 * r.punished_se;
      ok = ok && punished;
      detail += " (punished " + Fmt("%.4f", r.punished_fraction) + ")";
    }
    pass = pass && ok;
  }
  return {pass, detail};
}

Outcome Termination() {
  const BayesianGame g = PublicGoodsGame(2);
  const auto plan = CooperationPlan(g, 0.1);
  SimulationOptions o;
  o.trials = 10000;
  o.seed = 77;
  const TerminationReport r =
      TerminationProfile(*plan, SirbotProfile(plan), o, 200);
  bool pass = r.pass && r.tail.size() == 200 && r.depth_exceeded == 0;
  double worst = -1.0;
  for (const TailPoint& t : r.tail) {
    pass = pass && std::abs(t.bound - std::pow(0.99, t.k)) <= 1e-12 &&
           t.empirical <= t.bound + 3 * t.se;
    worst = std::max(worst, t.empirical - t.bound);
  }
  return {pass, "bound at K=100 " + Fmt("%.5f", r.tail[99].bound) +
                    ", empirical " + Fmt("%.5f", r.tail[99].empirical) +
                    ", largest excess " + Fmt("%.4f", worst)};
}

Outcome WarExample() {
  const WarParams p;
  const WarEquilibrium eq = WarPbe(p);
  bool pass = eq.precondition && std::abs(eq.offer - 0.1) <= 1e-12 &&
              std::abs(eq.offer - (p.p_weak - p.c2)) <= 1e-12 &&
              eq.strong_rejects && std::abs(eq.strong_payoff - 0.5) <= 1e-12 &&
              std::abs(eq.strong_payoff - eq.disclosed_strong_payoff -
                       p.c_attack2) <= 1e-12;
  WarParams plain = p;
  plain.weak_point = false;
  const WarGame war(plain);
  const UnravelingOutcome u = SolveDisclosureGame(
      war.game(), DisclosureSpace::AllOrNothing(war.game()),
      WarContinuation(war));
  pass = pass && u.found && u.classification == Unraveling::kFull;
  return {pass, "offer " + Fmt("%.12g", eq.offer) + ", strong payoff " +
                    Fmt("%.12g", eq.strong_payoff) + ", disclosure costs " +
                    Fmt("%.12g", eq.strong_payoff - eq.disclosed_strong_payoff) +
                    ", no weak point: " +
                    (u.found ? UnravelingName(u.classification) : "none found")};
}

Outcome Auction() {
  AuctionParams p;
  p.grid = 101;
  const AuctionReport r = AuctionChecks(p);
  const bool pass = r.max_eta <= 0.02 && r.max_equilibrium_gap <= 0.01 &&
                    r.max_closed_form_gap <= 1e-12 && r.ic_witness;
  return {pass, "eta " + Fmt("%.4g", r.max_eta) + ", payoff gap " +
                    Fmt("%.4g", r.max_equilibrium_gap) + ", closed form gap " +
                    Fmt("%.3g", r.max_closed_form_gap) + ", IC witness gain " +
                    Fmt("%.4g", r.witness_gain)};
}

Outcome Mountain() {
  const MountainParams params;
  const MountainForms f(params);
  const double golden = (3 - std::sqrt(5.0)) / 2;
  bool pass = std::abs(f.TStar(1.0) - golden) <= 1e-12;
  const double sw = f.SwitchPoint();
  pass = pass && std::abs(f.TStar(sw - 1e-14) - f.TStar(sw + 1e-14)) <= 1e-12;
  const Lemma3Report lemma = Lemma3Check(f, 1.0, 1000000, 2718);
  std::string detail;
  for (const MomentCheck& c : lemma.checks) {
    pass = pass && c.pass;
    if (c.name.find("E[min]") == 0 || c.name.find("Var[theta_x]") == 0) {
      detail += c.name + " " + Fmt("%.7f", c.estimate) + " vs " +
                Fmt("%.7f", c.closed_form) + "; ";
    }
  }
  // Quoted values.
  pass = pass && std::abs(f.M2(1.0) - 0.1759547) <= 1e-6 &&
         std::abs(f.M1(1.0) - golden * golden - 0.0786895) <= 1e-6;
  const double step = 1.0 / (params.s_grid - 1);
  const double s_star = f.SStar();
  pass = pass && lemma.pass && std::abs(s_star - 1.0) <= step;
  return {pass, detail + "s* " + Fmt("%.6g", s_star)};
}

Outcome SolverOracles() {
  int f = 0, i = 0, c = 0, e = 0;
  const int cases = 200;
  for (int k = 0; k < cases; ++k) {
    const testing::SolverCase r = testing::RunSolverCase(90000 + k);
    f += r.feasible_match;
    i += r.intir_match;
    c += r.ic_match;
    e += r.efficient_match;
  }
  return {f == cases && i == cases && c == cases && e == cases,
          "feasible " + std::to_string(f) + "/200, INTIR " + std::to_string(i) +
              "/200, IC " + std::to_string(c) + "/200, efficient " +
              std::to_string(e) + "/200"};
}

Outcome EngineProperties() {
  const int traces = 1000;
  int counts[4] = {0, 0, 0, 0};
  for (int k = 0; k < traces; ++k) {
    const std::uint64_t seed = 500000 + k;
    counts[0] += testing::ReplayDeterminism(seed);
    counts[1] += testing::MemoEquality(seed);
    counts[2] += testing::UndisclosedPermutation(seed);
    counts[3] += testing::CorrelatedCollapse(seed);
  }
  bool pass = true;
  for (int v : counts) pass = pass && v == traces;
  return {pass, "replay " + std::to_string(counts[0]) + ", memo " +
                    std::to_string(counts[1]) + ", permutation " +
                    std::to_string(counts[2]) + ", collapse " +
                    std::to_string(counts[3]) + " of " +
                    std::to_string(traces)};
}

}  // namespace
}  // namespace condisc

// With an argument, runs only the criterion with that number.
int main(int argc, char** argv) {
  using condisc::Outcome;
  const int only = argc > 1 ? std::atoi(argv[1]) : 0;
  struct Criterion {
    int id;
    const char* name;
    double budget_s;  // 0: no runtime limit
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "folk theorem on the war game", 10, condisc::FolkOnWar},
      {2, "program equilibrium cooperation", 60, condisc::Cooperation},
      {3, "exploitability bound", 300, condisc::Exploitability},
      {4, "termination tail", 0, condisc::Termination},
      {5, "war game equilibrium", 0, condisc::WarExample},
      {6, "all pay auction", 0, condisc::Auction},
      {7, "mountain closed forms", 120, condisc::Mountain},
      {8, "solver oracle equivalence", 0, condisc::SolverOracles},
      {9, "engine soundness properties", 0, condisc::EngineProperties},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    if (only != 0 && c.id != only) continue;
    const auto start = condisc::Clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(condisc::Clock::now() - start).count();
    const bool in_time = c.budget_s <= 0 || secs < c.budget_s;
    const bool pass = o.pass && in_time;
    failures += !pass;
    std::printf("criterion %d %s: %s (%.1f s%s) %s\n", c.id, c.name,
                pass ? "PASS" : "FAIL", secs,
                in_time ? "" : ", over budget", o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
