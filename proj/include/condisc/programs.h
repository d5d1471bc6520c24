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

#ifndef CONDISC_PROGRAMS_H_
#define CONDISC_PROGRAMS_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "condisc/errors.h"
#include "condisc/game.h"
#include "condisc/game_io.h"
#include "condisc/signal.h"

namespace condisc {

// What a program call returns: an action (output_action = 1), a disclosure
// vector over the other players in increasing index order
// (output_action = 0), or NoOutput from a truncated call.
struct Output {
  enum class Kind { kAction, kDisclosure, kNoOutput };
  Kind kind = Kind::kNoOutput;
  int action = -1;
  std::vector<bool> bits;

  static Output Action(int a) { return {Kind::kAction, a, {}}; }
  static Output Disclosure(std::vector<bool> bits) {
    return {Kind::kDisclosure, -1, std::move(bits)};
  }
  static Output NoOutput() { return {}; }

  bool AllOnes() const;
  bool IsAction(int a) const { return kind == Kind::kAction && action == a; }
  // Bit for `reader` in a disclosure produced by `owner`.
  bool DisclosesTo(int owner, int reader) const;
  std::string ToString() const;
  bool operator==(const Output&) const = default;
};

class CallContext;

// A program of one player. Bodies see only c, U_L, U_{L+1}, their own type,
// types disclosed to them in the current call, and child calls.
class Program {
 public:
  virtual ~Program() = default;

  const std::string& id() const { return id_; }
  int player() const { return player_; }
  // Deterministic given c and the U window; memoizable.
  virtual bool pure() const { return true; }
  virtual Output Run(CallContext& ctx, bool output_action) const = 0;

 protected:
  Program(std::string id, int player) : id_(std::move(id)), player_(player) {}

 private:
  std::string id_;
  int player_;
};

using ProgramRef = std::shared_ptr<const Program>;
using ProgramProfile = std::vector<ProgramRef>;

struct TraceStats {
  std::uint64_t max_depth = 0;
  std::uint64_t evaluations = 0;  // program bodies actually run
  std::uint64_t memo_hits = 0;
  bool terminated = false;
  std::vector<Output> base_disclosures;
  std::vector<Output> base_actions;
};

class DepthExceeded : public Error {
 public:
  DepthExceeded(const std::string& what, TraceStats stats)
      : Error(what), stats_(std::move(stats)) {}
  const TraceStats& stats() const { return stats_; }

 private:
  TraceStats stats_;
};

struct CallEvent {
  int player = 0;
  bool output_action = false;
  std::uint64_t depth = 0;
  bool truncated = false;
  bool memo_hit = false;
  Output output;

  bool operator==(const CallEvent&) const = default;
};

struct EngineOptions {
  std::uint64_t depth_cap = 10000;
  bool memoize = true;
  // Depth assigned to the base calls.
  std::uint64_t base_depth = 1;
  // Replaces signal.ULevel(trial, level) when set.
  std::function<double(std::uint64_t level)> u_source;
  // Record every call, in evaluation order.
  bool record_trace = false;
};

class Engine;

class CallContext {
 public:
  double c() const;
  double U() const;      // U_L
  double UNext() const;  // U_{L+1}
  int self() const;
  int num_players() const;
  const BayesianGame& game() const;
  std::uint64_t trial() const;
  int OwnType() const;
  bool Knows(int k) const;
  // Throws InformationViolation unless k disclosed to this call.
  int ReadType(int k) const;
  // Child call at depth L + 1.
  Output Call(int k, bool output_action);
  // [p_k]: NoOutput as soon as the callee tries a child call.
  Output CallTruncated(int k, bool output_action);

 private:
  friend class Engine;
  CallContext(Engine* engine, int self, std::uint64_t depth, bool truncated);

  Engine* engine_;
  int self_;
  std::uint64_t depth_;
  bool truncated_;
  std::vector<std::optional<int>> ledger_;
};

struct BaseResult {
  std::size_t t = 0;
  double c = 0.0;
  std::vector<Output> disclosures;
  std::vector<int> actions;
  std::size_t joint_action = 0;
  TraceStats stats;
  std::vector<CallEvent> trace;
};

// Base disclosure calls, then base action calls, all at the base depth.
BaseResult RunBaseCalls(const BayesianGame& game,
                        const ProgramProfile& programs, std::size_t t,
                        const RandomizationSignal& signal,
                        std::uint64_t trial,
                        const EngineOptions& options = {});

// Shared target and punishments of a sirbot profile.
struct SirbotPlan {
  const BayesianGame* game = nullptr;
  CorrelatedPolicy mu;
  std::vector<CorrelatedPolicy> punishments;  // tau_{-j}, kMinusPlayer
  std::vector<int> default_actions;
  double eps_ground = 0.1;

  // mu_k^c(t).
  int TargetAction(int k, std::size_t t, double c) const;
  // Component i of tau_{-j}(. | t_{-j}) at c; `types` must hold t_{-j}.
  int PunishAction(int j, int i, const std::vector<int>& types,
                   double c) const;
};

std::shared_ptr<const SirbotPlan> MakeSirbotPlan(
    const BayesianGame& game, const CorrelatedPolicy& mu,
    std::vector<CorrelatedPolicy> punishments, double eps_ground,
    std::vector<int> default_actions = {});
// Feasibility witness and minimax punishments for a target payoff.
std::shared_ptr<const SirbotPlan> MakeSirbotPlanForTarget(
    const BayesianGame& game, const PayoffVector& x, double eps_ground,
    double tol = kDefaultPayoffTolerance);

// Given target policy with minimax punishments for the payoff it induces.
std::shared_ptr<const SirbotPlan> MakeSirbotPlanForPolicy(
    const BayesianGame& game, const CorrelatedPolicy& mu, double eps_ground,
    double tol = kDefaultPayoffTolerance);

ProgramRef Sirbot(std::shared_ptr<const SirbotPlan> plan, int player,
                  const std::string& id = "");
ProgramProfile SirbotProfile(std::shared_ptr<const SirbotPlan> plan);

// Deviators.
// Discloses nothing; plays the best response to tau_{-j} for its type.
ProgramRef NeverDisclose(std::shared_ptr<const SirbotPlan> plan, int player);
// Discloses everything; plays the ex interim best response to the others'
// target actions.
ProgramRef DiscloseThenDefect(std::shared_ptr<const SirbotPlan> plan,
                              int player);
ProgramRef ConstantAction(int player, int action, bool discloses);
// Sirbot with a different identity token.
ProgramRef FreshIdentitySirbot(std::shared_ptr<const SirbotPlan> plan,
                               int player);
// Random bits and actions keyed by (seed, trial, U_L, U_{L+1}).
ProgramRef RandomizedNoise(int player, std::uint64_t seed);

struct NamedProgram {
  std::string name;
  ProgramRef program;
};
std::vector<NamedProgram> DeviatorLibrary(
    std::shared_ptr<const SirbotPlan> plan, int player,
    std::uint64_t noise_seed = 7);

// Runs fn(trial) for trial in [0, trials) on `jobs` threads with large
// stacks; results are in trial order.
void ParallelTrials(std::uint64_t trials, int jobs,
                    const std::function<void(std::uint64_t)>& fn);

// Joint type profile drawn from the prior, or from q(. | t_j) when
// fixed_type >= 0.
std::size_t SampleTypes(const BayesianGame& game,
                        const RandomizationSignal& signal, std::uint64_t trial,
                        int player = -1, int fixed_type = -1);

struct TrialRow {
  std::uint64_t trial = 0;
  std::size_t t = 0;
  std::vector<int> actions;
  std::uint64_t depth = 0;
  bool punished = false;
  bool on_target = false;
  bool depth_exceeded = false;
  std::vector<double> payoffs;
  double gain = 0.0;
};

struct ExploitabilityReport {
  std::string deviator;
  int player = 0;
  double eps_ground = 0.0;
  double u_bar = 0.0;
  double delta_slack = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t depth_exceeded = 0;
  double mean_gain = 0.0;
  double se = 0.0;
  double ci95 = 0.0;
  double punished_fraction = 0.0;
  double punished_se = 0.0;
  bool within_bound = false;  // mean - 3 SE <= delta
  std::vector<TrialRow> rows;
};

// delta = u_bar ((1 - eps)^-2 - 1).
double DeltaSlack(double u_bar, double eps_ground);

struct SimulationOptions {
  std::uint64_t trials = 10000;
  std::uint64_t seed = 0;
  int jobs = 1;
  EngineOptions engine;
  int fixed_type = -1;  // t_j held fixed when >= 0
};

ExploitabilityReport EstimateExploitability(
    const SirbotPlan& plan, const ProgramProfile& programs, int j,
    const std::string& deviator_name, const SimulationOptions& options);

// All-sirbot runs: rows with on_target set when actions equal mu^c(t).
std::vector<TrialRow> SimulateProfile(const SirbotPlan& plan,
                                      const ProgramProfile& programs,
                                      const SimulationOptions& options);

struct TailPoint {
  int k = 0;
  double empirical = 0.0;  // P(max depth > 2K)
  double bound = 0.0;      // (1 - eps^2)^K
  double se = 0.0;
  bool pass = false;
};

struct TerminationReport {
  double eps_ground = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t depth_exceeded = 0;
  std::vector<std::uint64_t> depths;
  std::vector<std::uint64_t> histogram;  // histogram[d] = #trials with depth d
  std::vector<TailPoint> tail;
  bool pass = false;
};

TerminationReport TerminationProfile(const SirbotPlan& plan,
                                     const ProgramProfile& programs,
                                     const SimulationOptions& options,
                                     int max_k = 200);

Json ExploitabilityToJson(const ExploitabilityReport& report);
Json TerminationToJson(const TerminationReport& report);

// n-player Bayesian public-goods dilemma with types {low, high}, actions
// {C, D} and payoffs scaled so that max |u| = 1. Used as the default program
// game.
BayesianGame PublicGoodsGame(int n);

}  // namespace condisc

#endif  // CONDISC_PROGRAMS_H_
