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

#ifndef CONDISC_DISCLOSURE_H_
#define CONDISC_DISCLOSURE_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "condisc/game.h"
#include "condisc/game_io.h"
#include "condisc/solvers.h"

namespace condisc {

// A subset of a player's type list, bit k set iff type k is included.
using TypeSet = std::uint64_t;

inline TypeSet Singleton(int t) { return TypeSet{1} << t; }
inline TypeSet FullSet(int count) {
  return count >= 64 ? ~TypeSet{0} : (TypeSet{1} << count) - 1;
}

// R(t_i) for every player and type. Options are stored singleton first, so
// enumeration tries disclosure before withholding.
class DisclosureSpace {
 public:
  // {t_i} and T_i only.
  static DisclosureSpace AllOrNothing(const BayesianGame& game);
  // Every subset containing t_i; small type spaces only.
  static DisclosureSpace Unrestricted(const BayesianGame& game);
  // Reads the `disclosure_spaces` entry of a game document:
  // [{"<type>": [["<type>", ...], ...], ...}, ...] one map per player.
  static DisclosureSpace FromJson(const BayesianGame& game, const Json& doc);

  const std::vector<TypeSet>& options(int i, int t_i) const {
    return options_[i][t_i];
  }
  int num_players() const { return static_cast<int>(options_.size()); }
  Json ToJson(const BayesianGame& game) const;

 private:
  explicit DisclosureSpace(std::vector<std::vector<std::vector<TypeSet>>> o);
  void Validate(const BayesianGame& game) const;

  std::vector<std::vector<std::vector<TypeSet>>> options_;
};

// sigma[i][t_i][j] = set shown by player i of type t_i to player j
// (entry j == i is unused and holds T_i).
using DisclosureStrategy = std::vector<std::vector<std::vector<TypeSet>>>;

enum class Unraveling { kFull, kPartial, kNone };
std::string UnravelingName(Unraveling u);

// Classification of a disclosure strategy. Definition: full iff every type
// shows exactly itself to everyone; partial iff some message is a proper
// subset of T_i without being full; none otherwise.
Unraveling Classify(const BayesianGame& game, const DisclosureStrategy& sigma);

// Information cells of the action stage. A cell of player j is its own type
// together with the sets it received; beliefs are posteriors over joint
// types.
struct Cell {
  int player = -1;
  int own_type = -1;
  // received[i] = set shown by i (own entry unused).
  std::vector<TypeSet> received;
  std::vector<double> belief;
  bool on_path = true;
};

struct CellStructure {
  std::vector<std::vector<Cell>> cells;  // [player][cell]
  // on_path_cell[j][t] = cell of j at joint type t under the strategy.
  std::vector<std::vector<int>> on_path_cell;
};

// Action-stage solver: given cells and beliefs, returns one action per cell
// for every player ([player][cell]), or nothing when no pure continuation
// equilibrium exists. Off-path cells must also be filled.
class ContinuationSolver {
 public:
  virtual ~ContinuationSolver() = default;
  virtual std::vector<std::vector<std::vector<int>>> Solve(
      const BayesianGame& game, const CellStructure& cells) const = 0;
  virtual std::string Name() const = 0;
};

// Exhaustive pure Bayes-Nash search over on-path cells; off-path cells play
// a best response to their belief against on-path play of the others.
class BayesNashContinuation : public ContinuationSolver {
 public:
  explicit BayesNashContinuation(std::size_t max_profiles = 2'000'000,
                                 std::size_t max_equilibria = 16)
      : max_profiles_(max_profiles), max_equilibria_(max_equilibria) {}
  std::vector<std::vector<std::vector<int>>> Solve(
      const BayesianGame& game, const CellStructure& cells) const override;
  std::string Name() const override { return "bayes-nash"; }

 private:
  std::size_t max_profiles_;
  std::size_t max_equilibria_;
};

struct TypeReport {
  int player = -1;
  int type = -1;
  double on_path_payoff = 0.0;
  // Payoff from showing {t_i} to everyone instead.
  double full_disclosure_payoff = 0.0;
  // Payoff from showing T_i to everyone instead.
  double no_disclosure_payoff = 0.0;
};

struct UnravelingOutcome {
  bool found = false;
  DisclosureStrategy strategy;
  Unraveling classification = Unraveling::kNone;
  CellStructure cells;
  // Continuation actions, [player][cell].
  std::vector<std::vector<int>> actions;
  std::vector<TypeReport> types;
  std::size_t strategies_searched = 0;
  std::string continuation;
};

Json OutcomeToJson(const BayesianGame& game, const UnravelingOutcome& outcome);

struct DisclosureOptions {
  double tol = kDefaultPayoffTolerance;
  std::size_t max_strategies = 1'000'000;
};

// Pure-strategy search for a disclosure equilibrium, canonical order with
// disclosure first. Returns found = false (NoPureEquilibrium) when none
// exists.
UnravelingOutcome SolveDisclosureGame(const BayesianGame& game,
                                      const DisclosureSpace& space,
                                      const ContinuationSolver& solver,
                                      const DisclosureOptions& options = {});
UnravelingOutcome SolveDisclosureGame(const BayesianGame& game,
                                      const DisclosureSpace& space);

// One block of the post-unraveling game: the type profiles that send a given
// message profile, with the prior renormalized on them.
struct PostUnravelingComponent {
  std::string label;
  double probability = 0.0;
  BayesianGame game;
  // type_map[i][k] = original index of type k of player i.
  std::vector<std::vector<int>> type_map;
  // original joint type of every joint type of `game`.
  std::vector<std::size_t> joint_map;
};

std::vector<PostUnravelingComponent> PostUnravelingGame(
    const BayesianGame& game, const UnravelingOutcome& outcome);

// mu restricted to a component.
CorrelatedPolicy RestrictPolicy(const PostUnravelingComponent& component,
                                const CorrelatedPolicy& mu);

struct PipelineReport {
  bool verdict = false;
  UnravelingOutcome outcome;
  std::vector<PostUnravelingComponent> components;
  // Per component: feasible, INTIR, IC.
  std::vector<SolverReport> feasible;
  std::vector<SolverReport> intir;
  std::vector<SolverReport> ic;
  std::string regime = "devices without disclosure";
};

// Solve disclosure, restrict, then check feasibility, INTIR and IC of the
// payoff induced by mu in every component.
PipelineReport Prop2Pipeline(const BayesianGame& game,
                             const DisclosureSpace& space,
                             const CorrelatedPolicy& mu,
                             const ContinuationSolver& solver,
                             double tol = kDefaultPayoffTolerance);
// Same with only a payoff vector: mu is the feasibility witness for x.
PipelineReport Prop2Pipeline(const BayesianGame& game,
                             const DisclosureSpace& space,
                             const PayoffVector& x,
                             const ContinuationSolver& solver,
                             double tol = kDefaultPayoffTolerance);

Json PipelineToJson(const BayesianGame& game, const PipelineReport& report);

}  // namespace condisc

#endif  // CONDISC_DISCLOSURE_H_
