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

// Randomized trace properties of the program engine, shared by the unit
// and acceptance tests. Each property returns true when it holds for the
// trace drawn from `seed`.

#ifndef CONDISC_TESTS_ENGINE_PROPS_H_
#define CONDISC_TESTS_ENGINE_PROPS_H_

#include <memory>
#include <optional>
#include <random>
#include <vector>

#include "condisc/programs.h"
#include "condisc/solvers.h"
#include "oracles.h"

namespace condisc {
namespace testing {

struct TraceSetup {
  std::shared_ptr<BayesianGame> game;
  std::shared_ptr<const SirbotPlan> plan;
  ProgramProfile programs;
  std::size_t t = 0;
  std::uint64_t trial = 0;
  std::uint64_t signal_seed = 0;
};

// A game (public goods or random), a plan, and a profile in which each
// player runs the sirbot with probability `p_sirbot` and a library deviator
// otherwise.
inline TraceSetup RandomSetup(std::uint64_t seed, double eps_lo, double eps_hi,
                              double p_sirbot, int max_players = 3) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  TraceSetup s;
  std::optional<CorrelatedPolicy> mu;
  const int kind = std::uniform_int_distribution<int>(0, 2)(rng);
  if (kind == 0 || (kind == 1 && max_players >= 3)) {
    s.game = std::make_shared<BayesianGame>(PublicGoodsGame(kind == 0 ? 2 : 3));
    std::vector<std::size_t> coop(s.game->num_joint_types(), 0);
    mu = CorrelatedPolicy::Deterministic(*s.game, coop);
  } else {
    s.game = std::make_shared<BayesianGame>(RandomGame(rng));
    mu = ToPolicy(*s.game, RandomGridPolicy(*s.game, rng));
  }
  const PayoffVector x = InducedPayoff(*s.game, *mu);
  std::vector<CorrelatedPolicy> punishments;
  for (int j = 0; j < s.game->num_players(); ++j) {
    punishments.push_back(MinimaxPolicy(*s.game, j, x).tau);
  }
  const double eps = eps_lo + (eps_hi - eps_lo) * unit(rng);
  s.plan = MakeSirbotPlan(*s.game, *mu, std::move(punishments), eps);
  s.programs = SirbotProfile(s.plan);
  for (int i = 0; i < s.game->num_players(); ++i) {
    if (unit(rng) < p_sirbot) continue;
    const auto lib = DeviatorLibrary(s.plan, i, rng());
    s.programs[i] =
        lib[std::uniform_int_distribution<std::size_t>(0, lib.size() - 1)(rng)]
            .program;
  }
  s.t = std::uniform_int_distribution<std::size_t>(
      0, s.game->num_joint_types() - 1)(rng);
  s.trial = rng() % 1000000;
  s.signal_seed = rng();
  return s;
}

// Result of a run, or nullopt when the depth cap was hit.
inline std::optional<BaseResult> TryRun(const TraceSetup& s,
                                        const EngineOptions& options) {
  const RandomizationSignal signal(s.signal_seed);
  try {
    return RunBaseCalls(*s.game, s.programs, s.t, signal, s.trial, options);
  } catch (const DepthExceeded&) {
    return std::nullopt;
  }
}

inline bool SameOutcome(const std::optional<BaseResult>& a,
                        const std::optional<BaseResult>& b) {
  if (a.has_value() != b.has_value()) return false;
  if (!a) return true;
  return a->actions == b->actions && a->disclosures == b->disclosures &&
         a->c == b->c;
}

inline bool ReplayDeterminism(std::uint64_t seed) {
  const TraceSetup s = RandomSetup(seed, 0.05, 0.5, 0.6);
  EngineOptions o;
  o.record_trace = true;
  const auto a = TryRun(s, o), b = TryRun(s, o);
  if (!SameOutcome(a, b)) return false;
  if (!a) return true;
  return a->trace == b->trace && a->stats.max_depth == b->stats.max_depth &&
         a->stats.evaluations == b->stats.evaluations;
}

inline bool MemoEquality(std::uint64_t seed) {
  // Without memoization the call tree branches, so keep it shallow.
  const TraceSetup s = RandomSetup(seed, 0.8, 0.95, 0.6, 2);
  if (s.game->num_players() != 2) return true;
  EngineOptions on, off;
  off.memoize = false;
  return SameOutcome(TryRun(s, on), TryRun(s, off));
}

// Player j never discloses; changing t_j must not move anyone else.
inline bool UndisclosedPermutation(std::uint64_t seed) {
  TraceSetup s = RandomSetup(seed, 0.05, 0.5, 0.6);
  const BayesianGame& g = *s.game;
  std::mt19937_64 rng(seed ^ 0x5bd1e995);
  const int j = std::uniform_int_distribution<int>(0, g.num_players() - 1)(rng);
  s.programs[j] = NeverDisclose(s.plan, j);
  const auto base = TryRun(s, {});
  for (int v = 0; v < g.num_types(j); ++v) {
    TraceSetup moved = s;
    moved.t = g.type_space().Replace(s.t, j, v);
    const auto other = TryRun(moved, {});
    if (base.has_value() != other.has_value()) return false;
    if (!base) continue;
    for (int i = 0; i < g.num_players(); ++i) {
      if (i == j) continue;
      if (base->actions[i] != other->actions[i]) return false;
      if (!(base->disclosures[i] == other->disclosures[i])) return false;
    }
  }
  return true;
}

// All sirbots: the joint action is the target profile at the drawn c.
inline bool CorrelatedCollapse(std::uint64_t seed) {
  const TraceSetup s = RandomSetup(seed, 0.05, 0.5, 1.1);
  const auto r = TryRun(s, {});
  if (!r) return false;
  const DeterministicProfile target = DesugarAt(s.plan->mu, *s.game, r->c);
  return r->joint_action == target[s.t];
}

}  // namespace testing
}  // namespace condisc

#endif  // CONDISC_TESTS_ENGINE_PROPS_H_
