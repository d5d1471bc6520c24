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

// One random solver case: a game, and for each check an input whose answer
// the brute-force oracle can certify.

#ifndef CONDISC_TESTS_SOLVER_CASES_H_
#define CONDISC_TESTS_SOLVER_CASES_H_

#include <random>
#include <string>

#include "condisc/solvers.h"
#include "oracles.h"

namespace condisc {
namespace testing {

struct SolverCase {
  bool feasible_match = false;
  bool intir_match = false;
  bool ic_match = false;
  bool efficient_match = false;
  std::string detail;
};

inline PayoffVector RandomPayoff(const BayesianGame& g, std::mt19937_64& rng,
                                 double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  PayoffVector x;
  for (int j = 0; j < g.num_players(); ++j) {
    x.values.emplace_back();
    for (int t = 0; t < g.num_types(j); ++t) x.values[j].push_back(u(rng));
  }
  return x;
}

inline SolverCase RunSolverCase(std::uint64_t seed) {
  constexpr double kMargin = 1e-6;
  std::mt19937_64 rng(seed);
  const BayesianGame g = RandomGame(rng);
  SolverCase out;
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  // Feasibility: even seeds use an induced payoff, odd seeds a random point
  // the separation oracle rejects.
  {
    bool expect = true;
    PayoffVector x;
    if (seed % 2 == 0) {
      x = OracleInduced(g, RandomGridPolicy(g, rng));
    } else {
      expect = false;
      do {
        x = RandomPayoff(g, rng, -1.2, 1.3);
      } while (OracleInfeasible(g, x, kMargin) != Certified::kFalse);
    }
    out.feasible_match = CheckFeasible(g, x).verdict == expect;
    if (!out.feasible_match) out.detail += " feasible";
  }

  // INTIR: draw until the oracle certifies one way or the other. Even seeds
  // draw high targets so both verdicts are common.
  {
    PayoffVector x;
    Certified c = Certified::kUnknown;
    const double lo = seed % 2 == 0 ? 0.3 : -1.0;
    while (c == Certified::kUnknown) {
      x = RandomPayoff(g, rng, lo, 1.2);
      c = OracleIntir(g, x, kMargin);
    }
    out.intir_match = CheckINTIR(g, x).verdict == (c == Certified::kTrue);
    if (!out.intir_match) out.detail += " intir";
  }

  // IC on a grid policy; draw again when the largest gain is a near tie.
  {
    DensePolicy mu;
    double gain = 0.0;
    do {
      mu = RandomGridPolicy(g, rng, 3);
      gain = OracleIcGain(g, mu);
    } while (std::abs(gain) < kMargin && gain != 0.0);
    const SolverReport r = CheckIC(g, ToPolicy(g, mu), OracleInduced(g, mu));
    out.ic_match = r.verdict == (gain <= 1e-9);
    if (!out.ic_match) out.detail += " ic";
  }

  // Efficiency at a random profile of a pure action or a pairwise mixture.
  {
    std::uniform_int_distribution<std::size_t> pt(0, g.num_joint_types() - 1);
    std::uniform_int_distribution<std::size_t> pa(0, g.num_joint_actions() - 1);
    const std::size_t t = pt(rng);
    std::vector<double> x;
    double dom = 0.0;
    do {
      const std::size_t a = pa(rng), b = pa(rng);
      const double l = unit(rng) < 0.5 ? 1.0 : unit(rng);
      x = {l * g.Utility(t, a, 0) + (1 - l) * g.Utility(t, b, 0),
           l * g.Utility(t, a, 1) + (1 - l) * g.Utility(t, b, 1)};
      dom = OracleDominance(g, t, x);
    } while (dom > 1e-12 && dom < kMargin);
    out.efficient_match = CheckEfficient(g, t, x).verdict == (dom <= 1e-12);
    if (!out.efficient_match) out.detail += " efficient";
  }
  return out;
}

}  // namespace testing
}  // namespace condisc

#endif  // CONDISC_TESTS_SOLVER_CASES_H_
