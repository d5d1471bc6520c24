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

#ifndef CONDISC_SOLVERS_H_
#define CONDISC_SOLVERS_H_

#include <optional>
#include <string>
#include <vector>

#include "condisc/game.h"
#include "condisc/game_io.h"

namespace condisc {

// One failed constraint: player, type, the other type involved (misreport
// for IC, -1 otherwise) and the size of the violation.
struct Violation {
  int player = -1;
  int type = -1;
  int other_type = -1;
  double gain = 0.0;
  std::string what;
};

struct SolverReport {
  std::string check;
  bool verdict = false;
  double tol = kDefaultPayoffTolerance;
  // Feasibility witness mu, or the policy checked for IC.
  std::optional<CorrelatedPolicy> witness;
  // INTIR: one punishment policy per player.
  std::vector<CorrelatedPolicy> punishments;
  // Efficiency: dominating distribution over joint actions at the type.
  std::optional<Distribution> dominating;
  std::vector<Violation> violations;
  // Infeasibility certificate or other solver facts.
  std::string certificate;
  std::vector<std::string> notes;
};

Json ReportToJson(const BayesianGame& game, const SolverReport& report);

// Definition checks. `tol` is the payoff tolerance.
SolverReport CheckFeasible(const BayesianGame& game, const PayoffVector& x,
                           double tol = kDefaultPayoffTolerance);
SolverReport CheckINTIR(const BayesianGame& game, const PayoffVector& x,
                        double tol = kDefaultPayoffTolerance);
SolverReport CheckIC(const BayesianGame& game, const CorrelatedPolicy& mu,
                     const PayoffVector& x,
                     double tol = kDefaultPayoffTolerance);
SolverReport CheckEfficient(const BayesianGame& game, std::size_t t,
                            const std::vector<double>& x_at_t,
                            double tol = kDefaultPayoffTolerance);

struct MinimaxResult {
  CorrelatedPolicy tau;
  // min over tau of max_{t_j} [BR_j(t_j, tau) - x_j(t_j)].
  double value;
};

// Epigraph LP for the punishment of player j. Types with zero marginal are
// skipped.
MinimaxResult MinimaxPolicy(const BayesianGame& game, int j,
                            const PayoffVector& x);

// max_{a_j} E_{t_{-j} ~ q(.|t_j)} u_j(t, (a_j, tau(.|t_{-j}))).
double BestResponseValue(const BayesianGame& game, int j, int t_j,
                         const CorrelatedPolicy& tau);
// Index of the maximizing a_j (lowest on ties).
int BestResponseAction(const BayesianGame& game, int j, int t_j,
                       const CorrelatedPolicy& tau);

// Constant tau_{-j} playing the joint action `a_minus_j` everywhere.
CorrelatedPolicy ConstantPunishment(const BayesianGame& game, int j,
                                    std::size_t a_minus_j);

}  // namespace condisc

#endif  // CONDISC_SOLVERS_H_
