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

#include "condisc/solvers.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "condisc/errors.h"
#include "condisc/lp.h"

namespace condisc {
namespace {

void RequireTotal(const BayesianGame& game, const PayoffVector& x) {
  if (static_cast<int>(x.values.size()) != game.num_players()) {
    throw TotalityError("payoff vector must cover every player");
  }
  for (int j = 0; j < game.num_players(); ++j) {
    if (static_cast<int>(x.values[j].size()) != game.num_types(j)) {
      throw TotalityError("payoff vector must cover every type of player " +
                          std::to_string(j));
    }
    for (double v : x.values[j]) {
      if (!std::isfinite(v)) throw DomainError("non-finite payoff entry");
    }
  }
}

void NoteZeroMarginals(const BayesianGame& game, SolverReport* report) {
  for (int j = 0; j < game.num_players(); ++j) {
    for (int t_j = 0; t_j < game.num_types(j); ++t_j) {
      if (game.marginal(j, t_j) <= 0.0) {
        report->notes.push_back("type " + game.type_labels(j)[t_j] +
                                " of player " + std::to_string(j) +
                                " has zero marginal; its constraints are "
                                "excluded");
      }
    }
  }
}

std::string Format(double v) {
  std::ostringstream out;
  out.precision(12);
  out << v;
  return out.str();
}

// Normalized, clamped distribution from LP values.
Distribution CleanDistribution(const std::vector<double>& values) {
  std::vector<double> masses(values.size());
  double total = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    masses[k] = values[k] > 1e-13 ? values[k] : 0.0;
    total += masses[k];
  }
  for (double& m : masses) m /= total;
  return Distribution::FromDense(masses);
}

}  // namespace

Json ReportToJson(const BayesianGame& game, const SolverReport& report) {
  Json doc;
  doc["check"] = report.check;
  doc["verdict"] = report.verdict;
  doc["tol"] = report.tol;
  doc["witness"] = report.witness ? PolicyToJson(game, *report.witness)
                                  : Json(nullptr);
  Json violations = Json::array();
  for (const Violation& v : report.violations) {
    Json entry{{"player", v.player}, {"gain", v.gain}, {"what", v.what}};
    if (v.type >= 0) entry["type"] = game.type_labels(v.player)[v.type];
    if (v.other_type >= 0) {
      entry["other_type"] = game.type_labels(v.player)[v.other_type];
    }
    violations.push_back(entry);
  }
  doc["violations"] = violations;
  if (!report.punishments.empty()) {
    Json punishments = Json::array();
    for (const auto& tau : report.punishments) {
      punishments.push_back(PolicyToJson(game, tau));
    }
    doc["punishments"] = punishments;
  }
  if (report.dominating) {
    Json dist = Json::object();
    for (const auto& [a, m] : report.dominating->entries) {
      dist[game.ActionKey(a)] = m;
    }
    doc["dominating"] = dist;
  }
  if (!report.certificate.empty()) doc["certificate"] = report.certificate;
  if (!report.notes.empty()) doc["notes"] = report.notes;
  return doc;
}

SolverReport CheckFeasible(const BayesianGame& game, const PayoffVector& x,
                           double tol) {
  RequireTotal(game, x);
  SolverReport report;
  report.check = "feasible";
  report.tol = tol;
  NoteZeroMarginals(game, &report);

  const std::size_t num_a = game.num_joint_actions();
  std::vector<std::size_t> live_types;
  for (std::size_t t = 0; t < game.num_joint_types(); ++t) {
    if (game.prior(t) > 0.0) live_types.push_back(t);
  }

  // Quick range check: x_j(t_j) must lie between the pointwise extremes.
  for (int j = 0; j < game.num_players(); ++j) {
    std::vector<double> lo(game.num_types(j), 0.0), hi(game.num_types(j), 0.0);
    for (std::size_t t : live_types) {
      double mn = kInfinity, mx = -kInfinity;
      for (std::size_t a = 0; a < num_a; ++a) {
        const double u = game.Utility(t, a, j);
        mn = std::min(mn, u);
        mx = std::max(mx, u);
      }
      const int t_j = game.TypeOf(t, j);
      lo[t_j] += game.Conditional(t, j) * mn;
      hi[t_j] += game.Conditional(t, j) * mx;
    }
    for (int t_j = 0; t_j < game.num_types(j); ++t_j) {
      if (game.marginal(j, t_j) <= 0.0) continue;
      const double v = x.at(j, t_j);
      if (v > hi[t_j] + tol) {
        report.violations.push_back({j, t_j, -1, v - hi[t_j],
                                     "payoff above the largest attainable"});
      } else if (v < lo[t_j] - tol) {
        report.violations.push_back({j, t_j, -1, lo[t_j] - v,
                                     "payoff below the smallest attainable"});
      }
    }
  }
  if (!report.violations.empty()) {
    report.verdict = false;
    report.certificate = "payoff outside the attainable range";
    return report;
  }

  LinearProgram lp(static_cast<int>(live_types.size() * num_a));
  for (std::size_t k = 0; k < live_types.size(); ++k) {
    std::vector<std::pair<int, double>> row;
    for (std::size_t a = 0; a < num_a; ++a) {
      row.push_back({static_cast<int>(k * num_a + a), 1.0});
    }
    lp.AddRow(std::move(row), RowSense::kEqual, 1.0);
  }
  for (int j = 0; j < game.num_players(); ++j) {
    for (int t_j = 0; t_j < game.num_types(j); ++t_j) {
      if (game.marginal(j, t_j) <= 0.0) continue;
      std::vector<std::pair<int, double>> row;
      for (std::size_t k = 0; k < live_types.size(); ++k) {
        const std::size_t t = live_types[k];
        if (game.TypeOf(t, j) != t_j) continue;
        const double w = game.Conditional(t, j);
        for (std::size_t a = 0; a < num_a; ++a) {
          const double coef = w * game.Utility(t, a, j);
          if (coef != 0.0) row.push_back({static_cast<int>(k * num_a + a), coef});
        }
      }
      lp.AddRow(row, RowSense::kLessEqual, x.at(j, t_j) + tol);
      lp.AddRow(std::move(row), RowSense::kGreaterEqual, x.at(j, t_j) - tol);
    }
  }
  const LpSolution sol = SolveLp(lp);
  if (sol.status != LpStatus::kOptimal) {
    report.verdict = false;
    report.certificate =
        "phase-one infeasibility " + Format(sol.phase_one_value);
    return report;
  }

  std::vector<Distribution> table(game.num_joint_types(),
                                  Distribution::PointMass(0));
  for (std::size_t k = 0; k < live_types.size(); ++k) {
    std::vector<double> values(sol.x.begin() + k * num_a,
                               sol.x.begin() + (k + 1) * num_a);
    table[live_types[k]] = CleanDistribution(values);
  }
  CorrelatedPolicy witness = CorrelatedPolicy::FullProfile(game, table);
  const PayoffVector induced = InducedPayoff(game, witness);
  for (int j = 0; j < game.num_players(); ++j) {
    for (int t_j = 0; t_j < game.num_types(j); ++t_j) {
      if (game.marginal(j, t_j) <= 0.0) continue;
      const double gap = std::abs(induced.at(j, t_j) - x.at(j, t_j));
      if (gap > tol + 1e-12) {
        report.violations.push_back(
            {j, t_j, -1, gap, "witness misses the target beyond tol"});
      }
    }
  }
  report.verdict = report.violations.empty();
  if (!report.verdict) {
    report.certificate = "phase-one value " + Format(sol.phase_one_value) +
                         " within solver tolerance but witness re-evaluation "
                         "fails";
  }
  report.witness = std::move(witness);
  return report;
}

CorrelatedPolicy ConstantPunishment(const BayesianGame& game, int j,
                                    std::size_t a_minus_j) {
  const std::size_t keys = game.type_space().Without(j).size();
  return CorrelatedPolicy::MinusPlayer(
      game, j,
      std::vector<Distribution>(keys, Distribution::PointMass(a_minus_j)));
}

namespace {

double ActionValue(const BayesianGame& game, int j, int t_j, int a_j,
                   const CorrelatedPolicy& tau) {
  const ProductSpace& types = game.type_space();
  const ProductSpace& actions = game.action_space();
  const std::size_t others = types.Without(j).size();
  double value = 0.0;
  for (std::size_t rest = 0; rest < others; ++rest) {
    const std::size_t t = types.Insert(rest, j, t_j);
    if (game.prior(t) == 0.0) continue;
    const double w = game.Conditional(t, j);
    for (const auto& [a_rest, m] : tau.at(rest).entries) {
      value += w * m * game.Utility(t, actions.Insert(a_rest, j, a_j), j);
    }
  }
  return value;
}

void RequireMinusScope(const CorrelatedPolicy& tau, int j) {
  if (tau.scope() != PolicyScope::kMinusPlayer || tau.player() != j) {
    throw ScopeError("punishment policy must be conditioned on t_{-j}");
  }
}

}  // namespace

double BestResponseValue(const BayesianGame& game, int j, int t_j,
                         const CorrelatedPolicy& tau) {
  RequireMinusScope(tau, j);
  double best = -kInfinity;
  for (int a_j = 0; a_j < game.num_actions(j); ++a_j) {
    best = std::max(best, ActionValue(game, j, t_j, a_j, tau));
  }
  return best;
}

int BestResponseAction(const BayesianGame& game, int j, int t_j,
                       const CorrelatedPolicy& tau) {
  RequireMinusScope(tau, j);
  int best_action = 0;
  double best = -kInfinity;
  for (int a_j = 0; a_j < game.num_actions(j); ++a_j) {
    const double v = ActionValue(game, j, t_j, a_j, tau);
    if (v > best) {
      best = v;
      best_action = a_j;
    }
  }
  return best_action;
}

MinimaxResult MinimaxPolicy(const BayesianGame& game, int j,
                            const PayoffVector& x) {
  RequireTotal(game, x);
  const ProductSpace& types = game.type_space();
  const ProductSpace& actions = game.action_space();
  const std::size_t num_rest_t = types.Without(j).size();
  const std::size_t num_rest_a = actions.Without(j).size();

  LinearProgram lp(static_cast<int>(num_rest_t * num_rest_a));
  const int v = lp.AddVariable(1.0, -kInfinity, kInfinity);
  for (std::size_t rest = 0; rest < num_rest_t; ++rest) {
    std::vector<std::pair<int, double>> row;
    for (std::size_t b = 0; b < num_rest_a; ++b) {
      row.push_back({static_cast<int>(rest * num_rest_a + b), 1.0});
    }
    lp.AddRow(std::move(row), RowSense::kEqual, 1.0);
  }
  bool any_live = false;
  for (int t_j = 0; t_j < game.num_types(j); ++t_j) {
    if (game.marginal(j, t_j) <= 0.0) continue;
    any_live = true;
    for (int a_j = 0; a_j < game.num_actions(j); ++a_j) {
      std::vector<std::pair<int, double>> row;
      for (std::size_t rest = 0; rest < num_rest_t; ++rest) {
        const std::size_t t = types.Insert(rest, j, t_j);
        if (game.prior(t) == 0.0) continue;
        const double w = game.Conditional(t, j);
        for (std::size_t b = 0; b < num_rest_a; ++b) {
          const double coef =
              w * game.Utility(t, actions.Insert(b, j, a_j), j);
          if (coef != 0.0) {
            row.push_back({static_cast<int>(rest * num_rest_a + b), coef});
          }
        }
      }
      row.push_back({v, -1.0});
      lp.AddRow(std::move(row), RowSense::kLessEqual, x.at(j, t_j));
    }
  }
  if (!any_live) {
    return {ConstantPunishment(game, j, 0), -kInfinity};
  }
  const LpSolution sol = SolveLp(lp);
  if (sol.status != LpStatus::kOptimal) {
    throw Error("minimax LP failed: " + LpStatusName(sol.status));
  }
  std::vector<Distribution> table;
  for (std::size_t rest = 0; rest < num_rest_t; ++rest) {
    std::vector<double> values(sol.x.begin() + rest * num_rest_a,
                               sol.x.begin() + (rest + 1) * num_rest_a);
    table.push_back(CleanDistribution(values));
  }
  CorrelatedPolicy tau = CorrelatedPolicy::MinusPlayer(game, j, table);
  // Report the value of the cleaned policy rather than the LP's.
  double value = -kInfinity;
  for (int t_j = 0; t_j < game.num_types(j); ++t_j) {
    if (game.marginal(j, t_j) <= 0.0) continue;
    value = std::max(value, BestResponseValue(game, j, t_j, tau) - x.at(j, t_j));
  }
  return {std::move(tau), value};
}

SolverReport CheckINTIR(const BayesianGame& game, const PayoffVector& x,
                        double tol) {
  RequireTotal(game, x);
  SolverReport report;
  report.check = "INTIR";
  report.tol = tol;
  NoteZeroMarginals(game, &report);
  for (int j = 0; j < game.num_players(); ++j) {
    MinimaxResult result = MinimaxPolicy(game, j, x);
    if (result.value > tol) {
      for (int t_j = 0; t_j < game.num_types(j); ++t_j) {
        if (game.marginal(j, t_j) <= 0.0) continue;
        const double gain =
            BestResponseValue(game, j, t_j, result.tau) - x.at(j, t_j);
        if (gain > tol) {
          report.violations.push_back(
              {j, t_j, -1, gain, "best response to the minimax policy exceeds "
                                 "the target"});
        }
      }
    }
    report.punishments.push_back(std::move(result.tau));
  }
  report.verdict = report.violations.empty();
  return report;
}

SolverReport CheckIC(const BayesianGame& game, const CorrelatedPolicy& mu,
                     const PayoffVector& x, double tol) {
  RequireTotal(game, x);
  if (mu.scope() != PolicyScope::kFullProfile) {
    throw ScopeError("IC check requires a full-profile policy");
  }
  SolverReport report;
  report.check = "IC";
  report.tol = tol;
  NoteZeroMarginals(game, &report);
  const PayoffVector induced = InducedPayoff(game, mu);
  for (int j = 0; j < game.num_players(); ++j) {
    for (int t_j = 0; t_j < game.num_types(j); ++t_j) {
      if (game.marginal(j, t_j) <= 0.0) continue;
      if (std::abs(induced.at(j, t_j) - x.at(j, t_j)) > tol) {
        throw ConsistencyError(
            "payoff of player " + std::to_string(j) + " type " +
            game.type_labels(j)[t_j] + " is " + Format(x.at(j, t_j)) +
            " but the policy induces " + Format(induced.at(j, t_j)));
      }
    }
  }
  for (int j = 0; j < game.num_players(); ++j) {
    for (int t_j = 0; t_j < game.num_types(j); ++t_j) {
      if (game.marginal(j, t_j) <= 0.0) continue;
      for (int s_j = 0; s_j < game.num_types(j); ++s_j) {
        if (s_j == t_j) continue;
        const double gain =
            MisreportPayoff(game, mu, j, t_j, s_j) - x.at(j, t_j);
        if (gain > tol) {
          report.violations.push_back(
              {j, t_j, s_j, gain, "profits from the policy of another type"});
        }
      }
    }
  }
  report.verdict = report.violations.empty();
  report.witness = mu;
  return report;
}

SolverReport CheckEfficient(const BayesianGame& game, std::size_t t,
                            const std::vector<double>& x_at_t, double tol) {
  if (t >= game.num_joint_types()) throw DomainError("type profile index");
  if (static_cast<int>(x_at_t.size()) != game.num_players()) {
    throw TotalityError("efficiency check needs one payoff per player");
  }
  SolverReport report;
  report.check = "efficient";
  report.tol = tol;
  const int n = game.num_players();
  const std::size_t num_a = game.num_joint_actions();
  LinearProgram lp(static_cast<int>(num_a));
  lp.SetMaximize(true);
  std::vector<int> slack(n);
  for (int i = 0; i < n; ++i) slack[i] = lp.AddVariable(1.0);
  std::vector<std::pair<int, double>> sum_row;
  for (std::size_t a = 0; a < num_a; ++a) {
    sum_row.push_back({static_cast<int>(a), 1.0});
  }
  lp.AddRow(std::move(sum_row), RowSense::kEqual, 1.0);
  for (int i = 0; i < n; ++i) {
    std::vector<std::pair<int, double>> row;
    for (std::size_t a = 0; a < num_a; ++a) {
      const double u = game.Utility(t, a, i);
      if (u != 0.0) row.push_back({static_cast<int>(a), u});
    }
    row.push_back({slack[i], -1.0});
    lp.AddRow(std::move(row), RowSense::kGreaterEqual, x_at_t[i]);
  }
  const LpSolution sol = SolveLp(lp);
  if (sol.status == LpStatus::kInfeasible) {
    report.verdict = true;
    report.certificate = "no distribution attains the payoff";
    return report;
  }
  if (sol.status != LpStatus::kOptimal) {
    throw Error("efficiency LP failed: " + LpStatusName(sol.status));
  }
  if (sol.objective <= tol) {
    report.verdict = true;
    return report;
  }
  std::vector<double> values(sol.x.begin(), sol.x.begin() + num_a);
  Distribution mu = CleanDistribution(values);
  for (int i = 0; i < n; ++i) {
    double u = 0.0;
    for (const auto& [a, m] : mu.entries) u += m * game.Utility(t, a, i);
    const double gain = u - x_at_t[i];
    if (gain > tol) {
      report.violations.push_back({i, game.TypeOf(t, i), -1, gain,
                                   "dominating distribution improves player"});
    }
  }
  report.verdict = report.violations.empty();
  if (!report.verdict) report.dominating = std::move(mu);
  return report;
}

}  // namespace condisc
