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

// Brute-force reference computations shared by the unit and acceptance
// tests. Nothing here calls the solvers; only the game accessors are used.

#ifndef CONDISC_TESTS_ORACLES_H_
#define CONDISC_TESTS_ORACLES_H_

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "condisc/game.h"

namespace condisc {
namespace testing {

// Dense policy: mu[t][a].
using DensePolicy = std::vector<std::vector<double>>;

inline BayesianGame RandomGame(std::mt19937_64& rng, int max_types = 3,
                               int max_actions = 3) {
  std::uniform_int_distribution<int> nt(1, max_types), na(1, max_actions);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::vector<std::string>> types(2), actions(2);
  for (int i = 0; i < 2; ++i) {
    const int k = nt(rng), m = na(rng);
    for (int t = 0; t < k; ++t) types[i].push_back("t" + std::to_string(t));
    for (int a = 0; a < m; ++a) actions[i].push_back("a" + std::to_string(a));
  }
  const std::size_t num_t = types[0].size() * types[1].size();
  const std::size_t num_a = actions[0].size() * actions[1].size();
  std::vector<double> prior(num_t);
  double total = 0.0;
  for (double& p : prior) total += (p = 0.2 + unit(rng));
  for (double& p : prior) p /= total;
  std::vector<double> u(num_t * num_a * 2);
  // Quarter-unit payoffs give ties often enough to exercise them.
  std::uniform_int_distribution<int> q(-4, 4);
  for (double& v : u) v = q(rng) / 4.0 + (unit(rng) < 0.5 ? 0.0 : unit(rng) / 8);
  return BayesianGame(types, actions, prior, u);
}

// Random policy with weights on a 1/k grid.
inline DensePolicy RandomGridPolicy(const BayesianGame& g, std::mt19937_64& rng,
                                    int k = 4) {
  DensePolicy mu(g.num_joint_types(),
                 std::vector<double>(g.num_joint_actions(), 0.0));
  std::uniform_int_distribution<std::size_t> pick(0, g.num_joint_actions() - 1);
  for (auto& row : mu) {
    for (int s = 0; s < k; ++s) row[pick(rng)] += 1.0 / k;
  }
  return mu;
}

inline CorrelatedPolicy ToPolicy(const BayesianGame& g, const DensePolicy& mu) {
  std::vector<Distribution> table;
  for (const auto& row : mu) table.push_back(Distribution::FromDense(row));
  return CorrelatedPolicy::FullProfile(g, std::move(table));
}

inline double MarginalOf(const BayesianGame& g, int j, int t_j) {
  double m = 0.0;
  for (std::size_t t = 0; t < g.num_joint_types(); ++t) {
    if (g.TypeOf(t, j) == t_j) m += g.prior(t);
  }
  return m;
}

// E[u_j | t_j] when type t_j plays the recommendations meant for s_j.
inline double OracleMisreport(const BayesianGame& g, const DensePolicy& mu,
                              int j, int t_j, int s_j) {
  double v = 0.0;
  const double m = MarginalOf(g, j, t_j);
  for (std::size_t t = 0; t < g.num_joint_types(); ++t) {
    if (g.TypeOf(t, j) != t_j) continue;
    const std::size_t reported = g.type_space().Replace(t, j, s_j);
    for (std::size_t a = 0; a < g.num_joint_actions(); ++a) {
      v += g.prior(t) / m * mu[reported][a] * g.Utility(t, a, j);
    }
  }
  return v;
}

inline double OracleInterim(const BayesianGame& g, const DensePolicy& mu,
                            int j, int t_j) {
  return OracleMisreport(g, mu, j, t_j, t_j);
}

inline PayoffVector OracleInduced(const BayesianGame& g, const DensePolicy& mu) {
  PayoffVector x;
  for (int j = 0; j < g.num_players(); ++j) {
    x.values.emplace_back();
    for (int t_j = 0; t_j < g.num_types(j); ++t_j) {
      x.values[j].push_back(OracleInterim(g, mu, j, t_j));
    }
  }
  return x;
}

// Largest IC gain over (j, t_j, s_j).
inline double OracleIcGain(const BayesianGame& g, const DensePolicy& mu) {
  double worst = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < g.num_players(); ++j) {
    for (int t = 0; t < g.num_types(j); ++t) {
      for (int s = 0; s < g.num_types(j); ++s) {
        if (s == t) continue;
        worst = std::max(worst, OracleMisreport(g, mu, j, t, s) -
                                    OracleInterim(g, mu, j, t));
      }
    }
  }
  return worst;
}

// Calls fn on every distribution over m outcomes with weights in 1/k steps.
inline void ForEachSimplexPoint(int m, int k,
                                const std::function<void(const std::vector<double>&)>& fn) {
  std::vector<int> c(m, 0);
  std::function<void(int, int)> rec = [&](int i, int left) {
    if (i == m - 1) {
      c[i] = left;
      std::vector<double> p(m);
      for (int r = 0; r < m; ++r) p[r] = static_cast<double>(c[r]) / k;
      fn(p);
      return;
    }
    for (int v = 0; v <= left; ++v) {
      c[i] = v;
      rec(i + 1, left - v);
    }
  };
  rec(0, k);
}

enum class Certified { kTrue, kFalse, kUnknown };

// Feasibility by duality: x is infeasible iff some weighting w has
// sum_j,tj w q_j(t_j) x_j(t_j) > sum_t q(t) max_a sum_j w_{j,t_j} u_j(t, a).
// Weights range over {-1, 0, 1}.
inline Certified OracleInfeasible(const BayesianGame& g, const PayoffVector& x,
                                  double margin) {
  std::vector<std::pair<int, int>> slots;
  for (int j = 0; j < 2; ++j) {
    for (int t = 0; t < g.num_types(j); ++t) slots.push_back({j, t});
  }
  std::vector<int> w(slots.size(), -1);
  while (true) {
    double lhs = 0.0, rhs = 0.0;
    for (std::size_t s = 0; s < slots.size(); ++s) {
      lhs += w[s] * MarginalOf(g, slots[s].first, slots[s].second) *
             x.at(slots[s].first, slots[s].second);
    }
    for (std::size_t t = 0; t < g.num_joint_types(); ++t) {
      double best = -std::numeric_limits<double>::infinity();
      for (std::size_t a = 0; a < g.num_joint_actions(); ++a) {
        double v = 0.0;
        for (std::size_t s = 0; s < slots.size(); ++s) {
          const auto [j, tj] = slots[s];
          if (g.TypeOf(t, j) == tj) v += w[s] * g.Utility(t, a, j);
        }
        best = std::max(best, v);
      }
      rhs += g.prior(t) * best;
    }
    if (lhs > rhs + margin) return Certified::kFalse;
    std::size_t s = 0;
    while (s < w.size() && w[s] == 1) w[s++] = -1;
    if (s == w.size()) break;
    ++w[s];
  }
  return Certified::kUnknown;
}

// Best response of type t_j of player j (2 players) against tau[t_-j][a_-j].
inline double OracleBestResponse(const BayesianGame& g, int j, int t_j,
                                 const std::vector<std::vector<double>>& tau) {
  const int o = 1 - j;
  double best = -std::numeric_limits<double>::infinity();
  const double m = MarginalOf(g, j, t_j);
  for (int aj = 0; aj < g.num_actions(j); ++aj) {
    double v = 0.0;
    for (int to = 0; to < g.num_types(o); ++to) {
      int digits[2];
      digits[j] = t_j;
      digits[o] = to;
      const std::size_t t = g.type_space().Encode(digits);
      for (int ao = 0; ao < g.num_actions(o); ++ao) {
        int ad[2];
        ad[j] = aj;
        ad[o] = ao;
        v += g.prior(t) / m * tau[to][ao] *
             g.Utility(t, g.action_space().Encode(ad), j);
      }
    }
    best = std::max(best, v);
  }
  return best;
}

// INTIR for a 2-player game. A grid punishment certifies true; a grid mixed
// action of j that guarantees more than x_j(t_j) against every punishment
// certifies false.
inline Certified OracleIntir(const BayesianGame& g, const PayoffVector& x,
                             double margin, int k = 6) {
  bool all_true = true;
  for (int j = 0; j < 2; ++j) {
    const int o = 1 - j;
    // False certificate, one type at a time.
    for (int t_j = 0; t_j < g.num_types(j); ++t_j) {
      const double m = MarginalOf(g, j, t_j);
      bool certified = false;
      ForEachSimplexPoint(g.num_actions(j), k, [&](const std::vector<double>& s) {
        double v = 0.0;
        for (int to = 0; to < g.num_types(o); ++to) {
          int digits[2];
          digits[j] = t_j;
          digits[o] = to;
          const std::size_t t = g.type_space().Encode(digits);
          double worst = std::numeric_limits<double>::infinity();
          for (int ao = 0; ao < g.num_actions(o); ++ao) {
            double e = 0.0;
            for (int aj = 0; aj < g.num_actions(j); ++aj) {
              int ad[2];
              ad[j] = aj;
              ad[o] = ao;
              e += s[aj] * g.Utility(t, g.action_space().Encode(ad), j);
            }
            worst = std::min(worst, e);
          }
          v += g.prior(t) / m * worst;
        }
        if (v > x.at(j, t_j) + margin) certified = true;
      });
      if (certified) return Certified::kFalse;
    }
    // True certificate: one grid tau holding every type down.
    std::vector<std::vector<double>> points;
    ForEachSimplexPoint(g.num_actions(o), k,
                        [&](const std::vector<double>& p) { points.push_back(p); });
    std::vector<std::size_t> idx(g.num_types(o), 0);
    bool found = false;
    while (!found) {
      std::vector<std::vector<double>> tau;
      for (std::size_t r : idx) tau.push_back(points[r]);
      bool ok = true;
      for (int t_j = 0; t_j < g.num_types(j) && ok; ++t_j) {
        ok = OracleBestResponse(g, j, t_j, tau) <= x.at(j, t_j) - margin;
      }
      found = ok;
      std::size_t r = 0;
      while (r < idx.size() && ++idx[r] == points.size()) idx[r++] = 0;
      if (r == idx.size()) break;
    }
    all_true = all_true && found;
  }
  return all_true ? Certified::kTrue : Certified::kUnknown;
}

// Largest total improvement over x by a mixture of at most two joint actions
// that is weakly better for both players (2 players). In two dimensions a
// dominating vertex of the LP uses at most two actions, so this is exact.
inline double OracleDominance(const BayesianGame& g, std::size_t t,
                              const std::vector<double>& x) {
  double best = -std::numeric_limits<double>::infinity();
  const std::size_t m = g.num_joint_actions();
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a; b < m; ++b) {
      // p(l) = l * u(a) + (1 - l) * u(b) >= x on an interval of l.
      double lo = 0.0, hi = 1.0;
      for (int i = 0; i < 2; ++i) {
        const double ua = g.Utility(t, a, i), ub = g.Utility(t, b, i);
        const double slope = ua - ub, need = x[i] - ub;
        if (std::abs(slope) < 1e-15) {
          if (ub < x[i]) lo = 2.0;
        } else if (slope > 0) {
          lo = std::max(lo, need / slope);
        } else {
          hi = std::min(hi, need / slope);
        }
      }
      if (lo > hi) continue;
      for (double l : {lo, hi}) {
        double gain = 0.0;
        for (int i = 0; i < 2; ++i) {
          gain += l * g.Utility(t, a, i) + (1 - l) * g.Utility(t, b, i) - x[i];
        }
        best = std::max(best, gain);
      }
    }
  }
  return best;
}

}  // namespace testing
}  // namespace condisc

#endif  // CONDISC_TESTS_ORACLES_H_
