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

#include "condisc/auction.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "condisc/errors.h"
#include "condisc/solvers.h"

namespace condisc {
namespace {

std::string Label(const char* prefix, double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%s%.12g", prefix, v);
  return buf;
}

}  // namespace

void AuctionParams::Validate() const {
  if (grid < 2) throw DomainError("auction grid needs at least 2 points");
  if (!(eps_bid > 0.0)) throw DomainError("eps_bid must be positive");
}

double AllPayUtility(double value, double own_bid, double other_bid) {
  const double win = own_bid > other_bid ? 1.0 : own_bid == other_bid ? 0.5 : 0.0;
  return value * win - own_bid;
}

double EquilibriumBid(double s) { return s * s / 2; }
double EquilibriumPayoff(double s) { return s * s / 2; }
double EpsilonBid(double s, double eps_bid) {
  return std::min(eps_bid, s * s * s / 2);
}
double EpsilonPolicyPayoff(double s, double eps_bid) {
  return s * s - s * EpsilonBid(s, eps_bid);
}
double EpsilonPolicyPayoffIntegral(double s, double eps_bid) {
  const double cdf = std::clamp(s, 0.0, 1.0);
  return (s - EpsilonBid(s, eps_bid)) * cdf;
}

AuctionGame::AuctionGame(const AuctionParams& params)
    : params_((params.Validate(), params)),
      values_([&] {
        std::vector<double> v;
        for (int k = 0; k < params.grid; ++k) {
          v.push_back(static_cast<double>(k) / (params.grid - 1));
        }
        return v;
      }()),
      bids_([&] {
        std::vector<double> b{0.0};
        for (double s : values_) {
          b.push_back(EquilibriumBid(s));
          b.push_back(EpsilonBid(s, params.eps_bid));
        }
        std::sort(b.begin(), b.end());
        b.erase(std::unique(b.begin(), b.end()), b.end());
        return b;
      }()),
      game_([&] {
        std::vector<std::string> types, actions;
        for (double s : values_) types.push_back(Label("s=", s));
        for (double b : bids_) actions.push_back(Label("x=", b));
        const std::size_t g = values_.size();
        std::vector<double> prior(g * g, 1.0 / static_cast<double>(g * g));
        const std::vector<double> values = values_;
        const std::vector<double> bids = bids_;
        const std::size_t nb = bids_.size();
        UtilityFn u = [values, bids, g, nb](std::size_t t, std::size_t a,
                                            int i) {
          const std::size_t ti = i == 0 ? t / g : t % g;
          const std::size_t own = i == 0 ? a / nb : a % nb;
          const std::size_t other = i == 0 ? a % nb : a / nb;
          return AllPayUtility(values[ti], bids[own], bids[other]);
        };
        return BayesianGame({types, types}, {actions, actions},
                            std::move(prior), std::move(u));
      }()) {}

int AuctionGame::BidIndex(double bid) const {
  auto it = std::lower_bound(bids_.begin(), bids_.end(), bid);
  if (it == bids_.end() || *it != bid) {
    throw DomainError(Label("bid not on the grid: ", bid));
  }
  return static_cast<int>(it - bids_.begin());
}

CorrelatedPolicy AuctionGame::EquilibriumPolicy() const {
  std::vector<std::size_t> profile(game_.num_joint_types());
  for (std::size_t t = 0; t < profile.size(); ++t) {
    const int digits[] = {
        BidIndex(EquilibriumBid(values_[game_.TypeOf(t, 0)])),
        BidIndex(EquilibriumBid(values_[game_.TypeOf(t, 1)]))};
    profile[t] = game_.action_space().Encode(digits);
  }
  return CorrelatedPolicy::Deterministic(game_, profile);
}

CorrelatedPolicy AuctionGame::EquilibriumOpponent(int j) const {
  std::vector<Distribution> table;
  for (double s : values_) {
    table.push_back(Distribution::PointMass(BidIndex(EquilibriumBid(s))));
  }
  return CorrelatedPolicy::MinusPlayer(game_, j, std::move(table));
}

CorrelatedPolicy AuctionGame::EpsilonPolicy() const {
  std::vector<std::size_t> profile(game_.num_joint_types());
  const int zero = BidIndex(0.0);
  for (std::size_t t = 0; t < profile.size(); ++t) {
    const double s1 = values_[game_.TypeOf(t, 0)];
    const double s2 = values_[game_.TypeOf(t, 1)];
    int digits[] = {zero, zero};
    if (s1 > s2) digits[0] = BidIndex(EpsilonBid(s1, params_.eps_bid));
    if (s2 > s1) digits[1] = BidIndex(EpsilonBid(s2, params_.eps_bid));
    profile[t] = game_.action_space().Encode(digits);
  }
  return CorrelatedPolicy::Deterministic(game_, profile);
}

AuctionReport AuctionChecks(const AuctionParams& params) {
  const AuctionGame auction(params);
  const BayesianGame& game = auction.game();
  const CorrelatedPolicy eq = auction.EquilibriumPolicy();
  const CorrelatedPolicy opponent = auction.EquilibriumOpponent(0);
  const CorrelatedPolicy mu = auction.EpsilonPolicy();
  const double eps = params.eps_bid;
  AuctionReport report;
  for (int k = 0; k < game.num_types(0); ++k) {
    AuctionRow row;
    row.s = auction.values()[k];
    row.equilibrium_payoff = ExInterimPayoff(game, eq, 0, k);
    row.best_deviation = BestResponseValue(game, 0, k, opponent);
    row.eta = row.best_deviation - row.equilibrium_payoff;
    row.closed_equilibrium = EquilibriumPayoff(row.s);
    row.policy_payoff = ExInterimPayoff(game, mu, 0, k);
    row.closed_policy = EpsilonPolicyPayoff(row.s, eps);
    row.integral_policy = EpsilonPolicyPayoffIntegral(row.s, eps);
    report.max_eta = std::max(report.max_eta, row.eta);
    report.max_equilibrium_gap =
        std::max(report.max_equilibrium_gap,
                 std::abs(row.equilibrium_payoff - row.closed_equilibrium));
    report.max_closed_form_gap =
        std::max(report.max_closed_form_gap,
                 std::abs(row.closed_policy - row.integral_policy));
    report.max_policy_grid_gap =
        std::max(report.max_policy_grid_gap,
                 std::abs(row.policy_payoff - row.closed_policy));
    const double excess = row.closed_policy - row.closed_equilibrium;
    if (row.s == 0.0 ? excess != 0.0 : !(excess > 0.0)) {
      report.dominates_equilibrium = false;
    }
    report.rows.push_back(row);
  }

  const PayoffVector x = InducedPayoff(game, mu);
  const SolverReport ic = CheckIC(game, mu, x);
  for (const Violation& v : ic.violations) {
    if (v.player != 0) continue;
    if (!report.ic_witness || v.gain > report.witness_gain) {
      report.ic_witness = true;
      report.witness_player = v.player;
      report.witness_type = auction.values()[v.type];
      report.witness_report = auction.values()[v.other_type];
      report.witness_gain = v.gain;
    }
  }

  report.min_welfare_margin = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < game.num_joint_types(); ++t) {
    const double s1 = auction.values()[game.TypeOf(t, 0)];
    const double s2 = auction.values()[game.TypeOf(t, 1)];
    const auto u = ExpectedUtilities(game, mu, t);
    const double margin = u[0] + u[1] - (std::max(s1, s2) - eps);
    report.min_welfare_margin = std::min(report.min_welfare_margin, margin);
  }
  report.welfare_ok = report.min_welfare_margin >= -1e-12;
  return report;
}

Json AuctionReportToJson(const AuctionReport& r) {
  return Json{{"max_eta", r.max_eta},
              {"max_equilibrium_gap", r.max_equilibrium_gap},
              {"max_closed_form_gap", r.max_closed_form_gap},
              {"max_policy_grid_gap", r.max_policy_grid_gap},
              {"dominates_equilibrium", r.dominates_equilibrium},
              {"ic_witness", r.ic_witness},
              {"witness_player", r.witness_player},
              {"witness_type", r.witness_type},
              {"witness_report", r.witness_report},
              {"witness_gain", r.witness_gain},
              {"min_welfare_margin", r.min_welfare_margin},
              {"welfare_ok", r.welfare_ok}};
}

}  // namespace condisc
