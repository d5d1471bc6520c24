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

#ifndef CONDISC_AUCTION_H_
#define CONDISC_AUCTION_H_

#include <vector>

#include "condisc/game.h"
#include "condisc/game_io.h"

namespace condisc {

// Two-bidder all-pay auction with valuations on a uniform grid of [0, 1].
struct AuctionParams {
  int grid = 101;
  double eps_bid = 0.1;

  void Validate() const;
};

class AuctionGame {
 public:
  explicit AuctionGame(const AuctionParams& params);

  const BayesianGame& game() const { return game_; }
  const AuctionParams& params() const { return params_; }
  const std::vector<double>& values() const { return values_; }
  const std::vector<double>& bids() const { return bids_; }
  double step() const { return 1.0 / (params_.grid - 1); }

  int BidIndex(double bid) const;
  // Bid s^2/2 for every valuation.
  CorrelatedPolicy EquilibriumPolicy() const;
  // The opponent half of the equilibrium, as a punishment-scope policy.
  CorrelatedPolicy EquilibriumOpponent(int j) const;
  // Highest valuation bids min{eps, s^3/2}, the other bids 0; both bid 0 on
  // ties.
  CorrelatedPolicy EpsilonPolicy() const;

 private:
  AuctionParams params_;
  std::vector<double> values_;
  std::vector<double> bids_;
  BayesianGame game_;
};

// Ex post utility s_i (1[x_i >= x_-i] - 1/2 1[x_i = x_-i]) - x_i.
double AllPayUtility(double value, double own_bid, double other_bid);

// Continuum closed forms.
double EquilibriumBid(double s);                       // s^2 / 2
double EquilibriumPayoff(double s);                    // s^2 / 2
double EpsilonBid(double s, double eps_bid);           // min{eps, s^3/2}
double EpsilonPolicyPayoff(double s, double eps_bid);  // s^2 - s min{..}
// (s - m) P(s_{-i} <= s) evaluated with the uniform CDF.
double EpsilonPolicyPayoffIntegral(double s, double eps_bid);

struct AuctionRow {
  double s = 0.0;
  double equilibrium_payoff = 0.0;  // on the grid
  double best_deviation = 0.0;      // best response value on the grid
  double eta = 0.0;
  double closed_equilibrium = 0.0;
  double policy_payoff = 0.0;  // on the grid
  double closed_policy = 0.0;
  double integral_policy = 0.0;
};

struct AuctionReport {
  std::vector<AuctionRow> rows;
  double max_eta = 0.0;
  double max_equilibrium_gap = 0.0;
  double max_closed_form_gap = 0.0;
  double max_policy_grid_gap = 0.0;
  bool dominates_equilibrium = true;  // policy >= s^2/2, equality at s = 0
  bool ic_witness = false;
  int witness_player = -1;
  double witness_type = 0.0;
  double witness_report = 0.0;
  double witness_gain = 0.0;
  double min_welfare_margin = 0.0;  // min over t of welfare - (max s - eps)
  bool welfare_ok = true;
};

AuctionReport AuctionChecks(const AuctionParams& params);
Json AuctionReportToJson(const AuctionReport& report);

}  // namespace condisc

#endif  // CONDISC_AUCTION_H_
