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

#ifndef CONDISC_WAR_H_
#define CONDISC_WAR_H_

#include <string>
#include <vector>

#include "condisc/disclosure.h"
#include "condisc/game.h"
#include "condisc/game_io.h"

namespace condisc {

// Bargaining in the shadow of war with a hidden weak point. Country 1
// (player 0) offers country 2 (player 1) a share o of the territory and may
// attack a location; country 2 accepts or goes to war.
struct WarParams {
  double p_weak = 0.2;
  double p_strong = 0.6;
  double c1 = 0.1;
  double c2 = 0.1;
  double z = 0.2;
  double c_attack1 = 0.3;
  double c_attack2 = 0.15;
  double q_strong = 0.3;
  int grid = 101;
  // Without the weak point country 2's type is its strength alone and
  // country 1 has no attack option.
  bool weak_point = true;

  void Validate() const;
  // (p_S - p_W) / (p_S - p_W + c_1 + c_2).
  double Threshold() const;
};

enum class Attack { kNone = 0, kFirst = 1, kSecond = 2 };

// Flattened war game with its strategy metadata. Country 2's actions are
// threshold plans "accept iff o >= offers[k]" plus "never accept".
class WarGame {
 public:
  explicit WarGame(const WarParams& params);

  const BayesianGame& game() const { return game_; }
  const WarParams& params() const { return params_; }
  const std::vector<double>& offers() const { return offers_; }
  int num_attacks() const { return params_.weak_point ? 3 : 1; }

  int OfferIndex(double offer) const;
  int Country1Action(int offer_index, Attack attack) const;
  int Country2Threshold(int offer_index) const { return offer_index; }
  int Country2Never() const { return static_cast<int>(offers_.size()); }
  int OfferOf(int country1_action) const;
  Attack AttackOf(int country1_action) const;

  // Country 2 type index for (strong, location); location ignored without
  // the weak point.
  int Country2Type(bool strong, int location) const;
  bool IsStrong(int country2_type) const;
  int Location(int country2_type) const;  // 1 or 2, 0 without weak point
  double WinProbability(int country2_type) const;

  // Payoffs (country 1, country 2) at an offer, response and attack.
  std::pair<double, double> Outcome(int country2_type, double offer,
                                    bool accepted, Attack attack) const;

  // Offer p(theta), threshold p(theta), no attack: the conditional-disclosure
  // target with payoff (1 - p(theta), p(theta)).
  CorrelatedPolicy TargetPolicy() const;
  std::size_t TargetAction(int country2_type) const;

 private:
  WarParams params_;
  std::vector<double> offers_;
  BayesianGame game_;
};

// Country 1 best-responds to its belief over country 2's type; country 2
// accepts iff the offer is at least p(theta) - c_2.
class WarContinuation : public ContinuationSolver {
 public:
  explicit WarContinuation(const WarGame& war) : war_(war) {}
  std::vector<std::vector<std::vector<int>>> Solve(
      const BayesianGame& game, const CellStructure& cells) const override;
  std::string Name() const override { return "war-sequential"; }

  // Country 1's best (offer, attack) action against a belief over
  // country 2 types; lowest index on ties.
  int BestCountry1Action(const std::vector<double>& belief_over_t2) const;

 private:
  const WarGame& war_;
};

struct WarEquilibrium {
  std::string regime;  // "war" (separating) or "pooling"
  bool precondition = false;
  double threshold = 0.0;
  double offer = 0.0;
  bool strong_rejects = false;
  bool weak_accepts = false;
  bool attacks = false;
  double country1_payoff = 0.0;
  double strong_payoff = 0.0;
  double weak_payoff = 0.0;
  // Strong type after disclosing unconditionally.
  double disclosed_offer = 0.0;
  bool disclosed_attack = false;
  double disclosed_strong_payoff = 0.0;
  // Conditional-disclosure target for the strong type.
  double conditional_strong_payoff = 0.0;
  double conditional_country1_payoff = 0.0;
};

// Perfect Bayesian equilibrium without disclosure by backward induction.
WarEquilibrium WarPbe(const WarParams& params);
Json WarEquilibriumToJson(const WarEquilibrium& eq);

}  // namespace condisc

#endif  // CONDISC_WAR_H_
