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

#include "condisc/war.h"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "condisc/errors.h"
#include "condisc/lp.h"

namespace condisc {
namespace {

constexpr double kGridMatch = 1e-12;

std::string FormatOffer(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::vector<double> OfferGrid(const WarParams& p) {
  std::vector<double> offers;
  for (int k = 0; k < p.grid; ++k) {
    offers.push_back(static_cast<double>(k) / (p.grid - 1));
  }
  const double landmarks[] = {p.p_weak - p.c2, p.p_strong - p.c2, p.p_weak,
                              p.p_strong, 0.0, 1.0};
  for (double l : landmarks) {
    const double v = std::clamp(l, 0.0, 1.0);
    auto it = std::find_if(offers.begin(), offers.end(), [&](double o) {
      return std::abs(o - v) <= kGridMatch;
    });
    if (it == offers.end()) {
      offers.push_back(v);
    } else {
      *it = v;  // keep the landmark value exactly
    }
  }
  std::sort(offers.begin(), offers.end());
  return offers;
}

}  // namespace

void WarParams::Validate() const {
  auto open_unit = [](double v) { return v > 0.0 && v < 1.0; };
  if (!open_unit(p_weak) || !open_unit(p_strong) || !open_unit(q_strong)) {
    throw DomainError("war probabilities must lie in (0, 1)");
  }
  if (!(p_strong > p_weak)) throw DomainError("war requires p_S > p_W");
  if (!(c1 > 0.0) || !(c2 > 0.0)) throw DomainError("war costs must be > 0");
  if (weak_point && !(c_attack1 > z)) {
    throw DomainError("war requires c_A1 > z");
  }
  if (weak_point && !(c_attack2 > 0.0)) {
    throw DomainError("war requires c_A2 > 0");
  }
  if (grid < 2) throw DomainError("offer grid needs at least 2 points");
}

double WarParams::Threshold() const {
  return (p_strong - p_weak) / (p_strong - p_weak + c1 + c2);
}

WarGame::WarGame(const WarParams& params)
    : params_((params.Validate(), params)),
      offers_(OfferGrid(params)),
      game_([&] {
        const WarParams& p = params_;
        std::vector<std::string> t2 =
            p.weak_point ? std::vector<std::string>{"W1", "W2", "S1", "S2"}
                         : std::vector<std::string>{"W", "S"};
        std::vector<double> prior;
        if (p.weak_point) {
          const double w = (1 - p.q_strong) / 2, s = p.q_strong / 2;
          prior = {w, w, s, s};
        } else {
          prior = {1 - p.q_strong, p.q_strong};
        }
        std::vector<std::string> a1, a2;
        const char* attack_names[] = {"none", "v1", "v2"};
        const int attacks = p.weak_point ? 3 : 1;
        for (double o : offers_) {
          for (int k = 0; k < attacks; ++k) {
            a1.push_back("o=" + FormatOffer(o) + "/" + attack_names[k]);
          }
          a2.push_back("accept>=" + FormatOffer(o));
        }
        a2.push_back("never");
        const std::size_t n1 = a1.size(), n2 = a2.size();
        const std::size_t nt = t2.size();
        std::vector<double> table(nt * n1 * n2 * 2);
        for (std::size_t t = 0; t < nt; ++t) {
          for (std::size_t x = 0; x < n1; ++x) {
            const int offer_index = static_cast<int>(x) / attacks;
            const Attack attack = static_cast<Attack>(x % attacks);
            const double o = offers_[offer_index];
            for (std::size_t y = 0; y < n2; ++y) {
              const bool accepted = y + 1 < n2 &&
                                    offer_index >= static_cast<int>(y);
              const auto [u1, u2] =
                  Outcome(static_cast<int>(t), o, accepted, attack);
              const std::size_t cell = (t * n1 * n2 + x * n2 + y) * 2;
              table[cell] = u1;
              table[cell + 1] = u2;
            }
          }
        }
        return BayesianGame({{"c1"}, t2}, {a1, a2}, prior, std::move(table));
      }()) {}

int WarGame::OfferIndex(double offer) const {
  for (std::size_t k = 0; k < offers_.size(); ++k) {
    if (std::abs(offers_[k] - offer) <= kGridMatch) return static_cast<int>(k);
  }
  throw DomainError("offer " + FormatOffer(offer) + " is not on the grid");
}

int WarGame::Country1Action(int offer_index, Attack attack) const {
  if (!params_.weak_point && attack != Attack::kNone) {
    throw DomainError("no attack options without the weak point");
  }
  return offer_index * num_attacks() + static_cast<int>(attack);
}

int WarGame::OfferOf(int country1_action) const {
  return country1_action / num_attacks();
}

Attack WarGame::AttackOf(int country1_action) const {
  return static_cast<Attack>(country1_action % num_attacks());
}

int WarGame::Country2Type(bool strong, int location) const {
  if (!params_.weak_point) return strong ? 1 : 0;
  return (strong ? 2 : 0) + (location - 1);
}

bool WarGame::IsStrong(int country2_type) const {
  return params_.weak_point ? country2_type >= 2 : country2_type == 1;
}

int WarGame::Location(int country2_type) const {
  return params_.weak_point ? 1 + country2_type % 2 : 0;
}

double WarGame::WinProbability(int country2_type) const {
  return IsStrong(country2_type) ? params_.p_strong : params_.p_weak;
}

std::pair<double, double> WarGame::Outcome(int country2_type, double offer,
                                           bool accepted,
                                           Attack attack) const {
  const WarParams& p = params_;
  const double win = WinProbability(country2_type);
  double u1 = accepted ? 1.0 - offer : 1.0 - win - p.c1;
  double u2 = accepted ? offer : win - p.c2;
  if (attack != Attack::kNone) {
    if (static_cast<int>(attack) == Location(country2_type)) {
      u1 += p.z;
      u2 -= p.c_attack2;
    } else {
      u1 -= p.c_attack1;
    }
  }
  return {u1, u2};
}

std::size_t WarGame::TargetAction(int country2_type) const {
  const int k = OfferIndex(WinProbability(country2_type));
  const int digits[] = {Country1Action(k, Attack::kNone),
                        Country2Threshold(k)};
  return game_.action_space().Encode(digits);
}

CorrelatedPolicy WarGame::TargetPolicy() const {
  std::vector<std::size_t> profile(game_.num_joint_types());
  for (std::size_t t = 0; t < profile.size(); ++t) {
    profile[t] = TargetAction(game_.TypeOf(t, 1));
  }
  return CorrelatedPolicy::Deterministic(game_, profile);
}

int WarContinuation::BestCountry1Action(
    const std::vector<double>& belief) const {
  const WarParams& p = war_.params();
  const auto& offers = war_.offers();
  const int types = static_cast<int>(belief.size());
  int best_offer = 0;
  double best_value = -kInfinity;
  for (std::size_t k = 0; k < offers.size(); ++k) {
    double v = 0.0;
    for (int t = 0; t < types; ++t) {
      if (belief[t] == 0.0) continue;
      const double reservation = war_.WinProbability(t) - p.c2;
      const bool accepted = offers[k] >= reservation - kGridMatch;
      v += belief[t] * war_.Outcome(t, offers[k], accepted, Attack::kNone).first;
    }
    if (v > best_value + kGridMatch) {
      best_value = v;
      best_offer = static_cast<int>(k);
    }
  }
  Attack best_attack = Attack::kNone;
  if (p.weak_point) {
    double best_gain = 0.0;
    for (Attack a : {Attack::kFirst, Attack::kSecond}) {
      double gain = 0.0;
      for (int t = 0; t < types; ++t) {
        gain += belief[t] *
                (static_cast<int>(a) == war_.Location(t) ? p.z : -p.c_attack1);
      }
      if (gain > best_gain + kGridMatch) {
        best_gain = gain;
        best_attack = a;
      }
    }
  }
  return war_.Country1Action(best_offer, best_attack);
}

std::vector<std::vector<std::vector<int>>> WarContinuation::Solve(
    const BayesianGame& game, const CellStructure& cs) const {
  std::vector<std::vector<int>> actions(2);
  for (const Cell& cell : cs.cells[0]) {
    std::vector<double> belief(game.num_types(1), 0.0);
    for (std::size_t t = 0; t < cell.belief.size(); ++t) {
      belief[game.TypeOf(t, 1)] += cell.belief[t];
    }
    actions[0].push_back(BestCountry1Action(belief));
  }
  for (const Cell& cell : cs.cells[1]) {
    const double reservation =
        std::max(0.0, war_.WinProbability(cell.own_type) - war_.params().c2);
    actions[1].push_back(war_.Country2Threshold(war_.OfferIndex(reservation)));
  }
  return {actions};
}

WarEquilibrium WarPbe(const WarParams& params) {
  const WarGame war(params);
  const WarContinuation solver(war);
  const BayesianGame& game = war.game();
  const int types = game.num_types(1);
  WarEquilibrium eq;
  eq.threshold = params.Threshold();
  eq.precondition = params.q_strong < eq.threshold;

  std::vector<double> prior(types);
  for (int t = 0; t < types; ++t) prior[t] = game.marginal(1, t);
  const int action = solver.BestCountry1Action(prior);
  eq.offer = war.offers()[war.OfferOf(action)];
  eq.attacks = war.AttackOf(action) != Attack::kNone;
  auto accepts = [&](int t, double offer) {
    return offer >= war.WinProbability(t) - params.c2 - kGridMatch;
  };
  const int strong = war.Country2Type(true, 1);
  const int weak = war.Country2Type(false, 1);
  eq.strong_rejects = !accepts(strong, eq.offer);
  eq.weak_accepts = accepts(weak, eq.offer);
  double strong_total = 0.0, weak_total = 0.0, strong_mass = 0.0,
         weak_mass = 0.0;
  for (int t = 0; t < types; ++t) {
    const auto [u1, u2] =
        war.Outcome(t, eq.offer, accepts(t, eq.offer), war.AttackOf(action));
    eq.country1_payoff += prior[t] * u1;
    if (war.IsStrong(t)) {
      strong_total += prior[t] * u2;
      strong_mass += prior[t];
    } else {
      weak_total += prior[t] * u2;
      weak_mass += prior[t];
    }
  }
  eq.strong_payoff = strong_total / strong_mass;
  eq.weak_payoff = weak_total / weak_mass;
  eq.regime = eq.strong_rejects ? "war" : "pooling";

  // Strong type after unconditional disclosure: country 1 knows the type.
  std::vector<double> known(types, 0.0);
  known[strong] = 1.0;
  const int disclosed = solver.BestCountry1Action(known);
  eq.disclosed_offer = war.offers()[war.OfferOf(disclosed)];
  eq.disclosed_attack = war.AttackOf(disclosed) != Attack::kNone;
  eq.disclosed_strong_payoff =
      war.Outcome(strong, eq.disclosed_offer,
                  accepts(strong, eq.disclosed_offer), war.AttackOf(disclosed))
          .second;
  eq.conditional_strong_payoff = params.p_strong;
  eq.conditional_country1_payoff = 1.0 - params.p_strong;
  return eq;
}

Json WarEquilibriumToJson(const WarEquilibrium& eq) {
  return Json{{"regime", eq.regime},
              {"precondition", eq.precondition},
              {"threshold", eq.threshold},
              {"offer", eq.offer},
              {"strong_rejects", eq.strong_rejects},
              {"weak_accepts", eq.weak_accepts},
              {"attacks", eq.attacks},
              {"country1_payoff", eq.country1_payoff},
              {"strong_payoff", eq.strong_payoff},
              {"weak_payoff", eq.weak_payoff},
              {"disclosed_offer", eq.disclosed_offer},
              {"disclosed_attack", eq.disclosed_attack},
              {"disclosed_strong_payoff", eq.disclosed_strong_payoff},
              {"conditional_strong_payoff", eq.conditional_strong_payoff},
              {"conditional_country1_payoff", eq.conditional_country1_payoff}};
}

}  // namespace condisc
