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

#ifndef CONDISC_MOUNTAIN_H_
#define CONDISC_MOUNTAIN_H_

#include <cstdint>
#include <string>
#include <vector>

#include "condisc/game_io.h"

namespace condisc {

// (3 - sqrt 5) / 2, the root of g^2 - 3g + 1 in (0, 1).
double GoldenComplement();

// Player 2 holds the mountain; theta = (theta_x, theta_y) is uniform on the
// unit square. Player 1 offers s, player 2 accepts or withholds, and a
// rejected offer leads to a paratrooper landing at (t_x, t_y).
struct MountainParams {
  double c1 = 0.1;
  double c2 = 0.1;
  int s_grid = 1001;
  int samples = 1000000;
  int quadrature = 201;

  void Validate() const;
};

class MountainForms {
 public:
  explicit MountainForms(const MountainParams& params);

  const MountainParams& params() const { return params_; }

  double TStar(double s) const;
  // The first branch value switches on at s > SwitchPoint().
  double SwitchPoint() const;
  double R(double s) const;
  double RPlus(double s) const;
  // P(min <= r+ | min <= t*).
  double P(double s) const;
  // E[theta_x^2] on the region r+ < min <= t*.
  double M1(double s) const;
  // E[min] on the region r+ < min <= t*.
  double M2(double s) const;
  // Player 1's expected payoff from offering s.
  double Objective(double s) const;
  // Grid argmax of Objective on [0, 1]; ties go to the largest s.
  double SStar() const;
  double SDisclosed(double theta_x, double theta_y) const;

  // Region descriptors: min in (lo, hi].
  struct Region {
    double lo = 0.0;
    double hi = 0.0;
    bool Contains(double tx, double ty) const;
    double Mass() const;  // uniform measure
  };
  Region U1(double s) const { return {0.0, RPlus(s)}; }
  Region U2(double s) const { return {RPlus(s), TStar(s)}; }

 private:
  MountainParams params_;
};

// Closed-form E[min] and E[theta_x^2] on r < min <= t, with the thin-band
// limit when t - r is below 1e-9.
double RegionMeanMin(double r, double t);
double RegionSecondMoment(double r, double t);

struct MomentCheck {
  std::string name;
  double closed_form = 0.0;
  double estimate = 0.0;
  double se = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct Lemma3Report {
  double s = 0.0;
  double r_plus = 0.0;
  double t_star = 0.0;
  long long samples = 0;
  long long draws = 0;
  std::vector<MomentCheck> checks;
  bool pass = false;
};

// Rejection sampling of the uniform square restricted to r < min <= t.
Lemma3Report Lemma3CheckRegion(double r_plus, double t_star, long long samples,
                               std::uint64_t seed, double s = 0.0);
Lemma3Report Lemma3Check(const MountainForms& forms, double s,
                         long long samples, std::uint64_t seed);

// Monte Carlo P(min <= r+ | min <= t*) against P(s).
MomentCheck AcceptanceProbabilityCheck(const MountainForms& forms, double s,
                                       long long samples, std::uint64_t seed);

struct Prop3Clause {
  std::string clause;
  bool pass = false;
  std::string detail;
};

struct Prop3Report {
  double s_star = 0.0;
  double grid_step = 0.0;
  double t_star = 0.0;
  double plateau_start = 0.0;  // smallest s attaining the max within 1e-12
  std::vector<std::pair<double, double>> curve;  // (s, objective)
  std::vector<Prop3Clause> clauses;
  // Monotone-in-min misreport under the proposed payoff.
  double witness_min = 0.0;
  double witness_report_min = 0.0;
  double witness_gain = 0.0;
  bool pass = false;
};

Prop3Report Prop3Verify(const MountainParams& params, std::uint64_t seed);

Json Lemma3ToJson(const Lemma3Report& report);
Json Prop3ToJson(const Prop3Report& report);

}  // namespace condisc

#endif  // CONDISC_MOUNTAIN_H_
