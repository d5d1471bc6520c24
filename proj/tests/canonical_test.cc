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

#include <cmath>
#include <random>

#include "condisc/auction.h"
#include "condisc/errors.h"
#include "condisc/mountain.h"
#include "condisc/war.h"
#include "doctest.h"

namespace condisc {
namespace {

TEST_CASE("war equilibrium at the defaults") {
  const WarParams p;
  const WarEquilibrium eq = WarPbe(p);
  CHECK(eq.precondition);
  CHECK(eq.offer == doctest::Approx(p.p_weak - p.c2).epsilon(1e-12));
  CHECK(eq.strong_rejects);
  CHECK(eq.weak_accepts);
  CHECK(eq.strong_payoff == doctest::Approx(p.p_strong - p.c2).epsilon(1e-12));
  CHECK(eq.strong_payoff - eq.disclosed_strong_payoff ==
        doctest::Approx(p.c_attack2).epsilon(1e-12));
}

TEST_CASE("war without a weak point loses nothing by disclosure") {
  WarParams p;
  p.weak_point = false;
  const WarEquilibrium eq = WarPbe(p);
  CHECK(eq.disclosed_strong_payoff == doctest::Approx(eq.strong_payoff));
}

TEST_CASE("war game outcomes") {
  const WarParams p;
  const WarGame war(p);
  const BayesianGame& g = war.game();
  CHECK(g.num_players() == 2);
  CHECK(g.num_types(1) == 4);
  const int strong1 = war.Country2Type(true, 1);
  CHECK(war.IsStrong(strong1));
  CHECK(war.Location(strong1) == 1);
  // Accepted offer s: country 1 keeps 1 - s.
  const auto [u1, u2] = war.Outcome(strong1, 0.3, true, Attack::kNone);
  CHECK(u1 == doctest::Approx(0.7));
  CHECK(u2 == doctest::Approx(0.3));
  // War: costs on both sides.
  const auto [w1, w2] = war.Outcome(strong1, 0.3, false, Attack::kNone);
  CHECK(w1 == doctest::Approx(1 - p.p_strong - p.c1));
  CHECK(w2 == doctest::Approx(p.p_strong - p.c2));
  CHECK_THROWS_AS(war.OfferIndex(0.123), DomainError);
}

TEST_CASE("war parameters are validated") {
  WarParams p;
  p.p_weak = 0.9;
  CHECK_THROWS(WarGame{p});
}

TEST_CASE("all pay closed forms") {
  CHECK(AllPayUtility(0.8, 0.3, 0.1) == doctest::Approx(0.5));
  CHECK(AllPayUtility(0.8, 0.1, 0.3) == doctest::Approx(-0.1));
  CHECK(AllPayUtility(0.8, 0.2, 0.2) == doctest::Approx(0.2));
  CHECK(EquilibriumBid(0.6) == doctest::Approx(0.18));
  CHECK(EpsilonBid(0.2, 0.1) == doctest::Approx(0.004));
  CHECK(EpsilonBid(0.9, 0.1) == doctest::Approx(0.1));
  // s^2 - s min{eps, s^3/2}, independently.
  for (double s = 0.0; s <= 1.0; s += 0.05) {
    const double closed = s * s - s * std::min(0.1, s * s * s / 2);
    CHECK(EpsilonPolicyPayoff(s, 0.1) == doctest::Approx(closed).epsilon(1e-12));
  }
}

TEST_CASE("auction checks on a coarse grid") {
  AuctionParams p;
  p.grid = 21;
  const AuctionReport r = AuctionChecks(p);
  CHECK(r.max_eta <= 2.0 / (p.grid - 1));
  CHECK(r.max_closed_form_gap <= 1e-12);
  CHECK(r.dominates_equilibrium);
  CHECK(r.ic_witness);
  CHECK(r.witness_gain > 0.0);
  CHECK(r.welfare_ok);
}

TEST_CASE("equilibrium bids on a grid") {
  AuctionParams p;
  p.grid = 11;
  const AuctionGame a(p);
  for (double v : a.values()) CHECK(a.BidIndex(EquilibriumBid(v)) >= 0);
  CHECK_THROWS(a.BidIndex(0.777));
}

TEST_CASE("mountain golden section") {
  const MountainForms f(MountainParams{});
  CHECK(GoldenComplement() == doctest::Approx((3 - std::sqrt(5.0)) / 2).epsilon(1e-15));
  CHECK(std::abs(f.TStar(1.0) - (3 - std::sqrt(5.0)) / 2) <= 1e-12);
  // Both sides of the switch point agree.
  const double sw = f.SwitchPoint();
  CHECK(std::abs(f.TStar(sw - 1e-13) - f.TStar(sw + 1e-13)) <= 1e-12);
}

TEST_CASE("region moments against numerical integration") {
  // Triangle-like region min(x, y) in [r, t]; integrate on a fine grid.
  const double r = 0.1, t = 0.35;
  const int n = 1500;
  double mass = 0.0, mmin = 0.0, mm2 = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      const double x = (i + 0.5) / n, y = (k + 0.5) / n;
      const double m = std::min(x, y);
      if (m < r || m > t) continue;
      mass += 1;
      mmin += m;
      mm2 += x * x;
    }
  }
  CHECK(RegionMeanMin(r, t) == doctest::Approx(mmin / mass).epsilon(1e-4));
  CHECK(RegionSecondMoment(r, t) == doctest::Approx(mm2 / mass).epsilon(1e-4));
}

TEST_CASE("lemma three with a small sample") {
  const MountainForms f(MountainParams{});
  const Lemma3Report rep = Lemma3Check(f, 1.0, 200000, 9);
  for (const MomentCheck& c : rep.checks) {
    INFO(c.name);
    CHECK(c.pass);
  }
  CHECK(rep.pass);
}

TEST_CASE("mountain parameters are validated") {
  MountainParams p;
  p.s_grid = 10;
  CHECK_THROWS(MountainForms{p});
}

}  // namespace
}  // namespace condisc
