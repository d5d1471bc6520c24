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

#include <vector>

#include "condisc/devices.h"
#include "condisc/errors.h"
#include "condisc/solvers.h"
#include "condisc/war.h"
#include "doctest.h"

namespace condisc {
namespace {

BayesianGame Dilemma() {
  const std::vector<double> pay = {2, 2, 0, 3, 3, 0, 1, 1};
  return BayesianGame({{"-"}, {"-"}}, {{"C", "D"}, {"C", "D"}}, {1.0}, pay);
}

TEST_CASE("type ledger enforces reads") {
  const TypeLedger ledger(0, {2, std::nullopt});
  CHECK(ledger.Knows(0));
  CHECK_FALSE(ledger.Knows(1));
  CHECK_FALSE(ledger.KnowsAll());
  CHECK(ledger.Get(0) == 2);
  CHECK_THROWS_AS(ledger.Get(1), InformationViolation);
}

TEST_CASE("fingerprints are stable") {
  CHECK(Fingerprint("abc") == Fingerprint("abc"));
  CHECK(Fingerprint("abc") != Fingerprint("abd"));
}

TEST_CASE("folk devices cooperate in the dilemma") {
  const BayesianGame g = Dilemma();
  const std::vector<std::size_t> cc = {0};
  const CorrelatedPolicy mu = CorrelatedPolicy::Deterministic(g, cc);
  const DeviceProfile profile = BuildFolkDevicesForPolicy(g, mu);
  const CommitmentOutcome o = EvaluateCommitmentGame(g, profile, 0, 0.5);
  CHECK(o.actions == std::vector<int>{0, 0});
  const BneReport bne = VerifyBNE(g, profile);
  CHECK(bne.verdict);
  CHECK(bne.max_gain <= 1e-9);
  // Defection is met with the minimax punishment.
  DeviceProfile dev = profile;
  dev[1] = ConstantActionDevice(1, 1);
  CHECK(EvaluateCommitmentGame(g, dev, 0, 0.5).actions[0] == 1);
  dev[1] = FreshIdentityFolk(profile, 1, "x");
  CHECK(EvaluateCommitmentGame(g, dev, 0, 0.5).actions[0] == 1);
}

TEST_CASE("evaluation does not depend on the order") {
  const WarGame war(WarParams{});
  const BayesianGame& g = war.game();
  const DeviceProfile profile = BuildFolkDevicesForPolicy(g, war.TargetPolicy());
  for (std::size_t t = 0; t < g.num_joint_types(); ++t) {
    for (double c : {0.1, 0.5, 0.9}) {
      const auto a = EvaluateCommitmentGame(g, profile, t, c, {0, 1});
      const auto b = EvaluateCommitmentGame(g, profile, t, c, {1, 0});
      CHECK(a.actions == b.actions);
      CHECK(a.disclosure == b.disclosure);
    }
  }
}

TEST_CASE("war folk profile is a BNE and implements its payoff") {
  const WarGame war(WarParams{});
  const BayesianGame& g = war.game();
  const DeviceProfile profile = BuildFolkDevicesForPolicy(g, war.TargetPolicy());
  const BneReport bne = VerifyBNE(g, profile);
  CHECK(bne.verdict);
  CHECK(bne.max_gain <= 1e-9);
  CHECK(bne.deviations_checked > 0);
  const Prop1Report p1 = VerifyProp1(g, profile);
  CHECK(p1.verdict);
  const PayoffVector x = InducedPayoff(g, war.TargetPolicy());
  for (int j = 0; j < 2; ++j) {
    for (int t = 0; t < g.num_types(j); ++t) {
      CHECK(p1.x.at(j, t) == doctest::Approx(x.at(j, t)).epsilon(1e-9));
    }
  }
}

TEST_CASE("a target below the minimax value has no device profile") {
  const BayesianGame g = Dilemma();
  PayoffVector x{{{0.5}, {0.5}}};
  CHECK_THROWS_AS(BuildFolkDevicesForTarget(g, x), DomainError);
}

TEST_CASE("Monte Carlo verification agrees with exact integration") {
  const WarGame war(WarParams{});
  const BayesianGame& g = war.game();
  const DeviceProfile profile = BuildFolkDevicesForPolicy(g, war.TargetPolicy());
  VerifyOptions mc;
  mc.trials = 200;
  mc.seed = 4;
  const BneReport bne = VerifyBNE(g, profile, mc);
  CHECK(bne.verdict);
}

TEST_CASE("non disclosing deviators are identified") {
  const WarGame war(WarParams{});
  const BayesianGame& g = war.game();
  const DeviceProfile profile = BuildFolkDevicesForPolicy(g, war.TargetPolicy());
  DeviceProfile dev = profile;
  dev[1] = NonDisclosingFolk(profile, 1);
  const FolkPlan* plan = FolkPlanOf(profile);
  REQUIRE(plan != nullptr);
  // Player 0 plays its part of the punishment against player 1.
  for (std::size_t t = 0; t < g.num_joint_types(); ++t) {
    const auto o = EvaluateCommitmentGame(g, dev, t, 0.3);
    const std::size_t key = g.type_space().Drop(t, 1);
    const std::size_t a_minus = plan->punishments[1].at(key).Sample(0.3);
    CHECK(o.actions[0] == a_minus);
  }
}

}  // namespace
}  // namespace condisc
