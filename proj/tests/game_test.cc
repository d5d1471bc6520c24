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

#include <random>
#include <vector>

#include "condisc/errors.h"
#include "condisc/game.h"
#include "condisc/game_io.h"
#include "condisc/signal.h"
#include "doctest.h"
#include "oracles.h"

namespace condisc {
namespace {

BayesianGame Matching() {
  // Types: player 0 {L, H}, player 1 {x}. Actions {a, b} each.
  std::vector<double> u(2 * 4 * 2);
  for (int t = 0; t < 2; ++t) {
    for (int a = 0; a < 4; ++a) {
      const bool match = (a % 2) == (a / 2);
      u[(t * 4 + a) * 2 + 0] = match ? 1.0 + t : 0.0;
      u[(t * 4 + a) * 2 + 1] = match ? 0.0 : 1.0;
    }
  }
  return BayesianGame({{"L", "H"}, {"x"}}, {{"a", "b"}, {"a", "b"}},
                      {0.25, 0.75}, u);
}

TEST_CASE("product space encodes and drops digits") {
  ProductSpace s({2, 3, 4});
  CHECK(s.size() == 24);
  for (std::size_t k = 0; k < s.size(); ++k) {
    const std::vector<int> d = s.Decode(k);
    CHECK(s.Encode(d) == k);
    for (int i = 0; i < 3; ++i) {
      const ProductSpace w = s.Without(i);
      const std::size_t sub = s.Drop(k, i);
      CHECK(sub < w.size());
      CHECK(s.Insert(sub, i, d[i]) == k);
      CHECK(s.Digit(s.Replace(k, i, 0), i) == 0);
    }
  }
}

TEST_CASE("marginals and conditionals") {
  const BayesianGame g = Matching();
  CHECK(g.marginal(0, 0) == doctest::Approx(0.25));
  CHECK(g.marginal(1, 0) == doctest::Approx(1.0));
  CHECK(g.Conditional(1, 0) == doctest::Approx(1.0));
  CHECK(g.Conditional(1, 1) == doctest::Approx(0.75));
  CHECK(g.utility_bound() == doctest::Approx(2.0));
}

TEST_CASE("distribution sampling follows cumulative mass") {
  Distribution d{{{2, 0.25}, {5, 0.5}, {7, 0.25}}};
  CHECK(d.Sample(0.0) == 2);
  CHECK(d.Sample(0.2499) == 2);
  CHECK(d.Sample(0.25) == 5);
  CHECK(d.Sample(0.74) == 5);
  CHECK(d.Sample(0.9999) == 7);
  CHECK(d.Total() == doctest::Approx(1.0));
  CHECK(d.Mass(5) == 0.5);
  CHECK(d.Mass(3) == 0.0);
}

TEST_CASE("policies reject bad masses") {
  const BayesianGame g = Matching();
  std::vector<Distribution> bad(2, Distribution{{{0, 0.5}}});
  CHECK_THROWS_AS(CorrelatedPolicy::FullProfile(g, bad), DomainError);
  std::vector<Distribution> short_table(1, Distribution::PointMass(0));
  CHECK_THROWS_AS(CorrelatedPolicy::FullProfile(g, short_table), Error);
}

TEST_CASE("ex interim payoffs agree with direct summation") {
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 40; ++rep) {
    const BayesianGame g = testing::RandomGame(rng);
    const testing::DensePolicy mu = testing::RandomGridPolicy(g, rng);
    const CorrelatedPolicy p = testing::ToPolicy(g, mu);
    for (int j = 0; j < 2; ++j) {
      for (int t = 0; t < g.num_types(j); ++t) {
        CHECK(ExInterimPayoff(g, p, j, t) ==
              doctest::Approx(testing::OracleInterim(g, mu, j, t)).epsilon(1e-12));
        for (int s = 0; s < g.num_types(j); ++s) {
          CHECK(MisreportPayoff(g, p, j, t, s) ==
                doctest::Approx(testing::OracleMisreport(g, mu, j, t, s))
                    .epsilon(1e-12));
        }
      }
    }
  }
}

TEST_CASE("desugaring picks the sampled profile") {
  const BayesianGame g = Matching();
  std::vector<Distribution> table = {Distribution{{{0, 0.5}, {3, 0.5}}},
                                     Distribution::PointMass(1)};
  const CorrelatedPolicy p = CorrelatedPolicy::FullProfile(g, table);
  CHECK(DesugarAt(p, g, 0.1)[0] == 0);
  CHECK(DesugarAt(p, g, 0.6)[0] == 3);
  CHECK(DesugarAt(p, g, 0.6)[1] == 1);
  const RandomizationSignal sig(3);
  const double c = sig.DrawC(9);
  CHECK(DesugarPolicy(p, g, sig, 9) == DesugarAt(p, g, c));
}

TEST_CASE("signal is counter based") {
  const RandomizationSignal a(42), b(42), other(43);
  for (std::uint64_t k = 0; k < 100; ++k) {
    CHECK(a.DrawC(k) == b.DrawC(k));
    CHECK(a.ULevel(k, 3) == b.ULevel(k, 3));
    CHECK(a.DrawC(k) >= 0.0);
    CHECK(a.DrawC(k) < 1.0);
  }
  CHECK(a.DrawC(0) != other.DrawC(0));
  CHECK(a.Uniform(0, RandomizationSignal::kStreamC, 0) !=
        a.Uniform(0, RandomizationSignal::kStreamLevel, 0));
}

TEST_CASE("game documents round trip") {
  const BayesianGame g = Matching();
  const Json doc = GameToJson(g);
  const BayesianGame h = GameFromJson(doc);
  CHECK(h.num_joint_types() == g.num_joint_types());
  for (std::size_t t = 0; t < g.num_joint_types(); ++t) {
    CHECK(h.prior(t) == g.prior(t));
    for (std::size_t a = 0; a < g.num_joint_actions(); ++a) {
      for (int i = 0; i < 2; ++i) CHECK(h.Utility(t, a, i) == g.Utility(t, a, i));
    }
  }
}

TEST_CASE("game documents are validated") {
  Json doc = GameToJson(Matching());
  Json extra = doc;
  extra["colour"] = "red";
  CHECK_THROWS_AS(GameFromJson(extra), ConfigError);
  Json missing = doc;
  missing["utility"].erase(missing["utility"].begin());
  CHECK_THROWS_AS(GameFromJson(missing), TotalityError);
  Json bad_prior = doc;
  bad_prior["prior"]["L|x"] = 0.9;
  CHECK_THROWS(GameFromJson(bad_prior));
}

TEST_CASE("policy documents round trip") {
  std::mt19937_64 rng(5);
  const BayesianGame g = testing::RandomGame(rng);
  const CorrelatedPolicy p =
      testing::ToPolicy(g, testing::RandomGridPolicy(g, rng));
  const CorrelatedPolicy q = PolicyFromJson(g, PolicyToJson(g, p));
  for (std::size_t t = 0; t < g.num_joint_types(); ++t) {
    for (std::size_t a = 0; a < g.num_joint_actions(); ++a) {
      CHECK(q.at(t).Mass(a) == doctest::Approx(p.at(t).Mass(a)));
    }
  }
}

}  // namespace
}  // namespace condisc
