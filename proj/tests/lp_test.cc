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

#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "condisc/lp.h"
#include "doctest.h"

namespace condisc {
namespace {

TEST_CASE("textbook maximization") {
  // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18: optimum 36 at (2, 6).
  LinearProgram lp(2);
  lp.SetMaximize(true);
  lp.SetObjective(0, 3);
  lp.SetObjective(1, 5);
  lp.AddRow({{0, 1}}, RowSense::kLessEqual, 4);
  lp.AddRow({{1, 2}}, RowSense::kLessEqual, 12);
  lp.AddRow({{0, 3}, {1, 2}}, RowSense::kLessEqual, 18);
  const LpSolution s = SolveLp(lp);
  REQUIRE(s.status == LpStatus::kOptimal);
  CHECK(s.objective == doctest::Approx(36));
  CHECK(s.x[0] == doctest::Approx(2));
  CHECK(s.x[1] == doctest::Approx(6));
}

TEST_CASE("infeasible and unbounded programs") {
  LinearProgram inf(1);
  inf.AddRow({{0, 1}}, RowSense::kGreaterEqual, 2);
  inf.AddRow({{0, 1}}, RowSense::kLessEqual, 1);
  CHECK(SolveLp(inf).status == LpStatus::kInfeasible);

  LinearProgram unb(2);
  unb.SetMaximize(true);
  unb.SetObjective(0, 1);
  unb.AddRow({{0, 1}, {1, -1}}, RowSense::kLessEqual, 1);
  CHECK(SolveLp(unb).status == LpStatus::kUnbounded);
}

TEST_CASE("equality rows and free variables") {
  LinearProgram lp;
  const int x = lp.AddVariable(1.0, -kInfinity, kInfinity);
  const int y = lp.AddVariable(1.0, 0.0, 3.0);
  lp.AddRow({{x, 1}, {y, 1}}, RowSense::kEqual, -2);
  const LpSolution s = SolveLp(lp);
  REQUIRE(s.status == LpStatus::kOptimal);
  CHECK(s.objective == doctest::Approx(-2));
  CHECK(lp.MaxViolation(s.x) <= 1e-9);
}

TEST_CASE("degenerate vertex does not cycle") {
  // Beale's example, which cycles under the textbook pivoting rule.
  LinearProgram lp(4);
  lp.SetObjective(0, -0.75);
  lp.SetObjective(1, 150);
  lp.SetObjective(2, -1.0 / 50);
  lp.SetObjective(3, 6);
  lp.AddRow({{0, 0.25}, {1, -60}, {2, -1.0 / 25}, {3, 9}}, RowSense::kLessEqual, 0);
  lp.AddRow({{0, 0.5}, {1, -90}, {2, -1.0 / 50}, {3, 3}}, RowSense::kLessEqual, 0);
  lp.AddRow({{2, 1}}, RowSense::kLessEqual, 1);
  const LpSolution s = SolveLp(lp);
  REQUIRE(s.status == LpStatus::kOptimal);
  CHECK(s.objective == doctest::Approx(-0.05));
}

TEST_CASE("random programs against vertex enumeration in the plane") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int rep = 0; rep < 100; ++rep) {
    // max c.x over a box intersected with three random half planes.
    LinearProgram lp;
    const int x0 = lp.AddVariable(u(rng), -1.0, 1.0);
    const int x1 = lp.AddVariable(u(rng), -1.0, 1.0);
    lp.SetMaximize(true);
    std::vector<std::array<double, 3>> rows;
    for (int r = 0; r < 3; ++r) {
      std::array<double, 3> row{u(rng), u(rng), 0.3 + std::abs(u(rng))};
      rows.push_back(row);
      lp.AddRow({{x0, row[0]}, {x1, row[1]}}, RowSense::kLessEqual, row[2]);
    }
    const LpSolution s = SolveLp(lp);
    REQUIRE(s.status == LpStatus::kOptimal);
    // All lines, pairwise intersections, keep feasible ones.
    std::vector<std::array<double, 3>> lines = rows;
    lines.push_back({1, 0, 1});
    lines.push_back({-1, 0, 1});
    lines.push_back({0, 1, 1});
    lines.push_back({0, -1, 1});
    double best = -1e300;
    for (std::size_t a = 0; a < lines.size(); ++a) {
      for (std::size_t b = a + 1; b < lines.size(); ++b) {
        const double det = lines[a][0] * lines[b][1] - lines[a][1] * lines[b][0];
        if (std::abs(det) < 1e-12) continue;
        const double px = (lines[a][2] * lines[b][1] - lines[a][1] * lines[b][2]) / det;
        const double py = (lines[a][0] * lines[b][2] - lines[a][2] * lines[b][0]) / det;
        bool ok = true;
        for (const auto& l : lines) ok = ok && l[0] * px + l[1] * py <= l[2] + 1e-9;
        if (ok) best = std::max(best, lp.objective()[0] * px + lp.objective()[1] * py);
      }
    }
    CHECK(s.objective == doctest::Approx(best).epsilon(1e-9));
  }
}

}  // namespace
}  // namespace condisc
