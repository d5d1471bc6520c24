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

#include "condisc/mountain.h"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "condisc/errors.h"
#include "condisc/signal.h"

namespace condisc {
namespace {

constexpr double kBand = 1e-9;

// Integrals over {min > a} of the uniform square.
double MassAbove(double a) { return (1 - a) * (1 - a); }
double FirstAbove(double a) { return (1 - a) * (1 - a * a) / 2; }

double RegionMeanCoordinate(double r, double t) {
  if (t - r < kBand) return (1 + 3 * t) / 4;
  return (FirstAbove(r) - FirstAbove(t)) / (MassAbove(r) - MassAbove(t));
}

std::string Fmt(const char* format, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), format, a, b);
  return buf;
}

}  // namespace

double GoldenComplement() { return (3.0 - std::sqrt(5.0)) / 2.0; }

void MountainParams::Validate() const {
  if (!(c1 > 0.0) || !(c2 > 0.0)) throw DomainError("costs must be positive");
  if (s_grid < 101 || quadrature < 101) {
    throw DomainError("mountain grids need at least 101 points");
  }
  if (samples < 1) throw DomainError("samples must be positive");
}

MountainForms::MountainForms(const MountainParams& params) : params_(params) {
  params_.Validate();
}

double MountainForms::SwitchPoint() const {
  return params_.c2 - GoldenComplement() + 1;
}

double MountainForms::TStar(double s) const {
  const double g = GoldenComplement();
  if (s > SwitchPoint()) return g;
  return (3.0 - std::sqrt(5.0)) * (params_.c2 - s - 1) / 2 + 1;
}

double MountainForms::R(double s) const {
  return 1 - s - TStar(s) + params_.c2;
}

double MountainForms::RPlus(double s) const { return std::max(0.0, R(s)); }

double MountainForms::P(double s) const {
  const double t = TStar(s);
  if (R(s) >= t) return 1.0;
  const double r = RPlus(s);
  return r * (2 - r) / (t * (2 - t));
}

double RegionMeanMin(double r, double t) {
  // d/dr of the numerator and denominator at r = t.
  if (t - r < kBand) return t;
  const double num = t * t - r * r - 2.0 / 3.0 * (t * t * t - r * r * r);
  return num / ((t - r) * (2 - t - r));
}

double RegionSecondMoment(double r, double t) {
  auto f = [](double x) { return x * x * x * x - x * x * x - x; };
  if (t - r < kBand) {
    const double df = 4 * t * t * t - 3 * t * t - 1;
    return -df / (3 * (2 - 2 * t));
  }
  return (f(r) - f(t)) / (3 * (t - r) * (2 - t - r));
}

double MountainForms::M1(double s) const {
  return RegionSecondMoment(std::min(RPlus(s), TStar(s)), TStar(s));
}

double MountainForms::M2(double s) const {
  return RegionMeanMin(std::min(RPlus(s), TStar(s)), TStar(s));
}

double MountainForms::Objective(double s) const {
  const double p = P(s);
  const double t = TStar(s);
  return s * p +
         (1 - 2 * M2(s) - 2 * (M1(s) - t * t) - params_.c1) * (1 - p);
}

double MountainForms::SStar() const {
  const int n = params_.s_grid;
  double best = -1e300;
  for (int k = 0; k < n; ++k) {
    best = std::max(best, Objective(static_cast<double>(k) / (n - 1)));
  }
  double arg = 0.0;
  for (int k = 0; k < n; ++k) {
    const double s = static_cast<double>(k) / (n - 1);
    if (Objective(s) >= best - 1e-12) arg = s;
  }
  return arg;
}

double MountainForms::SDisclosed(double theta_x, double theta_y) const {
  return 1 - 2 * std::min(theta_x, theta_y) + params_.c2;
}

bool MountainForms::Region::Contains(double tx, double ty) const {
  const double m = std::min(tx, ty);
  return m > lo && m <= hi;
}

double MountainForms::Region::Mass() const {
  return hi > lo ? MassAbove(lo) - MassAbove(hi) : 0.0;
}

Lemma3Report Lemma3CheckRegion(double r_plus, double t_star,
                               long long samples, std::uint64_t seed,
                               double s) {
  if (!(t_star > r_plus) || r_plus < 0 || t_star > 1) {
    throw DomainError("lemma check needs 0 <= r+ < t* <= 1");
  }
  if (samples < 2) throw DomainError("need at least 2 samples");
  Lemma3Report report;
  report.s = s;
  report.r_plus = r_plus;
  report.t_star = t_star;
  report.samples = samples;
  const RandomizationSignal signal(seed);
  const long long max_draws = samples * 100000LL;
  // Raw sums of min, x, y, x^2, y^2 and higher moments for the SEs.
  long double sm = 0, sm2 = 0, sx = 0, sx2 = 0, sx3 = 0, sx4 = 0;
  long double sy = 0, sy2 = 0, sy3 = 0, sy4 = 0;
  long long accepted = 0;
  long long draw = 0;
  while (accepted < samples) {
    if (draw >= max_draws) throw Error("rejection sampler exhausted");
    const double x = signal.Uniform(0, RandomizationSignal::kStreamMonteCarlo,
                                    2 * static_cast<std::uint64_t>(draw));
    const double y = signal.Uniform(
        0, RandomizationSignal::kStreamMonteCarlo,
        2 * static_cast<std::uint64_t>(draw) + 1);
    ++draw;
    const double m = std::min(x, y);
    if (!(m > r_plus && m <= t_star)) continue;
    ++accepted;
    sm += m;
    sm2 += static_cast<long double>(m) * m;
    const long double lx = x, ly = y;
    sx += lx;
    sx2 += lx * lx;
    sx3 += lx * lx * lx;
    sx4 += lx * lx * lx * lx;
    sy += ly;
    sy2 += ly * ly;
    sy3 += ly * ly * ly;
    sy4 += ly * ly * ly * ly;
  }
  report.draws = draw;
  const long double n = static_cast<long double>(accepted);
  auto mean_check = [&](const std::string& name, long double sum,
                        long double sum2, double closed) {
    MomentCheck c;
    c.name = name;
    c.closed_form = closed;
    c.estimate = static_cast<double>(sum / n);
    const long double var = sum2 / n - (sum / n) * (sum / n);
    c.se = static_cast<double>(std::sqrt(std::max<long double>(var, 0) / n));
    c.tolerance = std::max(3 * c.se, 1e-3);
    c.pass = std::abs(c.estimate - c.closed_form) <= c.tolerance;
    return c;
  };
  auto var_check = [&](const std::string& name, long double s1, long double s2,
                       long double s3, long double s4, double closed) {
    const long double mu = s1 / n;
    const long double e2 = s2 / n, e3 = s3 / n, e4 = s4 / n;
    const long double var = e2 - mu * mu;
    const long double central4 =
        e4 - 4 * mu * e3 + 6 * mu * mu * e2 - 3 * mu * mu * mu * mu;
    MomentCheck c;
    c.name = name;
    c.closed_form = closed;
    c.estimate = static_cast<double>(var);
    c.se = static_cast<double>(
        std::sqrt(std::max<long double>(central4 - var * var, 0) / n));
    c.tolerance = std::max(3 * c.se, 1e-3);
    c.pass = std::abs(c.estimate - c.closed_form) <= c.tolerance;
    return c;
  };
  const double mean_xy = RegionMeanCoordinate(r_plus, t_star);
  const double second = RegionSecondMoment(r_plus, t_star);
  report.checks.push_back(
      mean_check("E[min]", sm, sm2, RegionMeanMin(r_plus, t_star)));
  report.checks.push_back(mean_check("E[theta_x]", sx, sx2, mean_xy));
  report.checks.push_back(mean_check("E[theta_y]", sy, sy2, mean_xy));
  report.checks.push_back(var_check("Var[theta_x]", sx, sx2, sx3, sx4,
                                    second - mean_xy * mean_xy));
  report.checks.push_back(var_check("Var[theta_y]", sy, sy2, sy3, sy4,
                                    second - mean_xy * mean_xy));
  {
    MomentCheck band;
    band.name = "E[min] in (r+, t*]";
    band.closed_form = RegionMeanMin(r_plus, t_star);
    band.estimate = report.checks[0].estimate;
    band.pass = band.estimate > r_plus && band.estimate <= t_star;
    report.checks.push_back(band);
  }
  report.pass = std::all_of(report.checks.begin(), report.checks.end(),
                            [](const MomentCheck& c) { return c.pass; });
  return report;
}

Lemma3Report Lemma3Check(const MountainForms& forms, double s,
                         long long samples, std::uint64_t seed) {
  const double r = forms.RPlus(s);
  const double t = forms.TStar(s);
  if (!(r < t)) throw DomainError("lemma check needs r+(s) < t*(s)");
  Lemma3Report report = Lemma3CheckRegion(r, t, samples, seed, s);
  // Posterior means against t*(s) and the printed m1, m2.
  auto against = [&](const std::string& name, int idx, double closed) {
    MomentCheck c = report.checks[idx];
    c.name = name;
    c.closed_form = closed;
    c.pass = std::abs(c.estimate - closed) <= c.tolerance;
    report.checks.push_back(c);
  };
  against("E[theta_x] = t*", 1, t);
  against("E[theta_y] = t*", 2, t);
  against("E[min] = m2", 0, forms.M2(s));
  against("Var[theta_x] = m1 - t*^2", 3, forms.M1(s) - t * t);
  report.pass = std::all_of(report.checks.begin(), report.checks.end(),
                            [](const MomentCheck& c) { return c.pass; });
  return report;
}

MomentCheck AcceptanceProbabilityCheck(const MountainForms& forms, double s,
                                       long long samples, std::uint64_t seed) {
  const double r = forms.RPlus(s);
  const double t = forms.TStar(s);
  const RandomizationSignal signal(seed);
  long long inside = 0, below = 0;
  for (long long k = 0; inside < samples; ++k) {
    const double x = signal.Uniform(1, RandomizationSignal::kStreamMonteCarlo,
                                    2 * static_cast<std::uint64_t>(k));
    const double y = signal.Uniform(1, RandomizationSignal::kStreamMonteCarlo,
                                    2 * static_cast<std::uint64_t>(k) + 1);
    const double m = std::min(x, y);
    if (m > t) continue;
    ++inside;
    if (m <= r) ++below;
  }
  MomentCheck c;
  c.name = "P(min <= r+ | min <= t*)";
  c.closed_form = forms.P(s);
  c.estimate = static_cast<double>(below) / static_cast<double>(inside);
  c.se = std::sqrt(c.estimate * (1 - c.estimate) / static_cast<double>(inside));
  c.tolerance = std::max(3 * c.se, 1e-12);
  c.pass = std::abs(c.estimate - c.closed_form) <= c.tolerance;
  return c;
}

Prop3Report Prop3Verify(const MountainParams& params, std::uint64_t seed) {
  const MountainForms forms(params);
  Prop3Report report;
  const int n = params.s_grid;
  report.grid_step = 1.0 / (n - 1);
  double best = -1e300;
  for (int k = 0; k < n; ++k) {
    const double s = static_cast<double>(k) / (n - 1);
    report.curve.emplace_back(s, forms.Objective(s));
    best = std::max(best, report.curve.back().second);
  }
  report.s_star = forms.SStar();
  report.plateau_start = report.s_star;
  for (auto it = report.curve.rbegin(); it != report.curve.rend(); ++it) {
    if (it->second < best - 1e-12) break;
    report.plateau_start = it->first;
  }
  const double s_star = report.s_star;
  const double t = forms.TStar(s_star);
  report.t_star = t;
  const double c1 = params.c1, c2 = params.c2;

  report.clauses.push_back(
      {"(i) s* = 1", std::abs(s_star - 1.0) <= report.grid_step,
       Fmt("argmax %.12g, objective %.12g", s_star, best)});

  const double r = forms.R(s_star);
  report.clauses.push_back({"(ii) every type rejects", r < 0 && t > c2,
                            Fmt("r(s*) = %.12g, t* = %.12g", r, t)});

  {
    const double r_plus = forms.RPlus(s_star);
    const double mean = RegionMeanCoordinate(r_plus, t);
    const Lemma3Report mc = Lemma3CheckRegion(
        r_plus, t, std::min<long long>(params.samples, 200000), seed, s_star);
    const bool ok = std::abs(mean - t) <= 1e-12 && mc.checks[1].pass &&
                    mc.checks[2].pass &&
                    std::abs(mc.checks[1].estimate - t) <= mc.checks[1].tolerance;
    report.clauses.push_back(
        {"(iii) paratrooper point is the posterior mean", ok,
         Fmt("closed-form mean %.12g, Monte Carlo %.12g", mean,
             mc.checks[1].estimate)});
  }

  {
    const int q = params.quadrature;
    bool ok = true;
    for (int a = 0; a < q && ok; ++a) {
      for (int b = 0; b < q && ok; ++b) {
        const double tx = (a + 0.5) / q, ty = (b + 0.5) / q;
        const double m = std::min(tx, ty);
        const double disclose = 2 * m - c2;
        const double withhold = t + m - c2;
        ok = (disclose > withhold) == (m > t) &&
             std::abs(1 - forms.SDisclosed(tx, ty) - disclose) <= 1e-12;
      }
    }
    const bool high = 2 * 0.9 - c2 > t + 0.9 - c2;
    const bool low = 2 * 0.2 - c2 > t + 0.2 - c2;
    report.clauses.push_back({"(iv) disclose iff min > t*",
                              ok && high && !low,
                              Fmt("threshold %.12g", t)});
  }

  {
    const int q = params.quadrature;
    bool ok = true;
    int count = 0;
    double worst = 1e300;
    for (int a = 0; a < q; ++a) {
      for (int b = 0; b < q; ++b) {
        const double tx = (a + 0.5) / q, ty = (b + 0.5) / q;
        const double m = std::min(tx, ty);
        if (!(m > t - c1 - c2)) continue;
        ++count;
        const double u1 =
            1 - 2 * m - (t - tx) * (t - tx) - (t - ty) * (t - ty) - c1;
        const double u2 = t + m - c2;
        const double v1 = 1 - t - m + c2;
        const double v2 = t + m - c2;
        worst = std::min(worst, v1 - u1);
        if (!(v1 > u1) || v2 < u2 - 1e-12) ok = false;
      }
    }
    // A low type claiming a high type raises its conditional payoff.
    report.witness_min = 0.2;
    report.witness_report_min = 0.9;
    report.witness_gain = (t + report.witness_report_min - c2) -
                          (t + report.witness_min - c2);
    report.clauses.push_back(
        {"(v) Pareto improvement and not IC",
         ok && count > 0 && report.witness_gain > 0,
         Fmt("min player 1 gain %.12g, misreport gain %.12g", worst,
             report.witness_gain)});
  }

  report.pass = std::all_of(report.clauses.begin(), report.clauses.end(),
                            [](const Prop3Clause& c) { return c.pass; });
  return report;
}

Json Lemma3ToJson(const Lemma3Report& r) {
  Json checks = Json::array();
  for (const MomentCheck& c : r.checks) {
    checks.push_back({{"name", c.name},
                      {"closed_form", c.closed_form},
                      {"estimate", c.estimate},
                      {"se", c.se},
                      {"tolerance", c.tolerance},
                      {"pass", c.pass}});
  }
  return Json{{"s", r.s},           {"r_plus", r.r_plus},
              {"t_star", r.t_star}, {"samples", r.samples},
              {"draws", r.draws},   {"checks", checks},
              {"pass", r.pass}};
}

Json Prop3ToJson(const Prop3Report& r) {
  Json clauses = Json::array();
  for (const Prop3Clause& c : r.clauses) {
    clauses.push_back(
        {{"clause", c.clause}, {"pass", c.pass}, {"detail", c.detail}});
  }
  return Json{{"s_star", r.s_star},
              {"grid_step", r.grid_step},
              {"t_star", r.t_star},
              {"plateau_start", r.plateau_start},
              {"witness_min", r.witness_min},
              {"witness_report_min", r.witness_report_min},
              {"witness_gain", r.witness_gain},
              {"clauses", clauses},
              {"pass", r.pass}};
}

}  // namespace condisc
