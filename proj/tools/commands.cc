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

#include "commands.h"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <vector>

#include "CLI11.hpp"
#include "condisc/auction.h"
#include "condisc/devices.h"
#include "condisc/disclosure.h"
#include "condisc/errors.h"
#include "condisc/game.h"
#include "condisc/game_io.h"
#include "condisc/mountain.h"
#include "condisc/programs.h"
#include "condisc/solvers.h"
#include "condisc/war.h"

namespace condisc {
namespace cli {
namespace {

namespace fs = std::filesystem;

constexpr const char* kVersion = "condisc 1.0.0";

std::string Num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

// Rounds every float in `j` to 12 significant digits.
void Round12(Json& j) {
  if (j.is_number_float()) {
    j = std::strtod(Num(j.get<double>()).c_str(), nullptr);
  } else if (j.is_structured()) {
    for (auto& v : j) Round12(v);
  }
}

std::string CsvField(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + "\"";
}

class Artifacts {
 public:
  Artifacts(const Settings& s, const std::string& command) {
    std::string label = s.label;
    if (label.empty()) {
      const std::time_t now = std::time(nullptr);
      char buf[32];
      std::strftime(buf, sizeof(buf), "%Y%m%d-%H%M%S", std::localtime(&now));
      label = buf;
    }
    dir_ = fs::path(s.out) / command / label;
    fs::create_directories(dir_);
  }

  void Json(const std::string& name, condisc::Json doc) {
    Round12(doc);
    std::ofstream f(dir_ / name);
    f << doc.dump(2) << "\n";
    files_.push_back((dir_ / name).string());
  }

  void Csv(const std::string& name, const std::vector<std::string>& header,
           const std::vector<std::vector<std::string>>& rows) {
    std::ofstream f(dir_ / name);
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t k = 0; k < cells.size(); ++k) {
        f << (k ? "," : "") << CsvField(cells[k]);
      }
      f << "\n";
    };
    line(header);
    for (const auto& r : rows) line(r);
    files_.push_back((dir_ / name).string());
  }

  const std::vector<std::string>& files() const { return files_; }
  const fs::path& dir() const { return dir_; }

 private:
  fs::path dir_;
  std::vector<std::string> files_;
};

condisc::Json SettingsToJson(const Settings& s) {
  return condisc::Json{{"command", s.command},   {"game", s.game},
                       {"payoff", s.payoff},     {"policy", s.policy},
                       {"epsilon", s.epsilon},   {"trials", s.trials},
                       {"seed", s.seed},         {"tol", s.tol},
                       {"jobs", s.jobs},         {"out", s.out},
                       {"label", s.label},       {"deviator", s.deviator},
                       {"player", s.player},     {"depth_cap", s.depth_cap},
                       {"termination", s.termination},
                       {"max_k", s.max_k},       {"samples", s.samples},
                       {"which", s.which},       {"space", s.space}};
}

// Writes run.json, prints the verdict lines and returns the exit code.
class Run {
 public:
  Run(const Settings& s, const std::string& command)
      : settings_(s), artifacts_(s, command),
        start_(std::chrono::steady_clock::now()) {}

  Artifacts& artifacts() { return artifacts_; }

  void Verdict(const std::string& name, bool pass) {
    verdicts_.emplace_back(name, pass);
    std::cout << name << ": " << (pass ? "PASS" : "FAIL") << "\n";
  }

  int Finish() {
    const double wall = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - start_)
                            .count();
    condisc::Json verdicts = condisc::Json::object();
    bool all = true;
    for (const auto& [name, pass] : verdicts_) {
      verdicts[name] = pass;
      all = all && pass;
    }
    std::vector<std::string> files = artifacts_.files();
    files.push_back((artifacts_.dir() / "run.json").string());
    condisc::Json run{{"command", settings_.command},
                      {"config", SettingsToJson(settings_)},
                      {"seed", settings_.seed},
                      {"wall_time_s", wall},
                      {"verdicts", verdicts},
                      {"artifacts", files},
                      {"version", kVersion}};
    artifacts_.Json("run.json", run);
    std::cout << "artifacts: " << artifacts_.dir().string() << "\n";
    return all ? kPass : kFail;
  }

 private:
  const Settings& settings_;
  Artifacts artifacts_;
  std::chrono::steady_clock::time_point start_;
  std::vector<std::pair<std::string, bool>> verdicts_;
};

// A game plus whatever defaults its source provides.
struct LoadedGame {
  std::shared_ptr<WarGame> war;
  std::shared_ptr<BayesianGame> owned;
  std::optional<CorrelatedPolicy> default_policy;
  std::optional<DisclosureSpace> space;

  const BayesianGame& game() const { return war ? war->game() : *owned; }
};

BayesianGame SingletonGame() {
  // One type each: a pure coordination game.
  std::vector<double> u = {1, 1, 0, 0, 0, 0, 1, 1};
  return BayesianGame({{"only"}, {"only"}}, {{"a", "b"}, {"a", "b"}}, {1.0},
                      std::move(u));
}

BayesianGame ConstantGame() {
  std::vector<double> u(2 * 4 * 2, 0.5);
  return BayesianGame({{"x", "y"}, {"z"}}, {{"a", "b"}, {"c", "d"}},
                      {0.5, 0.5}, std::move(u));
}

LoadedGame LoadGame(const std::string& spec) {
  LoadedGame g;
  if (spec.empty()) throw ConfigError("--game is required");
  if (spec.rfind("builtin:", 0) == 0) {
    const std::string name = spec.substr(8);
    if (name == "war" || name == "war-no-weak-point") {
      WarParams p;
      p.weak_point = name == "war";
      g.war = std::make_shared<WarGame>(p);
      g.default_policy = g.war->TargetPolicy();
      g.space = DisclosureSpace::AllOrNothing(g.war->game());
    } else if (name == "public-goods-2" || name == "public-goods-3") {
      g.owned = std::make_shared<BayesianGame>(
          PublicGoodsGame(name == "public-goods-2" ? 2 : 3));
      std::vector<std::size_t> coop(g.owned->num_joint_types(), 0);
      g.default_policy = CorrelatedPolicy::Deterministic(*g.owned, coop);
      g.space = DisclosureSpace::AllOrNothing(*g.owned);
    } else if (name == "singleton") {
      g.owned = std::make_shared<BayesianGame>(SingletonGame());
      g.default_policy = CorrelatedPolicy::Deterministic(
          *g.owned, std::vector<std::size_t>{0});
      g.space = DisclosureSpace::AllOrNothing(*g.owned);
    } else if (name == "constant") {
      g.owned = std::make_shared<BayesianGame>(ConstantGame());
      g.default_policy = CorrelatedPolicy::Deterministic(
          *g.owned, std::vector<std::size_t>{0, 0});
      g.space = DisclosureSpace::AllOrNothing(*g.owned);
    } else {
      throw ConfigError("unknown builtin game '" + name + "'");
    }
    return g;
  }
  const condisc::Json doc = ReadJsonFile(spec);
  g.owned = std::make_shared<BayesianGame>(GameFromJson(doc));
  if (doc.contains("disclosure_spaces")) {
    g.space = DisclosureSpace::FromJson(*g.owned, doc["disclosure_spaces"]);
  }
  return g;
}

// Target policy from --policy, or the builtin default.
std::optional<CorrelatedPolicy> TargetPolicy(const Settings& s,
                                             const LoadedGame& g) {
  if (!s.policy.empty()) {
    return PolicyFromJson(g.game(), ReadJsonFile(s.policy));
  }
  return g.default_policy;
}

// x from --payoff, else the payoff of the target policy.
PayoffVector TargetPayoff(const Settings& s, const LoadedGame& g,
                          const std::optional<CorrelatedPolicy>& mu) {
  if (!s.payoff.empty()) {
    return PayoffFromJson(g.game(), ReadJsonFile(s.payoff));
  }
  if (!mu) throw ConfigError("--payoff or --policy is required");
  return InducedPayoff(g.game(), *mu);
}

std::string TypeName(const BayesianGame& game, int j, int t) {
  return game.type_labels(j)[t];
}

}  // namespace

void ApplyConfigFile(const std::string& path, Settings& s) {
  const condisc::Json doc = ReadJsonFile(path);
  if (!doc.is_object()) throw ConfigError("scenario config must be an object");
  for (const auto& [key, v] : doc.items()) {
    try {
      if (key == "game") s.game = v.get<std::string>();
      else if (key == "payoff") s.payoff = v.get<std::string>();
      else if (key == "policy" || key == "target_policy") s.policy = v.get<std::string>();
      else if (key == "epsilon") s.epsilon = v.get<double>();
      else if (key == "trials") s.trials = v.get<std::uint64_t>();
      else if (key == "seed") s.seed = v.get<std::uint64_t>();
      else if (key == "tol") s.tol = v.get<double>();
      else if (key == "jobs") s.jobs = v.get<int>();
      else if (key == "out") s.out = v.get<std::string>();
      else if (key == "label") s.label = v.get<std::string>();
      else if (key == "deviator") s.deviator = v.get<std::string>();
      else if (key == "player") s.player = v.get<int>();
      else if (key == "depth_cap") s.depth_cap = v.get<std::uint64_t>();
      else if (key == "termination") s.termination = v.get<bool>();
      else if (key == "max_k") s.max_k = v.get<int>();
      else if (key == "samples") s.samples = v.get<std::uint64_t>();
      else if (key == "which") s.which = v.get<std::string>();
      else if (key == "space") s.space = v.get<std::string>();
      else throw ConfigError("unknown config key '" + key + "'");
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("config key '" + key + "': " + e.what());
    }
  }
}

int RunAnalyze(const Settings& s) {
  const LoadedGame g = LoadGame(s.game);
  const BayesianGame& game = g.game();
  std::optional<CorrelatedPolicy> mu = TargetPolicy(s, g);
  const PayoffVector x = TargetPayoff(s, g, mu);
  Run run(s, "analyze");
  const SolverReport feasible = CheckFeasible(game, x, s.tol);
  const SolverReport intir = CheckINTIR(game, x, s.tol);
  if (!mu && feasible.witness) mu = feasible.witness;
  std::optional<SolverReport> ic;
  if (mu) ic = CheckIC(game, *mu, x, s.tol);
  std::vector<std::vector<std::string>> eff_rows;
  bool efficient = true;
  if (mu) {
    for (std::size_t t = 0; t < game.num_joint_types(); ++t) {
      if (game.prior(t) <= 0.0) continue;
      const std::vector<double> at = ExpectedUtilities(game, *mu, t);
      const SolverReport e = CheckEfficient(game, t, at, s.tol);
      efficient = efficient && e.verdict;
      std::vector<std::string> row{game.TypeKey(t), e.verdict ? "1" : "0"};
      for (double v : at) row.push_back(Num(v));
      eff_rows.push_back(std::move(row));
    }
  }
  condisc::Json report{{"feasible", ReportToJson(game, feasible)},
                       {"intir", ReportToJson(game, intir)},
                       {"x", PayoffToJson(x)}};
  if (ic) report["ic"] = ReportToJson(game, *ic);
  run.artifacts().Json("report.json", report);
  std::vector<std::vector<std::string>> rows{
      {"feasible", feasible.verdict ? "1" : "0"},
      {"intir", intir.verdict ? "1" : "0"}};
  if (ic) rows.push_back({"ic", ic->verdict ? "1" : "0"});
  if (mu) rows.push_back({"efficient", efficient ? "1" : "0"});
  run.artifacts().Csv("verdicts.csv", {"check", "verdict"}, rows);
  std::vector<std::string> header{"types", "efficient"};
  for (int i = 0; i < game.num_players(); ++i) {
    header.push_back("u" + std::to_string(i));
  }
  if (mu) run.artifacts().Csv("efficiency.csv", header, eff_rows);
  run.Verdict("feasible", feasible.verdict);
  run.Verdict("intir", intir.verdict);
  if (ic) run.Verdict("ic", ic->verdict);
  if (mu) run.Verdict("efficient", efficient);
  return run.Finish();
}

int RunFolk(const Settings& s) {
  const LoadedGame g = LoadGame(s.game);
  const BayesianGame& game = g.game();
  const std::optional<CorrelatedPolicy> mu = TargetPolicy(s, g);
  Run run(s, "folk");
  DeviceProfile profile;
  try {
    if (mu && s.payoff.empty()) {
      profile = BuildFolkDevicesForPolicy(game, *mu, s.tol);
    } else {
      profile = BuildFolkDevicesForTarget(game, TargetPayoff(s, g, mu), s.tol);
    }
  } catch (const DomainError& e) {
    std::cout << "construction failed: " << e.what() << "\n";
    run.artifacts().Json("construction.json",
                         condisc::Json{{"error", e.what()}});
    run.Verdict("bne", false);
    return run.Finish();
  }
  VerifyOptions options;
  options.tol = s.tol;
  options.trials = s.trials;
  options.seed = s.seed;
  const BneReport bne = VerifyBNE(game, profile, options);
  const Prop1Report prop1 = VerifyProp1(game, profile, options);
  condisc::Json devices = condisc::Json::array();
  for (const DeviceRef& d : profile) devices.push_back(d->spec());
  run.artifacts().Json("devices.json", devices);
  run.artifacts().Json(
      "report.json",
      condisc::Json{{"bne", BneReportToJson(game, bne)},
                    {"prop1",
                     {{"verdict", prop1.verdict},
                      {"x", PayoffToJson(prop1.x)},
                      {"feasible", prop1.feasible.verdict},
                      {"intir", prop1.intir.verdict}}}});
  std::vector<std::vector<std::string>> rows;
  for (const TypeGain& r : bne.gains) {
    rows.push_back({std::to_string(r.player), TypeName(game, r.player, r.type),
                    Num(r.equilibrium_payoff), Num(r.max_gain), Num(r.se),
                    r.best_deviation, Num(r.signal_aware_gain)});
  }
  run.artifacts().Csv("bne.csv",
                      {"player", "type", "equilibrium_payoff", "max_gain",
                       "se", "best_deviation", "signal_aware_gain"},
                      rows);
  run.Verdict("bne", bne.verdict);
  run.Verdict("prop1", prop1.verdict);
  return run.Finish();
}

int RunSimulate(const Settings& s) {
  const LoadedGame g = LoadGame(s.game.empty() ? "builtin:public-goods-2"
                                               : s.game);
  const BayesianGame& game = g.game();
  const std::optional<CorrelatedPolicy> mu = TargetPolicy(s, g);
  std::shared_ptr<const SirbotPlan> plan;
  if (mu && s.payoff.empty()) {
    plan = MakeSirbotPlanForPolicy(game, *mu, s.epsilon, s.tol);
  } else {
    plan = MakeSirbotPlanForTarget(game, TargetPayoff(s, g, mu), s.epsilon,
                                   s.tol);
  }
  SimulationOptions options;
  options.trials = s.trials > 0 ? s.trials : 10000;
  options.seed = s.seed;
  options.jobs = s.jobs;
  options.engine.depth_cap = s.depth_cap;
  Run run(s, "simulate");
  ProgramProfile programs = SirbotProfile(plan);
  const int j = s.player >= 0 ? s.player : game.num_players() - 1;
  if (j >= game.num_players()) throw ConfigError("--player out of range");

  auto row_cells = [&](const TrialRow& r) {
    std::vector<std::string> cells{std::to_string(r.trial), game.TypeKey(r.t)};
    std::string acts;
    for (std::size_t k = 0; k < r.actions.size(); ++k) {
      acts += (k ? "|" : "") + game.action_labels(k)[r.actions[k]];
    }
    cells.push_back(r.depth_exceeded ? "depth-exceeded" : acts);
    cells.push_back(std::to_string(r.depth));
    cells.push_back(r.punished ? "1" : "0");
    for (int i = 0; i < game.num_players(); ++i) {
      cells.push_back(r.payoffs.empty() ? "" : Num(r.payoffs[i]));
    }
    return cells;
  };
  std::vector<std::string> header{"trial", "t", "actions", "depth",
                                  "punished"};
  for (int i = 0; i < game.num_players(); ++i) {
    header.push_back("payoff" + std::to_string(i));
  }

  if (!s.deviator.empty() && s.deviator != "none") {
    std::optional<NamedProgram> found;
    for (NamedProgram& d : DeviatorLibrary(plan, j, s.seed + 1)) {
      if (d.name == s.deviator) found = d;
    }
    if (!found) {
      std::string names;
      for (const NamedProgram& d : DeviatorLibrary(plan, j)) {
        names += " " + d.name;
      }
      throw ConfigError("unknown deviator '" + s.deviator +
                        "'; available:" + names);
    }
    programs[j] = found->program;
    const ExploitabilityReport rep =
        EstimateExploitability(*plan, programs, j, found->name, options);
    std::vector<std::vector<std::string>> rows;
    for (const TrialRow& r : rep.rows) {
      auto cells = row_cells(r);
      cells.push_back(Num(r.gain));
      rows.push_back(std::move(cells));
    }
    header.push_back("gain");
    run.artifacts().Csv("trials.csv", header, rows);
    run.artifacts().Json("summary.json", ExploitabilityToJson(rep));
    std::cout << "mean gain " << Num(rep.mean_gain) << " (se " << Num(rep.se)
              << "), delta " << Num(rep.delta_slack) << ", punished "
              << Num(rep.punished_fraction) << "\n";
    run.Verdict("delta_bound", rep.within_bound);
    return run.Finish();
  }

  const std::vector<TrialRow> rows = SimulateProfile(*plan, programs, options);
  std::vector<std::vector<std::string>> cells;
  std::uint64_t on_target = 0, exceeded = 0, deepest = 0;
  for (const TrialRow& r : rows) {
    cells.push_back(row_cells(r));
    on_target += r.on_target ? 1 : 0;
    exceeded += r.depth_exceeded ? 1 : 0;
    deepest = std::max(deepest, r.depth);
  }
  run.artifacts().Csv("trials.csv", header, cells);
  condisc::Json summary{{"trials", rows.size()},
                        {"on_target", on_target},
                        {"depth_exceeded", exceeded},
                        {"max_depth", deepest},
                        {"eps_ground", s.epsilon}};
  std::cout << "on target " << on_target << "/" << rows.size()
            << ", max depth " << deepest << "\n";
  run.Verdict("target_profile", on_target == rows.size() && exceeded == 0);
  if (s.termination) {
    const TerminationReport term =
        TerminationProfile(*plan, programs, options, s.max_k);
    summary["termination"] = TerminationToJson(term);
    std::vector<std::vector<std::string>> tail;
    for (const TailPoint& p : term.tail) {
      tail.push_back({std::to_string(p.k), Num(p.empirical), Num(p.bound),
                      Num(p.se), p.pass ? "1" : "0"});
    }
    run.artifacts().Csv("termination.csv",
                        {"k", "empirical", "bound", "se", "pass"}, tail);
    run.Verdict("termination_tail", term.pass);
  }
  run.artifacts().Json("summary.json", summary);
  return run.Finish();
}

int RunUnravel(const Settings& s) {
  const LoadedGame g = LoadGame(s.game);
  const BayesianGame& game = g.game();
  DisclosureSpace space = g.space ? *g.space
                                  : DisclosureSpace::AllOrNothing(game);
  if (s.space == "unrestricted") {
    space = DisclosureSpace::Unrestricted(game);
  } else if (s.space == "all-or-nothing") {
    space = DisclosureSpace::AllOrNothing(game);
  } else if (!s.space.empty()) {
    throw ConfigError("--space must be all-or-nothing or unrestricted");
  }
  std::unique_ptr<ContinuationSolver> solver;
  if (g.war) {
    solver = std::make_unique<WarContinuation>(*g.war);
  } else {
    solver = std::make_unique<BayesNashContinuation>();
  }
  DisclosureOptions options;
  options.tol = s.tol;
  const std::optional<CorrelatedPolicy> mu = TargetPolicy(s, g);
  Run run(s, "unravel");
  const UnravelingOutcome outcome =
      SolveDisclosureGame(game, space, *solver, options);
  std::vector<std::vector<std::string>> rows;
  for (const TypeReport& t : outcome.types) {
    rows.push_back({std::to_string(t.player), TypeName(game, t.player, t.type),
                    Num(t.on_path_payoff), Num(t.full_disclosure_payoff),
                    Num(t.no_disclosure_payoff)});
  }
  run.artifacts().Csv("types.csv",
                      {"player", "type", "on_path", "full_disclosure",
                       "no_disclosure"},
                      rows);
  condisc::Json doc{{"outcome", OutcomeToJson(game, outcome)}};
  std::cout << "unraveling: "
            << (outcome.found ? UnravelingName(outcome.classification)
                              : std::string("no equilibrium found"))
            << "\n";
  run.Verdict("equilibrium_found", outcome.found);
  if (mu || !s.payoff.empty()) {
    const PipelineReport pipeline =
        s.payoff.empty()
            ? Prop2Pipeline(game, space, *mu, *solver, s.tol)
            : Prop2Pipeline(game, space, TargetPayoff(s, g, mu), *solver,
                            s.tol);
    doc["pipeline"] = PipelineToJson(game, pipeline);
    run.Verdict("post_unraveling_conditions", pipeline.verdict);
  }
  run.artifacts().Json("report.json", doc);
  return run.Finish();
}

int RunExamples(const Settings& s) {
  const bool all = s.which == "all";
  if (!all && s.which != "war" && s.which != "auction" &&
      s.which != "mountain") {
    throw ConfigError("examples: expected war, auction, mountain or all");
  }
  Run run(s, "examples");
  condisc::Json summary = condisc::Json::object();
  if (all || s.which == "war") {
    const WarParams params;
    const WarEquilibrium eq = WarPbe(params);
    run.artifacts().Csv(
        "war_pbe.csv",
        {"regime", "offer", "strong_rejects", "weak_accepts",
         "country1_payoff", "strong_payoff", "weak_payoff",
         "disclosed_offer", "disclosed_strong_payoff",
         "conditional_strong_payoff"},
        {{eq.regime, Num(eq.offer), eq.strong_rejects ? "1" : "0",
          eq.weak_accepts ? "1" : "0", Num(eq.country1_payoff),
          Num(eq.strong_payoff), Num(eq.weak_payoff), Num(eq.disclosed_offer),
          Num(eq.disclosed_strong_payoff),
          Num(eq.conditional_strong_payoff)}});
    const bool pass =
        eq.precondition &&
        std::abs(eq.offer - (params.p_weak - params.c2)) <= 1e-12 &&
        eq.strong_rejects &&
        std::abs(eq.strong_payoff - (params.p_strong - params.c2)) <= 1e-12;
    summary["war"] = WarEquilibriumToJson(eq);
    run.Verdict("war", pass);
  }
  if (all || s.which == "auction") {
    const AuctionReport rep = AuctionChecks(AuctionParams{});
    std::vector<std::vector<std::string>> rows;
    for (const AuctionRow& r : rep.rows) {
      rows.push_back({Num(r.s), Num(r.equilibrium_payoff),
                      Num(r.closed_equilibrium), Num(r.eta),
                      Num(r.policy_payoff), Num(r.closed_policy)});
    }
    run.artifacts().Csv("auction_checks.csv",
                        {"s", "equilibrium_payoff", "closed_form", "eta",
                         "policy_payoff", "closed_policy"},
                        rows);
    const double step = 1.0 / (AuctionParams{}.grid - 1);
    const bool pass = rep.max_eta <= 2 * step &&
                      rep.max_equilibrium_gap <= 0.01 &&
                      rep.max_closed_form_gap <= 1e-12 &&
                      rep.dominates_equilibrium && rep.ic_witness &&
                      rep.welfare_ok;
    summary["auction"] = AuctionReportToJson(rep);
    run.Verdict("auction", pass);
  }
  if (all || s.which == "mountain") {
    MountainParams params;
    params.samples = static_cast<int>(s.samples);
    const MountainForms forms(params);
    const Lemma3Report lemma =
        Lemma3Check(forms, 1.0, static_cast<long long>(s.samples), s.seed);
    std::vector<std::vector<std::string>> rows;
    for (const MomentCheck& c : lemma.checks) {
      rows.push_back({c.name, Num(c.closed_form), Num(c.estimate), Num(c.se),
                      Num(c.tolerance), c.pass ? "1" : "0"});
    }
    run.artifacts().Csv("mountain_lemma3.csv",
                        {"quantity", "closed_form", "estimate", "se",
                         "tolerance", "pass"},
                        rows);
    const Prop3Report prop = Prop3Verify(params, s.seed);
    std::vector<std::vector<std::string>> curve;
    for (const auto& [sv, obj] : prop.curve) {
      curve.push_back({Num(sv), Num(obj), Num(forms.TStar(sv)),
                       Num(forms.RPlus(sv)), Num(forms.P(sv))});
    }
    run.artifacts().Csv("mountain_prop3.csv",
                        {"s", "objective", "t_star", "r_plus", "p"}, curve);
    summary["mountain"] = {{"lemma3", Lemma3ToJson(lemma)},
                           {"prop3", Prop3ToJson(prop)}};
    std::cout << "s* = " << Num(prop.s_star) << "\n";
    run.Verdict("mountain_lemma3", lemma.pass);
    run.Verdict("mountain_prop3", prop.pass);
  }
  run.artifacts().Json("summary.json", summary);
  return run.Finish();
}

int Main(int argc, char** argv) {
  CLI::App app{"Commitment games with conditional information disclosure"};
  app.require_subcommand(1);
  Settings s;
  std::string config;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config, "JSON scenario file");
    sub->add_option("--game", s.game, "game file or builtin:<name>");
    sub->add_option("--tol", s.tol, "payoff tolerance");
    sub->add_option("--seed", s.seed, "random seed");
    sub->add_option("--out", s.out, "output root");
    sub->add_option("--label", s.label, "run label (default: timestamp)");
  };
  CLI::App* analyze = app.add_subcommand("analyze", "solution-concept checks");
  common(analyze);
  analyze->add_option("--payoff", s.payoff, "payoff vector file");
  analyze->add_option("--policy", s.policy, "policy file");
  CLI::App* folk = app.add_subcommand("folk", "folk device construction");
  common(folk);
  folk->add_option("--payoff", s.payoff, "payoff vector file");
  folk->add_option("--policy", s.policy, "target policy file");
  folk->add_option("--trials", s.trials,
                   "Monte Carlo trials (0: exact integration over c)");
  CLI::App* simulate = app.add_subcommand("simulate", "program game runs");
  common(simulate);
  simulate->add_option("--payoff", s.payoff, "target payoff file");
  simulate->add_option("--policy", s.policy, "target policy file");
  simulate->add_option("--epsilon", s.epsilon, "grounding probability");
  simulate->add_option("--trials", s.trials, "number of trials");
  simulate->add_option("--jobs", s.jobs, "worker threads");
  simulate->add_option("--deviator", s.deviator, "deviator program name");
  simulate->add_option("--player", s.player, "deviating player");
  simulate->add_option("--depth-cap", s.depth_cap, "recursion depth cap");
  simulate->add_flag("--termination", s.termination,
                     "also report the termination tail");
  simulate->add_option("--max-k", s.max_k, "largest K in the tail report");
  CLI::App* unravel = app.add_subcommand("unravel", "disclosure pipeline");
  common(unravel);
  unravel->add_option("--payoff", s.payoff, "target payoff file");
  unravel->add_option("--policy", s.policy, "target policy file");
  unravel->add_option("--space", s.space,
                      "all-or-nothing or unrestricted disclosure");
  CLI::App* examples = app.add_subcommand("examples", "worked examples");
  common(examples);
  examples->add_option("which", s.which, "war, auction, mountain or all");
  examples->add_option("--samples", s.samples, "Monte Carlo samples");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kConfigError;
  }
  try {
    if (!config.empty()) {
      Settings merged;
      ApplyConfigFile(config, merged);
      // Flags given on the command line win over the file.
      CLI::App* sub = app.get_subcommands().front();
      auto given = [&](const char* name) {
        const CLI::Option* opt = sub->get_option_no_throw(name);
        return opt != nullptr && opt->count() > 0;
      };
      if (!given("--game")) s.game = merged.game;
      if (!given("--payoff") && !merged.payoff.empty()) s.payoff = merged.payoff;
      if (!given("--policy") && !merged.policy.empty()) s.policy = merged.policy;
      if (!given("--epsilon")) s.epsilon = merged.epsilon;
      if (!given("--trials")) s.trials = merged.trials;
      if (!given("--seed")) s.seed = merged.seed;
      if (!given("--tol")) s.tol = merged.tol;
      if (!given("--jobs")) s.jobs = merged.jobs;
      if (!given("--out")) s.out = merged.out;
      if (!given("--label")) s.label = merged.label;
      if (!given("--deviator")) s.deviator = merged.deviator;
      if (!given("--player")) s.player = merged.player;
      if (!given("--depth-cap")) s.depth_cap = merged.depth_cap;
      if (!given("--termination")) s.termination = merged.termination;
      if (!given("--max-k")) s.max_k = merged.max_k;
      if (!given("--samples")) s.samples = merged.samples;
      if (!given("which")) s.which = merged.which;
      if (!given("--space")) s.space = merged.space;
    }
    if (analyze->parsed()) return s.command = "analyze", RunAnalyze(s);
    if (folk->parsed()) return s.command = "folk", RunFolk(s);
    if (simulate->parsed()) return s.command = "simulate", RunSimulate(s);
    if (unravel->parsed()) return s.command = "unravel", RunUnravel(s);
    if (examples->parsed()) return s.command = "examples", RunExamples(s);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternalError;
  }
  return kInternalError;
}

}  // namespace cli
}  // namespace condisc
