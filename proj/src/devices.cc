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

#include "condisc/devices.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>

#include "condisc/errors.h"

namespace condisc {
namespace {

// Cumulative masses of every distribution in `policy`.
void CollectBreakpoints(const CorrelatedPolicy& policy,
                        std::vector<double>& out) {
  for (const Distribution& d : policy.table()) {
    double cumulative = 0.0;
    for (std::size_t k = 0; k + 1 < d.entries.size(); ++k) {
      cumulative += d.entries[k].second;
      out.push_back(cumulative);
    }
  }
}

// Player i's component of a_{-j} drawn from tau_{-j}(. | t_{-j}) at c.
int PunisherAction(const BayesianGame& game, const CorrelatedPolicy& tau,
                   int j, int i, const std::vector<int>& types, double c) {
  std::vector<int> others;
  for (int k = 0; k < game.num_players(); ++k) {
    if (k != j) others.push_back(types[k]);
  }
  const std::size_t key = game.type_space().Without(j).Encode(others);
  const std::size_t a = tau.at(key).Sample(c);
  return game.action_space().Without(j).Digit(a, i < j ? i : i - 1);
}

std::string PolicyDigest(const CorrelatedPolicy& policy) {
  std::string s = std::to_string(static_cast<int>(policy.scope())) + ":" +
                  std::to_string(policy.player()) + "[";
  char buf[64];
  for (const Distribution& d : policy.table()) {
    for (const auto& [k, m] : d.entries) {
      std::snprintf(buf, sizeof(buf), "%zu=%.17g,", k, m);
      s += buf;
    }
    s += ';';
  }
  return s + "]";
}

class FolkDevice : public Device {
 public:
  FolkDevice(int player, std::shared_ptr<const FolkPlan> plan,
             std::shared_ptr<std::vector<std::string>> expected, Json spec,
             bool discloses)
      : Device(player, std::move(spec)),
        plan_(std::move(plan)),
        expected_(std::move(expected)),
        discloses_(discloses) {
    CollectBreakpoints(plan_->mu, breakpoints_);
    for (const auto& tau : plan_->punishments) {
      CollectBreakpoints(tau, breakpoints_);
    }
  }

  const FolkPlan& plan() const { return *plan_; }
  const std::shared_ptr<const FolkPlan>& plan_ptr() const { return plan_; }
  const std::shared_ptr<std::vector<std::string>>& expected() const {
    return expected_;
  }

  std::vector<bool> Disclose(const std::vector<std::string>& fingerprints,
                             int) const override {
    std::vector<bool> bits(fingerprints.size(), false);
    if (!discloses_) return bits;
    for (std::size_t k = 0; k < bits.size(); ++k) {
      bits[k] = static_cast<int>(k) != player() &&
                fingerprints[k] == (*expected_)[k];
    }
    return bits;
  }

  int Respond(const std::vector<std::string>& fingerprints, double c,
              int own_type, const TypeLedger& ledger) const override {
    const BayesianGame& game = *plan_->game;
    const int n = game.num_players();
    const int i = player();
    int deviator = -1;
    for (int k = 0; k < n && deviator < 0; ++k) {
      if (k == i) continue;
      if (fingerprints[k] != (*expected_)[k] || !ledger.Knows(k)) deviator = k;
    }
    std::vector<int> types(n, 0);
    if (deviator < 0) {
      for (int k = 0; k < n; ++k) types[k] = k == i ? own_type : ledger.Get(k);
      const std::size_t t = game.type_space().Encode(types);
      return game.ActionOf(plan_->mu.at(t).Sample(c), i);
    }
    for (int k = 0; k < n; ++k) {
      if (k == deviator) continue;
      if (k != i && !ledger.Knows(k)) return plan_->default_actions[i];
      types[k] = k == i ? own_type : ledger.Get(k);
    }
    return PunisherAction(game, plan_->punishments[deviator], deviator, i,
                          types, c);
  }

  std::vector<double> Breakpoints() const override { return breakpoints_; }

 private:
  std::shared_ptr<const FolkPlan> plan_;
  std::shared_ptr<std::vector<std::string>> expected_;
  bool discloses_;
  std::vector<double> breakpoints_;
};

class ConstantDevice : public Device {
 public:
  ConstantDevice(int player, int action)
      : Device(player, Json{{"kind", "constant"},
                            {"player", player},
                            {"params", {{"action", action}}}}),
        action_(action) {}

  std::vector<bool> Disclose(const std::vector<std::string>& fingerprints,
                             int) const override {
    return std::vector<bool>(fingerprints.size(), false);
  }
  int Respond(const std::vector<std::string>&, double, int,
              const TypeLedger&) const override {
    return action_;
  }

 private:
  int action_;
};

class TypeMapDevice : public Device {
 public:
  TypeMapDevice(int player, std::vector<int> by_type, Json spec)
      : Device(player, std::move(spec)), by_type_(std::move(by_type)) {}

  std::vector<bool> Disclose(const std::vector<std::string>& fingerprints,
                             int) const override {
    return std::vector<bool>(fingerprints.size(), false);
  }
  int Respond(const std::vector<std::string>&, double, int own_type,
              const TypeLedger&) const override {
    return by_type_[own_type];
  }

 private:
  std::vector<int> by_type_;
};

class SignalAwareDevice : public Device {
 public:
  SignalAwareDevice(const BayesianGame& game, int player,
                    const CorrelatedPolicy& tau)
      : Device(player, Json{{"kind", "signal-aware-best-response"},
                            {"player", player},
                            {"params", {{"tau", PolicyDigest(tau)}}}}),
        game_(&game),
        tau_(tau) {
    CollectBreakpoints(tau_, breakpoints_);
  }

  std::vector<bool> Disclose(const std::vector<std::string>& fingerprints,
                             int) const override {
    return std::vector<bool>(fingerprints.size(), false);
  }

  int Respond(const std::vector<std::string>&, double c, int own_type,
              const TypeLedger&) const override {
    const BayesianGame& game = *game_;
    const int j = player();
    const ProductSpace minus_types = game.type_space().Without(j);
    std::vector<double> value(game.num_actions(j), 0.0);
    for (std::size_t t = 0; t < game.num_joint_types(); ++t) {
      if (game.TypeOf(t, j) != own_type || game.prior(t) <= 0.0) continue;
      const double q = game.Conditional(t, j);
      const std::size_t a_minus =
          tau_.at(game.type_space().Drop(t, j)).Sample(c);
      for (int a = 0; a < game.num_actions(j); ++a) {
        value[a] +=
            q * game.Utility(t, game.action_space().Insert(a_minus, j, a), j);
      }
    }
    return static_cast<int>(std::max_element(value.begin(), value.end()) -
                            value.begin());
  }

  std::vector<double> Breakpoints() const override { return breakpoints_; }

 private:
  const BayesianGame* game_;
  CorrelatedPolicy tau_;
  std::vector<double> breakpoints_;
};

const FolkDevice* AsFolk(const DeviceRef& d) {
  return dynamic_cast<const FolkDevice*>(d.get());
}

// Calls fn(c, weight) over the c-intervals on which every device in the
// profile is constant, or over sampled trials.
template <typename Fn>
void ForEachC(const DeviceProfile& profile, const VerifyOptions& options,
              Fn&& fn) {
  if (options.trials > 0) {
    const RandomizationSignal signal(options.seed);
    const double w = 1.0 / static_cast<double>(options.trials);
    for (std::uint64_t k = 0; k < options.trials; ++k) fn(signal.DrawC(k), w);
    return;
  }
  std::vector<double> points{0.0, 1.0};
  for (const DeviceRef& d : profile) {
    for (double b : d->Breakpoints()) {
      if (b > 0.0 && b < 1.0) points.push_back(b);
    }
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  for (std::size_t k = 0; k + 1 < points.size(); ++k) {
    const double len = points[k + 1] - points[k];
    if (len <= 0.0) continue;
    fn(points[k] + len / 2, len);
  }
}

}  // namespace

bool TypeLedger::KnowsAll() const {
  return std::all_of(known_.begin(), known_.end(),
                     [](const auto& k) { return k.has_value(); });
}

int TypeLedger::Get(int k) const {
  if (k < 0 || k >= static_cast<int>(known_.size()) || !known_[k]) {
    throw InformationViolation("player " + std::to_string(reader_) +
                               " read the undisclosed type of player " +
                               std::to_string(k));
  }
  return *known_[k];
}

std::string Fingerprint(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

Device::Device(int player, Json spec)
    : player_(player),
      spec_(std::move(spec)),
      fingerprint_(Fingerprint(spec_.dump())) {
  spec_["fingerprint"] = fingerprint_;
}

DeviceProfile BuildFolkDevices(const BayesianGame& game,
                               const CorrelatedPolicy& mu,
                               std::vector<CorrelatedPolicy> punishments,
                               std::vector<int> default_actions) {
  const int n = game.num_players();
  if (mu.scope() != PolicyScope::kFullProfile) {
    throw ScopeError("folk devices need a full-profile target policy");
  }
  if (n > 1 && static_cast<int>(punishments.size()) != n) {
    throw TotalityError("folk devices need one punishment per player");
  }
  for (int j = 0; j < static_cast<int>(punishments.size()); ++j) {
    if (punishments[j].scope() != PolicyScope::kMinusPlayer ||
        punishments[j].player() != j) {
      throw ScopeError("punishment " + std::to_string(j) +
                       " must be a tau_{-j} policy");
    }
  }
  if (default_actions.empty()) default_actions.assign(n, 0);
  if (static_cast<int>(default_actions.size()) != n) {
    throw TotalityError("one default action per player");
  }
  auto plan = std::make_shared<FolkPlan>(
      FolkPlan{&game, mu, std::move(punishments), std::move(default_actions)});
  std::string digest = PolicyDigest(plan->mu);
  for (const auto& tau : plan->punishments) digest += PolicyDigest(tau);
  for (int a : plan->default_actions) digest += std::to_string(a) + ",";
  const std::string plan_id = Fingerprint(digest);

  auto expected = std::make_shared<std::vector<std::string>>();
  DeviceProfile profile;
  for (int i = 0; i < n; ++i) {
    auto d = std::make_shared<FolkDevice>(
        i, plan, expected,
        Json{{"kind", "folk"}, {"player", i}, {"params", {{"plan", plan_id}}}},
        true);
    expected->push_back(d->fingerprint());
    profile.push_back(std::move(d));
  }
  return profile;
}

namespace {

std::vector<CorrelatedPolicy> MinimaxFamily(const BayesianGame& game,
                                            const PayoffVector& x,
                                            double tol) {
  std::vector<CorrelatedPolicy> punishments;
  if (game.num_players() > 1) {
    for (int j = 0; j < game.num_players(); ++j) {
      MinimaxResult m = MinimaxPolicy(game, j, x);
      if (m.value > tol) {
        throw DomainError("target payoff is not INTIR for player " +
                          std::to_string(j));
      }
      punishments.push_back(std::move(m.tau));
    }
  }
  return punishments;
}

}  // namespace

DeviceProfile BuildFolkDevicesForTarget(const BayesianGame& game,
                                        const PayoffVector& x, double tol) {
  const SolverReport feasible = CheckFeasible(game, x, tol);
  if (!feasible.verdict || !feasible.witness) {
    throw DomainError("target payoff is not feasible");
  }
  return BuildFolkDevices(game, *feasible.witness,
                          MinimaxFamily(game, x, tol));
}

DeviceProfile BuildFolkDevicesForPolicy(const BayesianGame& game,
                                        const CorrelatedPolicy& mu,
                                        double tol) {
  return BuildFolkDevices(game, mu,
                          MinimaxFamily(game, InducedPayoff(game, mu), tol));
}

const FolkPlan* FolkPlanOf(const DeviceProfile& profile) {
  for (const DeviceRef& d : profile) {
    if (const FolkDevice* f = AsFolk(d)) return &f->plan();
  }
  return nullptr;
}

DeviceRef FreshIdentityFolk(const DeviceProfile& profile, int player,
                            const std::string& salt) {
  const FolkDevice* f = AsFolk(profile.at(player));
  if (f == nullptr) throw DomainError("not a folk device");
  Json spec = f->spec();
  spec.erase("fingerprint");
  spec["params"]["salt"] = salt;
  return std::make_shared<FolkDevice>(player, f->plan_ptr(), f->expected(),
                                      std::move(spec), true);
}

DeviceRef NonDisclosingFolk(const DeviceProfile& profile, int player) {
  const FolkDevice* f = AsFolk(profile.at(player));
  if (f == nullptr) throw DomainError("not a folk device");
  Json spec = f->spec();
  spec.erase("fingerprint");
  spec["kind"] = "folk-silent";
  return std::make_shared<FolkDevice>(player, f->plan_ptr(), f->expected(),
                                      std::move(spec), false);
}

DeviceRef ConstantActionDevice(int player, int action) {
  return std::make_shared<ConstantDevice>(player, action);
}

DeviceRef BestResponseDevice(const BayesianGame& game, int player,
                             const CorrelatedPolicy& tau) {
  std::vector<int> by_type;
  for (int t = 0; t < game.num_types(player); ++t) {
    by_type.push_back(game.marginal(player, t) > 0.0
                          ? BestResponseAction(game, player, t, tau)
                          : 0);
  }
  Json spec{{"kind", "best-response"},
            {"player", player},
            {"params", {{"actions", by_type}}}};
  return std::make_shared<TypeMapDevice>(player, std::move(by_type),
                                         std::move(spec));
}

DeviceRef SignalAwareBestResponseDevice(const BayesianGame& game, int player,
                                        const CorrelatedPolicy& tau) {
  return std::make_shared<SignalAwareDevice>(game, player, tau);
}

CommitmentOutcome EvaluateCommitmentGame(const BayesianGame& game,
                                         const DeviceProfile& profile,
                                         std::size_t t, double c,
                                         const std::vector<int>& order) {
  const int n = game.num_players();
  if (static_cast<int>(profile.size()) != n) {
    throw TotalityError("one device per player required");
  }
  std::vector<int> seq = order;
  if (seq.empty()) {
    for (int i = 0; i < n; ++i) seq.push_back(i);
  }
  std::vector<std::string> fingerprints;
  for (const DeviceRef& d : profile) fingerprints.push_back(d->fingerprint());
  CommitmentOutcome out;
  out.t = t;
  out.c = c;
  out.disclosure.assign(n, std::vector<bool>(n, false));
  for (int i : seq) {
    std::vector<bool> bits =
        profile[i]->Disclose(fingerprints, game.TypeOf(t, i));
    if (static_cast<int>(bits.size()) != n) {
      throw DomainError("disclosure vector has the wrong length");
    }
    bits[i] = false;
    out.disclosure[i] = std::move(bits);
  }
  out.actions.assign(n, -1);
  for (int i : seq) {
    std::vector<std::optional<int>> known(n);
    for (int k = 0; k < n; ++k) {
      if (k == i || out.disclosure[k][i]) known[k] = game.TypeOf(t, k);
    }
    const int a = profile[i]->Respond(fingerprints, c, game.TypeOf(t, i),
                                      TypeLedger(i, std::move(known)));
    if (a < 0 || a >= game.num_actions(i)) {
      throw DomainError("device returned an action out of range");
    }
    out.actions[i] = a;
  }
  out.joint_action = game.action_space().Encode(out.actions);
  out.payoffs = ExPostPayoffs(game, t, out.joint_action);
  return out;
}

CommitmentOutcome EvaluateCommitmentGame(const BayesianGame& game,
                                         const DeviceProfile& profile,
                                         std::size_t t,
                                         const RandomizationSignal& signal,
                                         std::uint64_t trial) {
  return EvaluateCommitmentGame(game, profile, t, signal.DrawC(trial));
}

Json OutcomeToJson(const BayesianGame& game, const CommitmentOutcome& o) {
  Json disclosure = Json::array();
  for (const auto& row : o.disclosure) {
    Json r = Json::array();
    for (bool b : row) r.push_back(b ? 1 : 0);
    disclosure.push_back(r);
  }
  return Json{{"types", game.TypeKey(o.t)},
              {"c", o.c},
              {"disclosure", disclosure},
              {"actions", game.ActionKey(o.joint_action)},
              {"payoffs", o.payoffs}};
}

std::vector<Deviation> DeviationLibrary(const BayesianGame& game,
                                        const DeviceProfile& profile,
                                        int player) {
  std::vector<Deviation> lib;
  const FolkPlan* plan = FolkPlanOf(profile);
  if (plan != nullptr && !plan->punishments.empty()) {
    lib.push_back({"best-response",
                   BestResponseDevice(game, player,
                                      plan->punishments[player])});
  }
  for (int a = 0; a < game.num_actions(player); ++a) {
    lib.push_back({"constant:" + game.action_labels(player)[a],
                   ConstantActionDevice(player, a)});
  }
  if (AsFolk(profile[player]) != nullptr) {
    lib.push_back({"fresh-identity-mimic",
                   FreshIdentityFolk(profile, player, "mimic")});
    lib.push_back({"silent-folk", NonDisclosingFolk(profile, player)});
  }
  return lib;
}

BneReport VerifyBNE(const BayesianGame& game, const DeviceProfile& profile,
                    const VerifyOptions& options) {
  std::vector<std::vector<Deviation>> library;
  for (int j = 0; j < game.num_players(); ++j) {
    library.push_back(DeviationLibrary(game, profile, j));
  }
  return VerifyBNE(game, profile, library, options);
}

BneReport VerifyBNE(const BayesianGame& game, const DeviceProfile& profile,
                    const std::vector<std::vector<Deviation>>& library,
                    const VerifyOptions& options) {
  BneReport report;
  report.tol = options.tol;
  report.mode = options.trials > 0 ? "monte-carlo" : "exact";
  report.verdict = true;
  const FolkPlan* plan = FolkPlanOf(profile);
  const int n = game.num_players();
  const double mc = options.trials > 0 ? static_cast<double>(options.trials)
                                       : 0.0;

  // Mean and SE of the ex interim gain of `dev` for (j, t_j).
  auto gain_of = [&](int j, int t_j, const DeviceRef& dev, double& se) {
    DeviceProfile alt = profile;
    alt[j] = dev;
    DeviceProfile both = profile;
    both.push_back(dev);
    double sum = 0.0, sum2 = 0.0;
    ForEachC(both, options, [&](double c, double w) {
      double g = 0.0;
      for (std::size_t t = 0; t < game.num_joint_types(); ++t) {
        if (game.TypeOf(t, j) != t_j || game.prior(t) <= 0.0) continue;
        const double q = game.Conditional(t, j);
        const double dev_u =
            EvaluateCommitmentGame(game, alt, t, c).payoffs[j];
        const double eq_u =
            EvaluateCommitmentGame(game, profile, t, c).payoffs[j];
        g += q * (dev_u - eq_u);
      }
      sum += w * g;
      sum2 += w * g * g;
    });
    se = 0.0;
    if (mc > 1) {
      const double var = std::max(0.0, sum2 - sum * sum) * mc / (mc - 1);
      se = std::sqrt(var / mc);
    }
    return sum;
  };

  for (int j = 0; j < n; ++j) {
    for (int t_j = 0; t_j < game.num_types(j); ++t_j) {
      if (game.marginal(j, t_j) <= 0.0) continue;
      TypeGain row;
      row.player = j;
      row.type = t_j;
      double eq = 0.0;
      ForEachC(profile, options, [&](double c, double w) {
        for (std::size_t t = 0; t < game.num_joint_types(); ++t) {
          if (game.TypeOf(t, j) != t_j || game.prior(t) <= 0.0) continue;
          eq += w * game.Conditional(t, j) *
                EvaluateCommitmentGame(game, profile, t, c).payoffs[j];
        }
      });
      row.equilibrium_payoff = eq;
      row.max_gain = -std::numeric_limits<double>::infinity();
      for (const Deviation& dev : library[j]) {
        double se = 0.0;
        const double g = gain_of(j, t_j, dev.device, se);
        ++report.deviations_checked;
        if (g > row.max_gain) {
          row.max_gain = g;
          row.se = se;
          row.best_deviation = dev.name;
        }
        if (g > options.tol + 3 * se) report.verdict = false;
      }
      if (library[j].empty()) row.max_gain = 0.0;
      if (plan != nullptr && !plan->punishments.empty()) {
        double se = 0.0;
        row.signal_aware_gain = gain_of(
            j, t_j,
            SignalAwareBestResponseDevice(game, j, plan->punishments[j]), se);
        report.max_signal_aware_gain =
            std::max(report.max_signal_aware_gain, row.signal_aware_gain);
      }
      report.max_gain = std::max(report.max_gain, row.max_gain);
      report.gains.push_back(row);
    }
  }
  return report;
}

CorrelatedPolicy InducedPolicy(const BayesianGame& game,
                               const DeviceProfile& profile,
                               const VerifyOptions& options) {
  std::vector<Distribution> table(game.num_joint_types());
  for (std::size_t t = 0; t < game.num_joint_types(); ++t) {
    std::map<std::size_t, double> mass;
    ForEachC(profile, options, [&](double c, double w) {
      mass[EvaluateCommitmentGame(game, profile, t, c).joint_action] += w;
    });
    double total = 0.0;
    for (const auto& [a, m] : mass) total += m;
    for (const auto& [a, m] : mass) {
      if (m > 0.0) table[t].entries.emplace_back(a, m / total);
    }
  }
  return CorrelatedPolicy::FullProfile(game, std::move(table));
}

Prop1Report VerifyProp1(const BayesianGame& game, const DeviceProfile& profile,
                        const VerifyOptions& options) {
  Prop1Report report;
  const CorrelatedPolicy induced = InducedPolicy(game, profile, options);
  report.x = InducedPayoff(game, induced);
  const double tol = std::max(options.tol, kDefaultPayoffTolerance);
  report.feasible = CheckFeasible(game, report.x, tol);
  report.intir = CheckINTIR(game, report.x, tol);
  report.verdict = report.feasible.verdict && report.intir.verdict;
  return report;
}

Json BneReportToJson(const BayesianGame& game, const BneReport& report) {
  Json rows = Json::array();
  for (const TypeGain& g : report.gains) {
    rows.push_back({{"player", g.player},
                    {"type", game.type_labels(g.player)[g.type]},
                    {"equilibrium_payoff", g.equilibrium_payoff},
                    {"max_gain", g.max_gain},
                    {"se", g.se},
                    {"best_deviation", g.best_deviation},
                    {"signal_aware_gain", g.signal_aware_gain}});
  }
  return Json{{"verdict", report.verdict},
              {"tol", report.tol},
              {"mode", report.mode},
              {"deviations_checked", report.deviations_checked},
              {"max_gain", report.max_gain},
              {"max_signal_aware_gain", report.max_signal_aware_gain},
              {"gains", rows}};
}

}  // namespace condisc
