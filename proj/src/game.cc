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

#include "condisc/game.h"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>
#include <string>

#include "condisc/errors.h"

namespace condisc {

ProductSpace::ProductSpace(std::vector<int> radix) : radix_(std::move(radix)) {
  stride_.assign(radix_.size(), 1);
  size_ = 1;
  for (int i = static_cast<int>(radix_.size()) - 1; i >= 0; --i) {
    if (radix_[i] <= 0) throw DomainError("empty coordinate in product space");
    stride_[i] = size_;
    size_ *= static_cast<std::size_t>(radix_[i]);
  }
}

std::size_t ProductSpace::Encode(std::span<const int> digits) const {
  if (digits.size() != radix_.size()) {
    throw DomainError("profile has wrong number of coordinates");
  }
  std::size_t index = 0;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (digits[i] < 0 || digits[i] >= radix_[i]) {
      throw DomainError("profile coordinate out of range");
    }
    index += static_cast<std::size_t>(digits[i]) * stride_[i];
  }
  return index;
}

std::vector<int> ProductSpace::Decode(std::size_t index) const {
  std::vector<int> digits(radix_.size());
  for (int i = 0; i < dims(); ++i) digits[i] = Digit(index, i);
  return digits;
}

std::size_t ProductSpace::Drop(std::size_t index, int i) const {
  const std::size_t high = index / (stride_[i] * radix_[i]);
  const std::size_t low = index % stride_[i];
  return high * stride_[i] + low;
}

std::size_t ProductSpace::Insert(std::size_t sub_index, int i,
                                 int digit) const {
  const std::size_t high = sub_index / stride_[i];
  const std::size_t low = sub_index % stride_[i];
  return (high * radix_[i] + static_cast<std::size_t>(digit)) * stride_[i] +
         low;
}

ProductSpace ProductSpace::Without(int i) const {
  std::vector<int> radix;
  for (int k = 0; k < dims(); ++k) {
    if (k != i) radix.push_back(radix_[k]);
  }
  return ProductSpace(std::move(radix));
}

struct BayesianGame::BoundCache {
  std::once_flag once;
  double value = 0.0;
};

BayesianGame::BayesianGame(std::vector<std::vector<std::string>> types,
                           std::vector<std::vector<std::string>> actions,
                           std::vector<double> prior,
                           std::vector<double> utility)
    : types_(std::move(types)),
      actions_(std::move(actions)),
      prior_(std::move(prior)),
      utility_table_(std::move(utility)) {
  Init();
  const std::size_t expected =
      num_joint_types() * num_joint_actions() * num_players();
  if (utility_table_.size() != expected) {
    throw TotalityError("utility table has " +
                        std::to_string(utility_table_.size()) +
                        " entries, expected " + std::to_string(expected));
  }
  for (double u : utility_table_) {
    if (!std::isfinite(u)) throw DomainError("non-finite utility");
  }
}

BayesianGame::BayesianGame(std::vector<std::vector<std::string>> types,
                           std::vector<std::vector<std::string>> actions,
                           std::vector<double> prior, UtilityFn utility)
    : types_(std::move(types)),
      actions_(std::move(actions)),
      prior_(std::move(prior)),
      utility_fn_(std::move(utility)) {
  if (!utility_fn_) throw TotalityError("missing utility function");
  Init();
}

void BayesianGame::Init() {
  if (types_.empty() || types_.size() != actions_.size()) {
    throw DomainError("types and actions must be given for every player");
  }
  std::vector<int> type_radix, action_radix;
  for (std::size_t i = 0; i < types_.size(); ++i) {
    if (types_[i].empty()) throw DomainError("player without types");
    if (actions_[i].empty()) throw DomainError("player without actions");
    type_radix.push_back(static_cast<int>(types_[i].size()));
    action_radix.push_back(static_cast<int>(actions_[i].size()));
  }
  type_space_ = ProductSpace(std::move(type_radix));
  action_space_ = ProductSpace(std::move(action_radix));
  if (prior_.size() != type_space_.size()) {
    throw TotalityError("prior has " + std::to_string(prior_.size()) +
                        " entries, expected " +
                        std::to_string(type_space_.size()));
  }
  double total = 0.0;
  for (double q : prior_) {
    if (!(q >= 0.0) || !std::isfinite(q)) {
      throw DomainError("prior masses must be finite and nonnegative");
    }
    total += q;
  }
  if (std::abs(total - 1.0) > kProbabilityTolerance) {
    throw DomainError("prior sums to " + std::to_string(total));
  }
  marginals_.assign(types_.size(), {});
  for (int i = 0; i < num_players(); ++i) {
    marginals_[i].assign(types_[i].size(), 0.0);
  }
  for (std::size_t t = 0; t < prior_.size(); ++t) {
    for (int i = 0; i < num_players(); ++i) {
      marginals_[i][TypeOf(t, i)] += prior_[t];
    }
  }
  bound_cache_ = std::make_shared<BoundCache>();
}

double BayesianGame::Conditional(std::size_t t, int i) const {
  const double m = marginals_[i][TypeOf(t, i)];
  if (m <= 0.0) {
    throw DomainError("type " + types_[i][TypeOf(t, i)] + " of player " +
                      std::to_string(i) + " has zero marginal probability");
  }
  return prior_[t] / m;
}

double BayesianGame::Utility(std::size_t t, std::size_t a, int player) const {
  if (!utility_table_.empty()) {
    return utility_table_[(t * num_joint_actions() + a) * num_players() +
                          player];
  }
  return utility_fn_(t, a, player);
}

double BayesianGame::utility_bound() const {
  std::call_once(bound_cache_->once,
                 [this] { bound_cache_->value = RecomputeUtilityBound(); });
  return bound_cache_->value;
}

double BayesianGame::RecomputeUtilityBound() const {
  double bound = 0.0;
  for (std::size_t t = 0; t < num_joint_types(); ++t) {
    for (std::size_t a = 0; a < num_joint_actions(); ++a) {
      for (int i = 0; i < num_players(); ++i) {
        bound = std::max(bound, std::abs(Utility(t, a, i)));
      }
    }
  }
  return bound;
}

std::string BayesianGame::TypeKey(std::size_t t) const {
  std::string key;
  for (int i = 0; i < num_players(); ++i) {
    if (i > 0) key += '|';
    key += types_[i][TypeOf(t, i)];
  }
  return key;
}

std::string BayesianGame::ActionKey(std::size_t a) const {
  std::string key;
  for (int i = 0; i < num_players(); ++i) {
    if (i > 0) key += '|';
    key += actions_[i][ActionOf(a, i)];
  }
  return key;
}

Distribution Distribution::FromDense(std::span<const double> masses,
                                     double drop_below) {
  Distribution d;
  for (std::size_t k = 0; k < masses.size(); ++k) {
    if (masses[k] > drop_below) d.entries.emplace_back(k, masses[k]);
  }
  return d;
}

double Distribution::Mass(std::size_t index) const {
  auto it = std::lower_bound(
      entries.begin(), entries.end(), index,
      [](const auto& e, std::size_t k) { return e.first < k; });
  return (it != entries.end() && it->first == index) ? it->second : 0.0;
}

double Distribution::Total() const {
  double total = 0.0;
  for (const auto& [k, m] : entries) total += m;
  return total;
}

std::size_t Distribution::Sample(double c) const {
  double cumulative = 0.0;
  for (const auto& [k, m] : entries) {
    cumulative += m;
    if (c < cumulative) return k;
  }
  // Rounding left c above the accumulated mass.
  return entries.back().first;
}

void CorrelatedPolicy::Validate(const std::vector<Distribution>& table,
                                std::size_t domain, std::size_t range) {
  if (table.size() != domain) {
    throw TotalityError("policy table has " + std::to_string(table.size()) +
                        " entries, expected " + std::to_string(domain));
  }
  for (const Distribution& d : table) {
    if (d.entries.empty()) throw TotalityError("empty policy distribution");
    double total = 0.0;
    std::size_t previous = 0;
    bool first = true;
    for (const auto& [k, m] : d.entries) {
      if (k >= range) throw DomainError("policy entry is not a valid action");
      if (!first && k <= previous) {
        throw DomainError("policy entries must be strictly increasing");
      }
      if (!(m >= 0.0)) throw DomainError("negative policy mass");
      total += m;
      previous = k;
      first = false;
    }
    if (std::abs(total - 1.0) > kProbabilityTolerance) {
      throw DomainError("policy distribution sums to " + std::to_string(total));
    }
  }
}

CorrelatedPolicy CorrelatedPolicy::FullProfile(const BayesianGame& game,
                                               std::vector<Distribution> table) {
  Validate(table, game.num_joint_types(), game.num_joint_actions());
  return CorrelatedPolicy(PolicyScope::kFullProfile, -1, std::move(table));
}

CorrelatedPolicy CorrelatedPolicy::MinusPlayer(const BayesianGame& game,
                                               int player,
                                               std::vector<Distribution> table) {
  if (player < 0 || player >= game.num_players()) {
    throw DomainError("invalid player for MinusPlayer scope");
  }
  Validate(table, game.type_space().Without(player).size(),
           game.action_space().Without(player).size());
  return CorrelatedPolicy(PolicyScope::kMinusPlayer, player, std::move(table));
}

CorrelatedPolicy CorrelatedPolicy::ReportedType(const BayesianGame& game,
                                                int player,
                                                std::vector<Distribution> table) {
  if (player < 0 || player >= game.num_players()) {
    throw DomainError("invalid player for ReportedType scope");
  }
  Validate(table, game.num_joint_types(), game.num_joint_actions());
  return CorrelatedPolicy(PolicyScope::kReportedType, player, std::move(table));
}

CorrelatedPolicy CorrelatedPolicy::Deterministic(
    const BayesianGame& game, std::span<const std::size_t> profile) {
  std::vector<Distribution> table;
  table.reserve(profile.size());
  for (std::size_t a : profile) table.push_back(Distribution::PointMass(a));
  return FullProfile(game, std::move(table));
}

const Distribution& CorrelatedPolicy::at(std::size_t key) const {
  if (key >= table_.size()) throw TotalityError("missing policy entry");
  return table_[key];
}

namespace {

void RequireFullProfile(const CorrelatedPolicy& policy) {
  if (policy.scope() == PolicyScope::kMinusPlayer) {
    throw ScopeError("operation requires a policy conditioned on full profiles");
  }
}

double PolicyUtility(const BayesianGame& game, const Distribution& d,
                     std::size_t t, int j) {
  double value = 0.0;
  for (const auto& [a, m] : d.entries) value += m * game.Utility(t, a, j);
  return value;
}

}  // namespace

double ExInterimPayoff(const BayesianGame& game, const CorrelatedPolicy& policy,
                       int j, int t_j) {
  return MisreportPayoff(game, policy, j, t_j, t_j);
}

double MisreportPayoff(const BayesianGame& game, const CorrelatedPolicy& policy,
                       int j, int t_j, int s_j) {
  RequireFullProfile(policy);
  if (j < 0 || j >= game.num_players() || t_j < 0 ||
      t_j >= game.num_types(j) || s_j < 0 || s_j >= game.num_types(j)) {
    throw DomainError("invalid player or type");
  }
  const double marginal = game.marginal(j, t_j);
  if (marginal <= 0.0) {
    throw DomainError("type " + game.type_labels(j)[t_j] + " of player " +
                      std::to_string(j) + " has zero marginal probability");
  }
  const ProductSpace& types = game.type_space();
  const ProductSpace others = types.Without(j);
  double value = 0.0;
  for (std::size_t rest = 0; rest < others.size(); ++rest) {
    const std::size_t t = types.Insert(rest, j, t_j);
    const double q = game.prior(t);
    if (q == 0.0) continue;
    const std::size_t reported = types.Insert(rest, j, s_j);
    value += q * PolicyUtility(game, policy.at(reported), t, j);
  }
  return value / marginal;
}

PayoffVector InducedPayoff(const BayesianGame& game,
                           const CorrelatedPolicy& policy) {
  RequireFullProfile(policy);
  PayoffVector x;
  x.values.resize(game.num_players());
  for (int j = 0; j < game.num_players(); ++j) {
    x.values[j].assign(game.num_types(j), 0.0);
  }
  for (std::size_t t = 0; t < game.num_joint_types(); ++t) {
    const double q = game.prior(t);
    if (q == 0.0) continue;
    for (int j = 0; j < game.num_players(); ++j) {
      const int t_j = game.TypeOf(t, j);
      x.values[j][t_j] +=
          q * PolicyUtility(game, policy.at(t), t, j) / game.marginal(j, t_j);
    }
  }
  return x;
}

std::vector<double> ExpectedUtilities(const BayesianGame& game,
                                      const CorrelatedPolicy& policy,
                                      std::size_t t) {
  RequireFullProfile(policy);
  std::vector<double> u(game.num_players(), 0.0);
  for (const auto& [a, m] : policy.at(t).entries) {
    for (int i = 0; i < game.num_players(); ++i) {
      u[i] += m * game.Utility(t, a, i);
    }
  }
  return u;
}

DeterministicProfile DesugarAt(const CorrelatedPolicy& policy,
                               const BayesianGame& game, double c) {
  if (policy.scope() != PolicyScope::kFullProfile) {
    throw ScopeError("desugaring requires a full-profile policy");
  }
  DeterministicProfile profile(game.num_joint_types());
  for (std::size_t t = 0; t < profile.size(); ++t) {
    profile[t] = policy.at(t).Sample(c);
  }
  return profile;
}

DeterministicProfile DesugarPolicy(const CorrelatedPolicy& policy,
                                   const BayesianGame& game,
                                   const RandomizationSignal& signal,
                                   std::uint64_t trial) {
  return DesugarAt(policy, game, signal.DrawC(trial));
}

std::vector<double> ExPostPayoffs(const BayesianGame& game, std::size_t t,
                                  std::size_t a) {
  if (t >= game.num_joint_types() || a >= game.num_joint_actions()) {
    throw DomainError("type or action profile index out of range");
  }
  std::vector<double> u(game.num_players());
  for (int i = 0; i < game.num_players(); ++i) u[i] = game.Utility(t, a, i);
  return u;
}

}  // namespace condisc
