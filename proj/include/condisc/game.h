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

#ifndef CONDISC_GAME_H_
#define CONDISC_GAME_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "condisc/signal.h"

namespace condisc {

inline constexpr double kProbabilityTolerance = 1e-12;
inline constexpr double kDefaultPayoffTolerance = 1e-9;

// Mixed-radix indexing of a product space. Coordinate 0 is the most
// significant digit, so increasing indices enumerate profiles in
// lexicographic order.
class ProductSpace {
 public:
  ProductSpace() = default;
  explicit ProductSpace(std::vector<int> radix);

  std::size_t size() const { return size_; }
  int dims() const { return static_cast<int>(radix_.size()); }
  int radix(int i) const { return radix_[i]; }

  std::size_t Encode(std::span<const int> digits) const;
  std::vector<int> Decode(std::size_t index) const;
  int Digit(std::size_t index, int i) const {
    return static_cast<int>((index / stride_[i]) % radix_[i]);
  }
  std::size_t Replace(std::size_t index, int i, int digit) const {
    return index + (static_cast<std::size_t>(digit) -
                    static_cast<std::size_t>(Digit(index, i))) *
                       stride_[i];
  }

  // Index of the profile with coordinate i removed, in the space
  // Without(i).
  std::size_t Drop(std::size_t index, int i) const;
  // Inverse of Drop: inserts `digit` at coordinate i.
  std::size_t Insert(std::size_t sub_index, int i, int digit) const;
  ProductSpace Without(int i) const;

 private:
  std::vector<int> radix_;
  std::vector<std::size_t> stride_;
  std::size_t size_ = 1;
};

// u(t, a, player) for function-backed games.
using UtilityFn = std::function<double(std::size_t t, std::size_t a, int player)>;

// Finite Bayesian game: ordered type and action lists per player, a joint
// prior over type profiles and a total utility table. Immutable after
// construction.
class BayesianGame {
 public:
  // Table-backed game. `utility` is laid out as [t][a][player].
  BayesianGame(std::vector<std::vector<std::string>> types,
               std::vector<std::vector<std::string>> actions,
               std::vector<double> prior, std::vector<double> utility);
  // Function-backed game for spaces too large to tabulate.
  BayesianGame(std::vector<std::vector<std::string>> types,
               std::vector<std::vector<std::string>> actions,
               std::vector<double> prior, UtilityFn utility);

  int num_players() const { return static_cast<int>(types_.size()); }
  int num_types(int i) const { return static_cast<int>(types_[i].size()); }
  int num_actions(int i) const { return static_cast<int>(actions_[i].size()); }
  const std::vector<std::string>& type_labels(int i) const { return types_[i]; }
  const std::vector<std::string>& action_labels(int i) const {
    return actions_[i];
  }
  const ProductSpace& type_space() const { return type_space_; }
  const ProductSpace& action_space() const { return action_space_; }
  std::size_t num_joint_types() const { return type_space_.size(); }
  std::size_t num_joint_actions() const { return action_space_.size(); }

  double prior(std::size_t t) const { return prior_[t]; }
  const std::vector<double>& prior() const { return prior_; }
  double marginal(int i, int t_i) const { return marginals_[i][t_i]; }
  // q(t_{-i} | t_i); throws DomainError when t_i has zero marginal.
  double Conditional(std::size_t t, int i) const;

  double Utility(std::size_t t, std::size_t a, int player) const;
  bool tabulated() const { return !utility_table_.empty(); }

  // Cached ū = max |u_i(t, a)| over everything.
  double utility_bound() const;
  // Exhaustive recomputation of ū, independent of the cache.
  double RecomputeUtilityBound() const;

  int TypeOf(std::size_t t, int i) const { return type_space_.Digit(t, i); }
  int ActionOf(std::size_t a, int i) const { return action_space_.Digit(a, i); }

  std::string TypeKey(std::size_t t) const;
  std::string ActionKey(std::size_t a) const;

 private:
  void Init();

  std::vector<std::vector<std::string>> types_;
  std::vector<std::vector<std::string>> actions_;
  std::vector<double> prior_;
  std::vector<std::vector<double>> marginals_;
  std::vector<double> utility_table_;
  UtilityFn utility_fn_;
  ProductSpace type_space_;
  ProductSpace action_space_;
  struct BoundCache;
  std::shared_ptr<BoundCache> bound_cache_;
};

// Sparse distribution over a finite index set. Entries are sorted by index
// and carry strictly positive mass.
struct Distribution {
  std::vector<std::pair<std::size_t, double>> entries;

  static Distribution PointMass(std::size_t index) {
    return Distribution{{{index, 1.0}}};
  }
  // Drops nonpositive masses, sorts, merges duplicates.
  static Distribution FromDense(std::span<const double> masses,
                                double drop_below = 0.0);
  double Mass(std::size_t index) const;
  double Total() const;
  // Inverse-CDF draw with c in [0, 1), entries in ascending index order.
  std::size_t Sample(double c) const;
};

enum class PolicyScope { kFullProfile, kMinusPlayer, kReportedType };

// mu(. | conditioning key). For kFullProfile and kReportedType the key is a
// joint type index and entries are joint action indices; for
// kMinusPlayer(j) the key indexes t_{-j} in type_space().Without(j) and
// entries index a_{-j} in action_space().Without(j).
class CorrelatedPolicy {
 public:
  static CorrelatedPolicy FullProfile(const BayesianGame& game,
                                      std::vector<Distribution> table);
  static CorrelatedPolicy MinusPlayer(const BayesianGame& game, int player,
                                      std::vector<Distribution> table);
  // Same table as a full-profile policy, read as mu(. | s_j, t_{-j}).
  static CorrelatedPolicy ReportedType(const BayesianGame& game, int player,
                                       std::vector<Distribution> table);
  // Point mass on profile[t] for every t.
  static CorrelatedPolicy Deterministic(const BayesianGame& game,
                                        std::span<const std::size_t> profile);

  PolicyScope scope() const { return scope_; }
  int player() const { return player_; }
  std::size_t size() const { return table_.size(); }
  const Distribution& at(std::size_t key) const;
  const std::vector<Distribution>& table() const { return table_; }

 private:
  CorrelatedPolicy(PolicyScope scope, int player,
                   std::vector<Distribution> table)
      : scope_(scope), player_(player), table_(std::move(table)) {}
  static void Validate(const std::vector<Distribution>& table,
                       std::size_t domain, std::size_t range);

  PolicyScope scope_;
  int player_ = -1;
  std::vector<Distribution> table_;
};

// x_j(t_j) for every player and type.
struct PayoffVector {
  std::vector<std::vector<double>> values;

  double at(int j, int t_j) const { return values[j][t_j]; }
};

// Realized target action profile mu^c(t): one joint action per joint type.
using DeterministicProfile = std::vector<std::size_t>;

// E_{t_{-j} ~ q(.|t_j)} u_j(t, mu).
double ExInterimPayoff(const BayesianGame& game, const CorrelatedPolicy& policy,
                       int j, int t_j);
// E_{t_{-j} ~ q(.|t_j)} u_j((t_j, t_{-j}), mu(. | s_j, t_{-j})).
double MisreportPayoff(const BayesianGame& game, const CorrelatedPolicy& policy,
                       int j, int t_j, int s_j);
// Ex interim payoffs of every (j, t_j); zero-marginal types get 0.
PayoffVector InducedPayoff(const BayesianGame& game,
                           const CorrelatedPolicy& policy);
// u_i(t, mu(.|t)) for all i.
std::vector<double> ExpectedUtilities(const BayesianGame& game,
                                      const CorrelatedPolicy& policy,
                                      std::size_t t);

DeterministicProfile DesugarPolicy(const CorrelatedPolicy& policy,
                                   const BayesianGame& game,
                                   const RandomizationSignal& signal,
                                   std::uint64_t trial);
// Same, with the correlation value supplied directly.
DeterministicProfile DesugarAt(const CorrelatedPolicy& policy,
                               const BayesianGame& game, double c);

std::vector<double> ExPostPayoffs(const BayesianGame& game, std::size_t t,
                                  std::size_t a);

}  // namespace condisc

#endif  // CONDISC_GAME_H_
