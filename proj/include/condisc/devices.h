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

#ifndef CONDISC_DEVICES_H_
#define CONDISC_DEVICES_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "condisc/game.h"
#include "condisc/game_io.h"
#include "condisc/signal.h"
#include "condisc/solvers.h"

namespace condisc {

// Types a device has legitimately learned: its own and those disclosed to it.
class TypeLedger {
 public:
  TypeLedger(int reader, std::vector<std::optional<int>> known)
      : reader_(reader), known_(std::move(known)) {}

  int reader() const { return reader_; }
  bool Knows(int k) const { return known_[k].has_value(); }
  bool KnowsAll() const;
  // Throws InformationViolation for an undisclosed type.
  int Get(int k) const;

 private:
  int reader_;
  std::vector<std::optional<int>> known_;
};

// A conditional commitment and disclosure device of one player. Both
// functions see the fingerprints of the whole profile (own slot included)
// and never the other devices' outputs.
class Device {
 public:
  virtual ~Device() = default;

  int player() const { return player_; }
  const std::string& fingerprint() const { return fingerprint_; }
  const Json& spec() const { return spec_; }

  // One bit per player; the own slot is ignored.
  virtual std::vector<bool> Disclose(
      const std::vector<std::string>& fingerprints, int own_type) const = 0;
  virtual int Respond(const std::vector<std::string>& fingerprints, double c,
                      int own_type, const TypeLedger& ledger) const = 0;
  // Values of c at which Respond may change; empty when it ignores c.
  virtual std::vector<double> Breakpoints() const { return {}; }

 protected:
  // The fingerprint is a hash of the canonical serialization of `spec`.
  Device(int player, Json spec);

 private:
  int player_;
  Json spec_;
  std::string fingerprint_;
};

using DeviceRef = std::shared_ptr<const Device>;
using DeviceProfile = std::vector<DeviceRef>;

// 64-bit FNV-1a of `text`, as 16 hex digits.
std::string Fingerprint(const std::string& text);

// Everything the folk devices share.
struct FolkPlan {
  const BayesianGame* game = nullptr;
  CorrelatedPolicy mu;
  // tau_{-j} for every j (kMinusPlayer scope); empty for n = 1.
  std::vector<CorrelatedPolicy> punishments;
  // Action played when the punishment cannot be evaluated (several
  // deviators with undisclosed types).
  std::vector<int> default_actions;
};

DeviceProfile BuildFolkDevices(const BayesianGame& game,
                               const CorrelatedPolicy& mu,
                               std::vector<CorrelatedPolicy> punishments,
                               std::vector<int> default_actions = {});

// Feasibility witness plus minimax punishments for a target x. Throws
// DomainError when x is not feasible and INTIR.
DeviceProfile BuildFolkDevicesForTarget(const BayesianGame& game,
                                        const PayoffVector& x,
                                        double tol = kDefaultPayoffTolerance);
// Same with a given target policy; x is the payoff mu induces.
DeviceProfile BuildFolkDevicesForPolicy(const BayesianGame& game,
                                        const CorrelatedPolicy& mu,
                                        double tol = kDefaultPayoffTolerance);

// The folk device of `player` with a different fingerprint.
DeviceRef FreshIdentityFolk(const DeviceProfile& profile, int player,
                            const std::string& salt);
// Discloses nothing and always plays `action`.
DeviceRef ConstantActionDevice(int player, int action);
// Discloses nothing and best-responds to tau_{-j} given only its own type.
DeviceRef BestResponseDevice(const BayesianGame& game, int player,
                             const CorrelatedPolicy& tau);
// Discloses nothing and best-responds to the realization tau^c given c.
DeviceRef SignalAwareBestResponseDevice(const BayesianGame& game, int player,
                                        const CorrelatedPolicy& tau);
// Folk device for `player` that discloses to nobody.
DeviceRef NonDisclosingFolk(const DeviceProfile& profile, int player);

// The punishment family a folk profile was built from, or nullptr.
const FolkPlan* FolkPlanOf(const DeviceProfile& profile);

struct CommitmentOutcome {
  std::size_t t = 0;
  double c = 0.0;
  // disclosure[i][k]: i disclosed its type to k.
  std::vector<std::vector<bool>> disclosure;
  std::vector<int> actions;
  std::size_t joint_action = 0;
  std::vector<double> payoffs;
};

// Disclosure functions first, then responses, in `order` (identity when
// empty). The result does not depend on the order.
CommitmentOutcome EvaluateCommitmentGame(const BayesianGame& game,
                                         const DeviceProfile& profile,
                                         std::size_t t, double c,
                                         const std::vector<int>& order = {});
CommitmentOutcome EvaluateCommitmentGame(const BayesianGame& game,
                                         const DeviceProfile& profile,
                                         std::size_t t,
                                         const RandomizationSignal& signal,
                                         std::uint64_t trial);

Json OutcomeToJson(const BayesianGame& game, const CommitmentOutcome& o);

// Deviations tried against a profile, per player.
struct Deviation {
  std::string name;
  DeviceRef device;
};
// Non-disclosing best responder, every constant action, and a truthful
// mimic with a fresh fingerprint.
std::vector<Deviation> DeviationLibrary(const BayesianGame& game,
                                        const DeviceProfile& profile,
                                        int player);

// c is integrated exactly over the breakpoints of the shared policies when
// `trials` is 0, otherwise sampled from `seed`.
struct VerifyOptions {
  double tol = 1e-9;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
};

struct TypeGain {
  int player = 0;
  int type = 0;
  double equilibrium_payoff = 0.0;
  double max_gain = 0.0;
  double se = 0.0;
  std::string best_deviation;
  // Deviator that conditions its action on the realized c. Reported, not
  // part of the verdict.
  double signal_aware_gain = 0.0;
};

struct BneReport {
  bool verdict = false;
  double tol = 0.0;
  std::string mode;
  std::size_t deviations_checked = 0;
  std::vector<TypeGain> gains;
  double max_gain = 0.0;
  double max_signal_aware_gain = 0.0;
};

BneReport VerifyBNE(const BayesianGame& game, const DeviceProfile& profile,
                    const VerifyOptions& options = {});
BneReport VerifyBNE(const BayesianGame& game, const DeviceProfile& profile,
                    const std::vector<std::vector<Deviation>>& library,
                    const VerifyOptions& options = {});

// The correlated policy the profile induces, one distribution over joint
// actions per type profile.
CorrelatedPolicy InducedPolicy(const BayesianGame& game,
                               const DeviceProfile& profile,
                               const VerifyOptions& options = {});

struct Prop1Report {
  PayoffVector x;
  SolverReport feasible;
  SolverReport intir;
  bool verdict = false;
};

Prop1Report VerifyProp1(const BayesianGame& game, const DeviceProfile& profile,
                        const VerifyOptions& options = {});

Json BneReportToJson(const BayesianGame& game, const BneReport& report);

}  // namespace condisc

#endif  // CONDISC_DEVICES_H_
