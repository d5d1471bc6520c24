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

#include "condisc/programs.h"

#include <pthread.h>

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstring>
#include <exception>
#include <mutex>

#include "condisc/solvers.h"

namespace condisc {

// Thrown by a child call made from inside a truncated evaluation.
struct TruncationAbort {};

class Engine {
 public:
  Engine(const BayesianGame& game, const ProgramProfile& programs,
         std::size_t t, const RandomizationSignal& signal, std::uint64_t trial,
         const EngineOptions& options)
      : game_(game),
        programs_(programs),
        t_(t),
        signal_(signal),
        trial_(trial),
        options_(options),
        c_(signal.DrawC(trial)) {}

  Output Invoke(int k, bool output_action, std::uint64_t depth,
                bool truncated) {
    if (k < 0 || k >= static_cast<int>(programs_.size())) {
      throw DomainError("call to a nonexistent program");
    }
    if (depth > options_.depth_cap) {
      throw DepthExceeded("depth cap " + std::to_string(options_.depth_cap) +
                              " exceeded",
                          stats_);
    }
    stats_.max_depth = std::max(stats_.max_depth, depth);
    const Program& program = *programs_[k];
    const bool memo = options_.memoize && program.pure();
    const std::size_t level = depth - options_.base_depth;
    const std::size_t slot =
        static_cast<std::size_t>(k) * 4 + (output_action ? 2 : 0) +
        (truncated ? 1 : 0);
    if (memo && level < memo_.size() && memo_[level][slot]) {
      ++stats_.memo_hits;
      Record(k, output_action, depth, truncated, true, *memo_[level][slot]);
      return *memo_[level][slot];
    }
    CallContext ctx(this, k, depth, truncated);
    ++stats_.evaluations;
    Output out;
    if (truncated) {
      try {
        out = program.Run(ctx, output_action);
      } catch (const TruncationAbort&) {
        out = Output::NoOutput();
      }
    } else {
      out = program.Run(ctx, output_action);
    }
    if (memo) {
      if (memo_.size() <= level) {
        memo_.resize(level + 1,
                     std::vector<std::optional<Output>>(programs_.size() * 4));
      }
      memo_[level][slot] = out;
    }
    Record(k, output_action, depth, truncated, false, out);
    return out;
  }

  double ULevel(std::uint64_t level) const {
    return options_.u_source ? options_.u_source(level)
                             : signal_.ULevel(trial_, level);
  }

  const BayesianGame& game() const { return game_; }
  std::size_t t() const { return t_; }
  double c() const { return c_; }
  std::uint64_t trial() const { return trial_; }
  TraceStats& stats() { return stats_; }
  std::vector<CallEvent>& trace() { return trace_; }

 private:
  void Record(int k, bool flag, std::uint64_t depth, bool truncated,
              bool hit, const Output& out) {
    if (options_.record_trace) {
      trace_.push_back({k, flag, depth, truncated, hit, out});
    }
  }

  const BayesianGame& game_;
  const ProgramProfile& programs_;
  std::size_t t_;
  const RandomizationSignal& signal_;
  std::uint64_t trial_;
  const EngineOptions& options_;
  double c_;
  TraceStats stats_;
  std::vector<CallEvent> trace_;
  std::vector<std::vector<std::optional<Output>>> memo_;
};

bool Output::AllOnes() const {
  return kind == Kind::kDisclosure &&
         std::all_of(bits.begin(), bits.end(), [](bool b) { return b; });
}

bool Output::DisclosesTo(int owner, int reader) const {
  if (kind != Kind::kDisclosure || owner == reader) return false;
  const std::size_t idx = reader < owner ? reader : reader - 1;
  return idx < bits.size() && bits[idx];
}

std::string Output::ToString() const {
  switch (kind) {
    case Kind::kAction:
      return "a" + std::to_string(action);
    case Kind::kDisclosure: {
      std::string s = "y";
      for (bool b : bits) s += b ? '1' : '0';
      return s;
    }
    case Kind::kNoOutput:
      break;
  }
  return "none";
}

CallContext::CallContext(Engine* engine, int self, std::uint64_t depth,
                         bool truncated)
    : engine_(engine),
      self_(self),
      depth_(depth),
      truncated_(truncated),
      ledger_(engine->game().num_players()) {
  ledger_[self] = engine->game().TypeOf(engine->t(), self);
}

double CallContext::c() const { return engine_->c(); }
double CallContext::U() const { return engine_->ULevel(depth_); }
double CallContext::UNext() const { return engine_->ULevel(depth_ + 1); }
int CallContext::self() const { return self_; }
int CallContext::num_players() const { return engine_->game().num_players(); }
const BayesianGame& CallContext::game() const { return engine_->game(); }
std::uint64_t CallContext::trial() const { return engine_->trial(); }
int CallContext::OwnType() const { return *ledger_[self_]; }
bool CallContext::Knows(int k) const { return ledger_.at(k).has_value(); }

int CallContext::ReadType(int k) const {
  if (!Knows(k)) {
    throw InformationViolation("program " + std::to_string(self_) +
                               " read the undisclosed type of player " +
                               std::to_string(k));
  }
  return *ledger_[k];
}

Output CallContext::Call(int k, bool output_action) {
  if (truncated_) throw TruncationAbort{};
  Output out = engine_->Invoke(k, output_action, depth_ + 1, false);
  if (!output_action && out.DisclosesTo(k, self_)) {
    ledger_[k] = engine_->game().TypeOf(engine_->t(), k);
  }
  return out;
}

Output CallContext::CallTruncated(int k, bool output_action) {
  if (truncated_) throw TruncationAbort{};
  Output out = engine_->Invoke(k, output_action, depth_ + 1, true);
  if (!output_action && out.DisclosesTo(k, self_)) {
    ledger_[k] = engine_->game().TypeOf(engine_->t(), k);
  }
  return out;
}

BaseResult RunBaseCalls(const BayesianGame& game,
                        const ProgramProfile& programs, std::size_t t,
                        const RandomizationSignal& signal,
                        std::uint64_t trial, const EngineOptions& options) {
  const int n = game.num_players();
  if (static_cast<int>(programs.size()) != n) {
    throw TotalityError("one program per player required");
  }
  if (options.depth_cap < 2) throw DomainError("depth cap must be >= 2");
  Engine engine(game, programs, t, signal, trial, options);
  BaseResult result;
  result.t = t;
  result.c = engine.c();
  for (int i = 0; i < n; ++i) {
    result.disclosures.push_back(
        engine.Invoke(i, false, options.base_depth, false));
  }
  for (int i = 0; i < n; ++i) {
    const Output a = engine.Invoke(i, true, options.base_depth, false);
    if (a.kind != Output::Kind::kAction || a.action < 0 ||
        a.action >= game.num_actions(i)) {
      throw DomainError("base action call of player " + std::to_string(i) +
                        " returned " + a.ToString());
    }
    result.actions.push_back(a.action);
    engine.stats().base_actions.push_back(a);
  }
  engine.stats().base_disclosures = result.disclosures;
  engine.stats().terminated = true;
  result.joint_action = game.action_space().Encode(result.actions);
  result.stats = engine.stats();
  result.trace = std::move(engine.trace());
  return result;
}

int SirbotPlan::TargetAction(int k, std::size_t t, double c) const {
  return game->ActionOf(mu.at(t).Sample(c), k);
}

int SirbotPlan::PunishAction(int j, int i, const std::vector<int>& types,
                             double c) const {
  std::vector<int> others;
  for (int k = 0; k < game->num_players(); ++k) {
    if (k != j) others.push_back(types[k]);
  }
  const std::size_t key = game->type_space().Without(j).Encode(others);
  const std::size_t a = punishments[j].at(key).Sample(c);
  return game->action_space().Without(j).Digit(a, i < j ? i : i - 1);
}

std::shared_ptr<const SirbotPlan> MakeSirbotPlan(
    const BayesianGame& game, const CorrelatedPolicy& mu,
    std::vector<CorrelatedPolicy> punishments, double eps_ground,
    std::vector<int> default_actions) {
  if (!(eps_ground > 0.0 && eps_ground < 1.0)) {
    throw DomainError("eps_ground must lie in (0, 1)");
  }
  if (mu.scope() != PolicyScope::kFullProfile) {
    throw ScopeError("the target must be a full-profile policy");
  }
  const int n = game.num_players();
  if (n > 1 && static_cast<int>(punishments.size()) != n) {
    throw TotalityError("one punishment policy per player required");
  }
  for (int j = 0; j < static_cast<int>(punishments.size()); ++j) {
    if (punishments[j].scope() != PolicyScope::kMinusPlayer ||
        punishments[j].player() != j) {
      throw ScopeError("punishment " + std::to_string(j) +
                       " must be a tau_{-j} policy");
    }
  }
  if (default_actions.empty()) default_actions.assign(n, 0);
  return std::make_shared<SirbotPlan>(SirbotPlan{
      &game, mu, std::move(punishments), std::move(default_actions),
      eps_ground});
}

namespace {

std::vector<CorrelatedPolicy> Punishments(const BayesianGame& game,
                                          const PayoffVector& x, double tol) {
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

std::shared_ptr<const SirbotPlan> MakeSirbotPlanForTarget(
    const BayesianGame& game, const PayoffVector& x, double eps_ground,
    double tol) {
  const SolverReport feasible = CheckFeasible(game, x, tol);
  if (!feasible.verdict || !feasible.witness) {
    throw DomainError("target payoff is not feasible");
  }
  return MakeSirbotPlan(game, *feasible.witness, Punishments(game, x, tol),
                        eps_ground);
}

std::shared_ptr<const SirbotPlan> MakeSirbotPlanForPolicy(
    const BayesianGame& game, const CorrelatedPolicy& mu, double eps_ground,
    double tol) {
  return MakeSirbotPlan(game, mu,
                        Punishments(game, InducedPayoff(game, mu), tol),
                        eps_ground);
}

namespace {

class SirbotProgram : public Program {
 public:
  SirbotProgram(std::shared_ptr<const SirbotPlan> plan, int player,
                std::string id)
      : Program(std::move(id), player), plan_(std::move(plan)) {}

  Output Run(CallContext& ctx, bool output_action) const override {
    return output_action ? Act(ctx) : Disclose(ctx);
  }

 private:
  std::size_t FullType(const CallContext& ctx) const {
    std::vector<int> types(ctx.num_players());
    for (int k = 0; k < ctx.num_players(); ++k) types[k] = ctx.ReadType(k);
    return ctx.game().type_space().Encode(types);
  }

  // Counterparts that withheld their type from `i`; when every counterpart
  // disclosed to `i`, the players some counterpart withheld from instead.
  // A punisher that hides its type from the deviator only is not a suspect.
  std::vector<int> Suspects(int i, const std::vector<Output>& y) const {
    const int n = static_cast<int>(y.size());
    std::vector<int> out;
    for (int k = 0; k < n; ++k) {
      if (k != i && !y[k].DisclosesTo(k, i)) out.push_back(k);
    }
    if (!out.empty()) return out;
    for (int m = 0; m < n; ++m) {
      if (m == i) continue;
      for (int k = 0; k < n; ++k) {
        if (k != i && k != m && !y[k].DisclosesTo(k, m)) {
          out.push_back(m);
          break;
        }
      }
    }
    return out;
  }

  // tau-hat for `i` against the lowest-index member of `failing`, from the
  // types this call knows.
  std::optional<int> Punishment(const CallContext& ctx, int i,
                                const std::vector<int>& failing) const {
    if (failing.empty()) return std::nullopt;
    const int j = failing.front();
    std::vector<int> types(ctx.num_players(), 0);
    for (int k = 0; k < ctx.num_players(); ++k) {
      if (k == j) continue;
      if (!ctx.Knows(k)) return plan_->default_actions[i];
      types[k] = ctx.ReadType(k);
    }
    return plan_->PunishAction(j, i, types, ctx.c());
  }

  Output Punish(const CallContext& ctx, const std::vector<int>& failing) const {
    return Output::Action(*Punishment(ctx, player(), failing));
  }

  Output Act(CallContext& ctx) const {
    const int i = player();
    const int n = ctx.num_players();
    const double eps = plan_->eps_ground;
    std::vector<Output> y(n);
    if (ctx.UNext() >= eps) {
      for (int k = 0; k < n; ++k) {
        if (k != i) y[k] = ctx.Call(k, false);
      }
      std::vector<int> failing = Suspects(i, y);
      if (!failing.empty()) return Punish(ctx, failing);
      const std::size_t t = FullType(ctx);
      const int mine = plan_->TargetAction(i, t, ctx.c());
      if (ctx.U() < eps) return Output::Action(mine);
      for (int k = 0; k < n; ++k) {
        if (k == i) continue;
        const Output a = ctx.Call(k, true);
        if (!a.IsAction(plan_->TargetAction(k, t, ctx.c()))) {
          failing.push_back(k);
        }
      }
      if (failing.empty()) return Output::Action(mine);
      return Punish(ctx, failing);
    }
    for (int k = 0; k < n; ++k) {
      if (k != i) y[k] = ctx.CallTruncated(k, false);
    }
    const std::vector<int> failing = Suspects(i, y);
    if (!failing.empty()) return Punish(ctx, failing);
    return Output::Action(plan_->TargetAction(i, FullType(ctx), ctx.c()));
  }

  Output Disclose(CallContext& ctx) const {
    const int i = player();
    const int n = ctx.num_players();
    const double eps = plan_->eps_ground;
    std::vector<bool> mine(n > 0 ? n - 1 : 0, false);
    if (ctx.U() < eps) return Output::Disclosure(std::vector<bool>(mine.size(), true));
    std::vector<Output> y(n), a(n);
    for (int k = 0; k < n; ++k) {
      if (k == i) continue;
      y[k] = ctx.Call(k, false);
      a[k] = ctx.Call(k, true);
    }
    std::vector<int> failing = Suspects(i, y);
    if (failing.empty()) {
      const std::size_t t = FullType(ctx);
      for (int k = 0; k < n; ++k) {
        if (k != i && !a[k].IsAction(plan_->TargetAction(k, t, ctx.c()))) {
          failing.push_back(k);
        }
      }
      if (failing.empty()) {
        return Output::Disclosure(std::vector<bool>(mine.size(), true));
      }
    }
    const bool low = ctx.UNext() < eps;
    for (int k = 0; k < n; ++k) {
      if (k == i || !y[k].DisclosesTo(k, i)) continue;
      bool punishing = false;
      if (!low) {
        std::vector<int> others;
        for (int m : failing) {
          if (m != k) others.push_back(m);
        }
        const std::optional<int> tau_k = Punishment(ctx, k, others);
        punishing = tau_k && a[k].IsAction(*tau_k);
      }
      if (low || punishing) mine[k < i ? k : k - 1] = true;
    }
    return Output::Disclosure(std::move(mine));
  }

  std::shared_ptr<const SirbotPlan> plan_;
};

class FixedProgram : public Program {
 public:
  FixedProgram(std::string id, int player, std::vector<int> by_type,
               bool discloses)
      : Program(std::move(id), player),
        by_type_(std::move(by_type)),
        discloses_(discloses) {}

  Output Run(CallContext& ctx, bool output_action) const override {
    if (output_action) {
      return Output::Action(by_type_.size() == 1 ? by_type_[0]
                                                 : by_type_[ctx.OwnType()]);
    }
    return Output::Disclosure(
        std::vector<bool>(ctx.num_players() - 1, discloses_));
  }

 private:
  std::vector<int> by_type_;
  bool discloses_;
};

class NoiseProgram : public Program {
 public:
  NoiseProgram(int player, std::uint64_t seed)
      : Program("noise:" + std::to_string(player) + ":" + std::to_string(seed),
                player),
        signal_(seed) {}

  Output Run(CallContext& ctx, bool output_action) const override {
    const std::uint64_t key =
        RandomizationSignal::Mix(std::bit_cast<std::uint64_t>(ctx.U()) ^
                                 RandomizationSignal::Mix(
                                     std::bit_cast<std::uint64_t>(ctx.UNext()))) ^
        (output_action ? 1 : 0);
    auto draw = [&](std::uint64_t index) {
      return signal_.Bits(ctx.trial(), RandomizationSignal::kStreamNoise,
                          RandomizationSignal::Mix(key + index));
    };
    if (output_action) {
      return Output::Action(
          static_cast<int>(draw(0) % ctx.game().num_actions(player())));
    }
    std::vector<bool> bits(ctx.num_players() - 1);
    for (std::size_t k = 0; k < bits.size(); ++k) bits[k] = draw(k + 1) & 1;
    return Output::Disclosure(std::move(bits));
  }

 private:
  RandomizationSignal signal_;
};

}  // namespace

ProgramRef Sirbot(std::shared_ptr<const SirbotPlan> plan, int player,
                  const std::string& id) {
  return std::make_shared<SirbotProgram>(
      std::move(plan), player,
      id.empty() ? "sirbot:" + std::to_string(player) : id);
}

ProgramProfile SirbotProfile(std::shared_ptr<const SirbotPlan> plan) {
  ProgramProfile profile;
  for (int i = 0; i < plan->game->num_players(); ++i) {
    profile.push_back(Sirbot(plan, i));
  }
  return profile;
}

ProgramRef NeverDisclose(std::shared_ptr<const SirbotPlan> plan, int player) {
  const BayesianGame& game = *plan->game;
  std::vector<int> by_type(game.num_types(player), 0);
  if (!plan->punishments.empty()) {
    for (int t = 0; t < game.num_types(player); ++t) {
      if (game.marginal(player, t) > 0.0) {
        by_type[t] =
            BestResponseAction(game, player, t, plan->punishments[player]);
      }
    }
  }
  return std::make_shared<FixedProgram>(
      "never-disclose:" + std::to_string(player), player, std::move(by_type),
      false);
}

ProgramRef DiscloseThenDefect(std::shared_ptr<const SirbotPlan> plan,
                              int player) {
  const BayesianGame& game = *plan->game;
  std::vector<int> by_type(game.num_types(player), 0);
  for (int tj = 0; tj < game.num_types(player); ++tj) {
    if (game.marginal(player, tj) <= 0.0) continue;
    std::vector<double> value(game.num_actions(player), 0.0);
    for (std::size_t t = 0; t < game.num_joint_types(); ++t) {
      if (game.TypeOf(t, player) != tj || game.prior(t) <= 0.0) continue;
      const double q = game.Conditional(t, player);
      for (const auto& [a, m] : plan->mu.at(t).entries) {
        for (int b = 0; b < game.num_actions(player); ++b) {
          value[b] += q * m *
                      game.Utility(t, game.action_space().Replace(a, player, b),
                                   player);
        }
      }
    }
    by_type[tj] = static_cast<int>(
        std::max_element(value.begin(), value.end()) - value.begin());
  }
  return std::make_shared<FixedProgram>(
      "disclose-then-defect:" + std::to_string(player), player,
      std::move(by_type), true);
}

ProgramRef ConstantAction(int player, int action, bool discloses) {
  return std::make_shared<FixedProgram>(
      "constant:" + std::to_string(player) + ":" + std::to_string(action) +
          (discloses ? ":y1" : ":y0"),
      player, std::vector<int>{action}, discloses);
}

ProgramRef FreshIdentitySirbot(std::shared_ptr<const SirbotPlan> plan,
                               int player) {
  return Sirbot(std::move(plan), player,
                "sirbot-fresh:" + std::to_string(player));
}

ProgramRef RandomizedNoise(int player, std::uint64_t seed) {
  return std::make_shared<NoiseProgram>(player, seed);
}

std::vector<NamedProgram> DeviatorLibrary(
    std::shared_ptr<const SirbotPlan> plan, int player,
    std::uint64_t noise_seed) {
  std::vector<NamedProgram> lib;
  lib.push_back({"NeverDisclose", NeverDisclose(plan, player)});
  lib.push_back({"DiscloseThenDefect", DiscloseThenDefect(plan, player)});
  for (int a = 0; a < plan->game->num_actions(player); ++a) {
    lib.push_back(
        {"ConstantAction(" + plan->game->action_labels(player)[a] + ")",
         ConstantAction(player, a, true)});
  }
  lib.push_back({"FreshIdentitySirbot", FreshIdentitySirbot(plan, player)});
  lib.push_back({"RandomizedNoise", RandomizedNoise(player, noise_seed)});
  return lib;
}

namespace {

struct ThreadTask {
  std::function<void()> fn;
};

void* ThreadEntry(void* arg) {
  static_cast<ThreadTask*>(arg)->fn();
  return nullptr;
}

constexpr std::size_t kStackBytes = std::size_t{512} << 20;

}  // namespace

void ParallelTrials(std::uint64_t trials, int jobs,
                    const std::function<void(std::uint64_t)>& fn) {
  jobs = std::max(1, jobs);
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  auto worker = [&] {
    for (;;) {
      const std::uint64_t k = next.fetch_add(1);
      if (k >= trials) return;
      try {
        fn(k);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!error) error = std::current_exception();
        next = trials;
        return;
      }
    }
  };
  std::vector<ThreadTask> tasks(jobs, ThreadTask{worker});
  std::vector<pthread_t> threads(jobs);
  pthread_attr_t attr;
  pthread_attr_init(&attr);
  pthread_attr_setstacksize(&attr, kStackBytes);
  for (int k = 0; k < jobs; ++k) {
    if (pthread_create(&threads[k], &attr, ThreadEntry, &tasks[k]) != 0) {
      pthread_attr_destroy(&attr);
      throw Error(std::string("pthread_create failed: ") + std::strerror(errno));
    }
  }
  pthread_attr_destroy(&attr);
  for (pthread_t& th : threads) pthread_join(th, nullptr);
  if (error) std::rethrow_exception(error);
}

std::size_t SampleTypes(const BayesianGame& game,
                        const RandomizationSignal& signal, std::uint64_t trial,
                        int player, int fixed_type) {
  const double u =
      signal.Uniform(trial, RandomizationSignal::kStreamTypes, 0);
  std::vector<double> w(game.num_joint_types(), 0.0);
  for (std::size_t t = 0; t < w.size(); ++t) {
    if (fixed_type >= 0 && game.TypeOf(t, player) != fixed_type) continue;
    w[t] = game.prior(t);
  }
  const Distribution d = Distribution::FromDense(w);
  if (d.entries.empty()) throw DomainError("no type profile to sample");
  const double total = d.Total();
  return d.Sample(u * total);
}

double DeltaSlack(double u_bar, double eps_ground) {
  return u_bar * (1.0 / ((1 - eps_ground) * (1 - eps_ground)) - 1.0);
}

namespace {

TrialRow RunTrial(const SirbotPlan& plan, const ProgramProfile& programs,
                  const RandomizationSignal& signal, std::uint64_t trial,
                  const SimulationOptions& options, int j) {
  const BayesianGame& game = *plan.game;
  TrialRow row;
  row.trial = trial;
  row.t = SampleTypes(game, signal, trial, j < 0 ? 0 : j,
                      j < 0 ? -1 : options.fixed_type);
  const double c = signal.DrawC(trial);
  try {
    const BaseResult r =
        RunBaseCalls(game, programs, row.t, signal, trial, options.engine);
    row.actions = r.actions;
    row.depth = r.stats.max_depth;
    row.payoffs = ExPostPayoffs(game, row.t, r.joint_action);
  } catch (const DepthExceeded& e) {
    row.depth_exceeded = true;
    row.depth = e.stats().max_depth;
    return row;
  }
  row.on_target = true;
  for (int k = 0; k < game.num_players(); ++k) {
    const bool hit = row.actions[k] == plan.TargetAction(k, row.t, c);
    if (!hit) row.on_target = false;
    if (k != j && !hit) row.punished = true;
  }
  if (j >= 0) {
    std::vector<int> target(game.num_players());
    for (int k = 0; k < game.num_players(); ++k) {
      target[k] = plan.TargetAction(k, row.t, c);
    }
    row.gain = row.payoffs[j] -
               game.Utility(row.t, game.action_space().Encode(target), j);
  }
  return row;
}

}  // namespace

std::vector<TrialRow> SimulateProfile(const SirbotPlan& plan,
                                      const ProgramProfile& programs,
                                      const SimulationOptions& options) {
  const RandomizationSignal signal(options.seed);
  std::vector<TrialRow> rows(options.trials);
  ParallelTrials(options.trials, options.jobs, [&](std::uint64_t k) {
    rows[k] = RunTrial(plan, programs, signal, k, options, -1);
  });
  return rows;
}

ExploitabilityReport EstimateExploitability(
    const SirbotPlan& plan, const ProgramProfile& programs, int j,
    const std::string& deviator_name, const SimulationOptions& options) {
  const RandomizationSignal signal(options.seed);
  ExploitabilityReport report;
  report.deviator = deviator_name;
  report.player = j;
  report.eps_ground = plan.eps_ground;
  report.u_bar = plan.game->utility_bound();
  report.delta_slack = DeltaSlack(report.u_bar, plan.eps_ground);
  report.trials = options.trials;
  report.rows.resize(options.trials);
  ParallelTrials(options.trials, options.jobs, [&](std::uint64_t k) {
    report.rows[k] = RunTrial(plan, programs, signal, k, options, j);
  });
  double sum = 0.0, sum2 = 0.0, punished = 0.0;
  std::uint64_t n = 0;
  for (const TrialRow& row : report.rows) {
    if (row.depth_exceeded) {
      ++report.depth_exceeded;
      continue;
    }
    ++n;
    sum += row.gain;
    sum2 += row.gain * row.gain;
    punished += row.punished ? 1.0 : 0.0;
  }
  if (n > 0) {
    const double dn = static_cast<double>(n);
    report.mean_gain = sum / dn;
    const double var =
        n > 1 ? std::max(0.0, (sum2 - dn * report.mean_gain * report.mean_gain) /
                                  (dn - 1))
              : 0.0;
    report.se = std::sqrt(var / dn);
    report.ci95 = 1.96 * report.se;
    report.punished_fraction = punished / dn;
    report.punished_se = std::sqrt(
        report.punished_fraction * (1 - report.punished_fraction) / dn);
  }
  report.within_bound =
      n > 0 && report.mean_gain - 3 * report.se <= report.delta_slack;
  return report;
}

TerminationReport TerminationProfile(const SirbotPlan& plan,
                                     const ProgramProfile& programs,
                                     const SimulationOptions& options,
                                     int max_k) {
  TerminationReport report;
  report.eps_ground = plan.eps_ground;
  report.trials = options.trials;
  const std::vector<TrialRow> rows = SimulateProfile(plan, programs, options);
  std::uint64_t deepest = 0;
  for (const TrialRow& row : rows) {
    if (row.depth_exceeded) ++report.depth_exceeded;
    report.depths.push_back(row.depth);
    deepest = std::max(deepest, row.depth);
  }
  report.histogram.assign(deepest + 1, 0);
  for (std::uint64_t d : report.depths) ++report.histogram[d];
  const double n = static_cast<double>(rows.size());
  const double eps2 = plan.eps_ground * plan.eps_ground;
  report.pass = !rows.empty();
  for (int k = 1; k <= max_k; ++k) {
    TailPoint p;
    p.k = k;
    std::uint64_t above = 0;
    for (std::uint64_t d : report.depths) {
      if (d > static_cast<std::uint64_t>(2 * k)) ++above;
    }
    p.empirical = static_cast<double>(above) / n;
    p.bound = std::pow(1 - eps2, k);
    p.se = std::sqrt(p.empirical * (1 - p.empirical) / n);
    p.pass = p.empirical <= p.bound + 3 * p.se;
    if (!p.pass) report.pass = false;
    report.tail.push_back(p);
  }
  return report;
}

Json ExploitabilityToJson(const ExploitabilityReport& r) {
  return Json{{"deviator", r.deviator},
              {"player", r.player},
              {"eps_ground", r.eps_ground},
              {"u_bar", r.u_bar},
              {"delta_slack", r.delta_slack},
              {"trials", r.trials},
              {"depth_exceeded", r.depth_exceeded},
              {"mean_gain", r.mean_gain},
              {"se", r.se},
              {"ci95_half_width", r.ci95},
              {"punished_fraction", r.punished_fraction},
              {"punished_se", r.punished_se},
              {"within_bound", r.within_bound}};
}

Json TerminationToJson(const TerminationReport& r) {
  Json tail = Json::array();
  for (const TailPoint& p : r.tail) {
    tail.push_back({{"k", p.k},
                    {"empirical", p.empirical},
                    {"bound", p.bound},
                    {"se", p.se},
                    {"pass", p.pass}});
  }
  return Json{{"eps_ground", r.eps_ground},
              {"trials", r.trials},
              {"depth_exceeded", r.depth_exceeded},
              {"histogram", r.histogram},
              {"tail", tail},
              {"pass", r.pass}};
}

BayesianGame PublicGoodsGame(int n) {
  if (n < 2) throw DomainError("the public-goods game needs n >= 2");
  std::vector<std::vector<std::string>> types(n, {"low", "high"});
  std::vector<std::vector<std::string>> actions(n, {"C", "D"});
  const ProductSpace ts(std::vector<int>(n, 2));
  const ProductSpace as(std::vector<int>(n, 2));
  std::vector<double> prior(ts.size(), 1.0 / static_cast<double>(ts.size()));
  std::vector<double> u(ts.size() * as.size() * n);
  for (std::size_t t = 0; t < ts.size(); ++t) {
    for (std::size_t a = 0; a < as.size(); ++a) {
      for (int i = 0; i < n; ++i) {
        int coop = 0;
        for (int k = 0; k < n; ++k) {
          if (k != i && as.Digit(a, k) == 0) ++coop;
        }
        const double b = ts.Digit(t, i) == 0 ? 2.0 : 3.0;
        const double cost = as.Digit(a, i) == 0 ? 1.0 : 0.0;
        u[(t * as.size() + a) * n + i] =
            (b * coop / static_cast<double>(n - 1) - cost) / 3.0;
      }
    }
  }
  return BayesianGame(std::move(types), std::move(actions), std::move(prior),
                      std::move(u));
}

}  // namespace condisc
