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

#include "condisc/disclosure.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>

#include "condisc/errors.h"
#include "condisc/lp.h"

namespace condisc {
namespace {

bool Contains(TypeSet set, int t) { return (set >> t) & 1U; }

bool SubsetOf(TypeSet a, TypeSet b) { return (a & ~b) == 0; }

std::string SetLabel(const BayesianGame& game, int i, TypeSet set) {
  std::string out = "{";
  bool first = true;
  for (int t = 0; t < game.num_types(i); ++t) {
    if (!Contains(set, t)) continue;
    if (!first) out += ",";
    out += game.type_labels(i)[t];
    first = false;
  }
  return out + "}";
}

// Message profile key of a cell: own type followed by received sets.
using CellKey = std::vector<std::uint64_t>;

class CellIndex {
 public:
  CellIndex(const BayesianGame& game, CellStructure* cells)
      : game_(game), cells_(cells), index_(game.num_players()) {}

  int Find(int j, const CellKey& key) const {
    auto it = index_[j].find(key);
    return it == index_[j].end() ? -1 : it->second;
  }

  int Add(int j, const CellKey& key, bool on_path) {
    const int id = static_cast<int>(cells_->cells[j].size());
    index_[j][key] = id;
    Cell cell;
    cell.player = j;
    cell.own_type = static_cast<int>(key[0]);
    cell.received.assign(key.begin() + 1, key.end());
    cell.belief.assign(game_.num_joint_types(), 0.0);
    cell.on_path = on_path;
    cells_->cells[j].push_back(std::move(cell));
    return id;
  }

 private:
  const BayesianGame& game_;
  CellStructure* cells_;
  std::vector<std::map<CellKey, int>> index_;
};

CellKey KeyAt(const BayesianGame& game, const DisclosureStrategy& sigma,
              int j, std::size_t t) {
  CellKey key{static_cast<std::uint64_t>(game.TypeOf(t, j))};
  for (int i = 0; i < game.num_players(); ++i) {
    key.push_back(i == j ? FullSet(game.num_types(i))
                         : sigma[i][game.TypeOf(t, i)][j]);
  }
  return key;
}

void Normalize(std::vector<double>* belief) {
  double total = 0.0;
  for (double b : *belief) total += b;
  if (total > 0.0) {
    for (double& b : *belief) b /= total;
  }
}

// Deviation message vectors of player i at type t_i: one option per
// receiver.
std::vector<std::vector<TypeSet>> DeviationMessages(
    const BayesianGame& game, const DisclosureSpace& space, int i, int t_i) {
  const int n = game.num_players();
  const auto& opts = space.options(i, t_i);
  std::vector<std::vector<TypeSet>> out;
  std::vector<int> digits(n, 0);
  while (true) {
    std::vector<TypeSet> msg(n, FullSet(game.num_types(i)));
    for (int j = 0; j < n; ++j) {
      if (j != i) msg[j] = opts[digits[j]];
    }
    out.push_back(std::move(msg));
    int pos = n - 1;
    while (pos >= 0) {
      if (pos == i) {
        --pos;
        continue;
      }
      if (++digits[pos] < static_cast<int>(opts.size())) break;
      digits[pos] = 0;
      --pos;
    }
    if (pos < 0) break;
  }
  return out;
}

class Evaluator {
 public:
  Evaluator(const BayesianGame& game, const DisclosureSpace& space,
            const DisclosureStrategy& sigma,
            const std::vector<std::vector<double>>* rank)
      : game_(game), space_(space), sigma_(sigma), rank_(rank) {}

  // Builds on-path cells and every cell a unilateral deviation can reach.
  const CellStructure& Build() {
    const int n = game_.num_players();
    CellStructure& cs = built_;
    cs.cells.assign(n, {});
    cs.on_path_cell.assign(n, std::vector<int>(game_.num_joint_types(), -1));
    index_ = std::make_unique<CellIndex>(game_, &cs);
    for (std::size_t t = 0; t < game_.num_joint_types(); ++t) {
      for (int j = 0; j < n; ++j) {
        const CellKey key = KeyAt(game_, sigma_, j, t);
        int id = index_->Find(j, key);
        if (id < 0) id = index_->Add(j, key, true);
        cs.on_path_cell[j][t] = id;
        cs.cells[j][id].belief[t] += game_.prior(t);
      }
    }
    for (int j = 0; j < n; ++j) {
      for (Cell& cell : cs.cells[j]) {
        Normalize(&cell.belief);
        if (std::all_of(cell.belief.begin(), cell.belief.end(),
                        [](double b) { return b == 0.0; })) {
          // Zero-probability profile: treat like an off-path cell.
          cell.on_path = false;
        }
      }
    }
    for (int j = 0; j < n; ++j) {
      for (Cell& cell : cs.cells[j]) {
        if (!cell.on_path) cell.belief = OffPathBelief(j, cell);
      }
    }
    for (int i = 0; i < n; ++i) {
      for (int t_i = 0; t_i < game_.num_types(i); ++t_i) {
        for (const auto& msg : DeviationMessages(game_, space_, i, t_i)) {
          for (std::size_t t = 0; t < game_.num_joint_types(); ++t) {
            if (game_.TypeOf(t, i) != t_i) continue;
            for (int j = 0; j < n; ++j) {
              if (j == i) continue;
              CellKey key = KeyAt(game_, sigma_, j, t);
              key[1 + i] = msg[j];
              if (index_->Find(j, key) >= 0) continue;
              const int id = index_->Add(j, key, false);
              cs.cells[j][id].belief = OffPathBelief(j, cs.cells[j][id]);
            }
          }
        }
      }
    }
    RebuildIndex();
    return built_;
  }

  // Payoff of player i of type t_i when sending `msg` while everybody else
  // follows `actions`; i best-responds within each of its own cells.
  double Payoff(const std::vector<std::vector<int>>& actions, int i, int t_i,
                const std::vector<TypeSet>* msg) const {
    const int n = game_.num_players();
    const ProductSpace& aspace = game_.action_space();
    std::map<int, std::vector<double>> by_cell;
    std::vector<int> digits(n);
    for (std::size_t t = 0; t < game_.num_joint_types(); ++t) {
      if (game_.TypeOf(t, i) != t_i || game_.prior(t) == 0.0) continue;
      const double w = game_.Conditional(t, i);
      for (int k = 0; k < n; ++k) {
        if (k == i) continue;
        CellKey key = KeyAt(game_, sigma_, k, t);
        if (msg != nullptr) key[1 + i] = (*msg)[k];
        const int id = Lookup(k, key);
        digits[k] = actions[k][id];
      }
      const int own = built_.on_path_cell[i][t];
      auto& values = by_cell[own];
      if (values.empty()) values.assign(game_.num_actions(i), 0.0);
      for (int a_i = 0; a_i < game_.num_actions(i); ++a_i) {
        digits[i] = a_i;
        values[a_i] += w * game_.Utility(t, aspace.Encode(digits), i);
      }
    }
    double total = 0.0;
    for (const auto& [cell, values] : by_cell) {
      if (msg == nullptr) {
        total += values[actions[i][cell]];
      } else {
        total += *std::max_element(values.begin(), values.end());
      }
    }
    return total;
  }

 private:
  int Lookup(int j, const CellKey& key) const {
    auto it = lookup_[j].find(key);
    if (it == lookup_[j].end()) throw Error("unreachable disclosure cell");
    return it->second;
  }

  void RebuildIndex() {
    lookup_.assign(game_.num_players(), {});
    for (int j = 0; j < game_.num_players(); ++j) {
      for (std::size_t id = 0; id < built_.cells[j].size(); ++id) {
        const Cell& cell = built_.cells[j][id];
        CellKey key{static_cast<std::uint64_t>(cell.own_type)};
        key.insert(key.end(), cell.received.begin(), cell.received.end());
        lookup_[j][key] = static_cast<int>(id);
      }
    }
  }

  // Bayes where a sender's message is on path, skeptical where it is not.
  std::vector<double> OffPathBelief(int j, const Cell& cell) const {
    const int n = game_.num_players();
    std::vector<TypeSet> allowed(n, 0);
    for (int i = 0; i < n; ++i) {
      if (i == j) {
        allowed[i] = Singleton(cell.own_type);
        continue;
      }
      const TypeSet msg = cell.received[i];
      TypeSet senders = 0;
      for (int t_i = 0; t_i < game_.num_types(i); ++t_i) {
        if (sigma_[i][t_i][j] == msg && game_.marginal(i, t_i) > 0.0) {
          senders |= Singleton(t_i);
        }
      }
      if (senders != 0) {
        allowed[i] = senders;
        continue;
      }
      // Skeptical: the consistent types the sender would least like to be
      // taken for.
      double worst = kInfinity;
      for (int t_i = 0; t_i < game_.num_types(i); ++t_i) {
        if (Contains(msg, t_i)) worst = std::min(worst, Rank(i, t_i));
      }
      for (int t_i = 0; t_i < game_.num_types(i); ++t_i) {
        if (Contains(msg, t_i) && Rank(i, t_i) <= worst + 1e-12) {
          allowed[i] |= Singleton(t_i);
        }
      }
    }
    std::vector<double> belief(game_.num_joint_types(), 0.0);
    auto admissible = [&](std::size_t t) {
      for (int i = 0; i < n; ++i) {
        if (!Contains(allowed[i], game_.TypeOf(t, i))) return false;
      }
      return true;
    };
    for (std::size_t t = 0; t < belief.size(); ++t) {
      if (admissible(t)) belief[t] = game_.prior(t);
    }
    Normalize(&belief);
    if (std::all_of(belief.begin(), belief.end(),
                    [](double b) { return b == 0.0; })) {
      for (std::size_t t = 0; t < belief.size(); ++t) {
        if (admissible(t)) belief[t] = 1.0;
      }
      Normalize(&belief);
    }
    return belief;
  }

  double Rank(int i, int t_i) const {
    return rank_ == nullptr ? 0.0 : (*rank_)[i][t_i];
  }

  const BayesianGame& game_;
  const DisclosureSpace& space_;
  const DisclosureStrategy& sigma_;
  const std::vector<std::vector<double>>* rank_;
  std::unique_ptr<CellIndex> index_;
  CellStructure built_;
  std::vector<std::map<CellKey, int>> lookup_;
};

DisclosureStrategy FullDisclosure(const BayesianGame& game) {
  const int n = game.num_players();
  DisclosureStrategy sigma(n);
  for (int i = 0; i < n; ++i) {
    sigma[i].assign(game.num_types(i),
                    std::vector<TypeSet>(n, FullSet(game.num_types(i))));
    for (int t_i = 0; t_i < game.num_types(i); ++t_i) {
      for (int j = 0; j < n; ++j) {
        if (j != i) sigma[i][t_i][j] = Singleton(t_i);
      }
    }
  }
  return sigma;
}

}  // namespace

std::string UnravelingName(Unraveling u) {
  switch (u) {
    case Unraveling::kFull:
      return "full";
    case Unraveling::kPartial:
      return "partial";
    case Unraveling::kNone:
      return "none";
  }
  return "unknown";
}

DisclosureSpace::DisclosureSpace(
    std::vector<std::vector<std::vector<TypeSet>>> o)
    : options_(std::move(o)) {}

void DisclosureSpace::Validate(const BayesianGame& game) const {
  if (num_players() != game.num_players()) {
    throw ConfigError("disclosure space must list every player");
  }
  for (int i = 0; i < game.num_players(); ++i) {
    if (game.num_types(i) > 62) {
      throw ConfigError("disclosure supports at most 62 types per player");
    }
    if (static_cast<int>(options_[i].size()) != game.num_types(i)) {
      throw TotalityError("disclosure space must list every type");
    }
    for (int t = 0; t < game.num_types(i); ++t) {
      const auto& opts = options_[i][t];
      bool has_single = false, has_full = false;
      for (TypeSet s : opts) {
        if (!Contains(s, t)) {
          throw ConfigError("disclosure option of type " +
                            game.type_labels(i)[t] +
                            " must contain the type itself");
        }
        if (!SubsetOf(s, FullSet(game.num_types(i)))) {
          throw ConfigError("disclosure option names unknown types");
        }
        has_single |= s == Singleton(t);
        has_full |= s == FullSet(game.num_types(i));
      }
      if (!has_single || !has_full) {
        throw ConfigError("disclosure options of type " +
                          game.type_labels(i)[t] +
                          " must include the type alone and the full set");
      }
    }
  }
}

namespace {

std::vector<TypeSet> OrderOptions(std::vector<TypeSet> opts) {
  std::sort(opts.begin(), opts.end(), [](TypeSet a, TypeSet b) {
    const int pa = std::popcount(a), pb = std::popcount(b);
    return pa != pb ? pa < pb : a < b;
  });
  opts.erase(std::unique(opts.begin(), opts.end()), opts.end());
  return opts;
}

}  // namespace

DisclosureSpace DisclosureSpace::AllOrNothing(const BayesianGame& game) {
  std::vector<std::vector<std::vector<TypeSet>>> o(game.num_players());
  for (int i = 0; i < game.num_players(); ++i) {
    for (int t = 0; t < game.num_types(i); ++t) {
      o[i].push_back(
          OrderOptions({Singleton(t), FullSet(game.num_types(i))}));
    }
  }
  DisclosureSpace space(std::move(o));
  space.Validate(game);
  return space;
}

DisclosureSpace DisclosureSpace::Unrestricted(const BayesianGame& game) {
  std::vector<std::vector<std::vector<TypeSet>>> o(game.num_players());
  for (int i = 0; i < game.num_players(); ++i) {
    if (game.num_types(i) > 12) {
      throw ConfigError("unrestricted disclosure needs at most 12 types");
    }
    for (int t = 0; t < game.num_types(i); ++t) {
      std::vector<TypeSet> opts;
      for (TypeSet s = 1; s <= FullSet(game.num_types(i)); ++s) {
        if (Contains(s, t)) opts.push_back(s);
      }
      o[i].push_back(OrderOptions(std::move(opts)));
    }
  }
  DisclosureSpace space(std::move(o));
  space.Validate(game);
  return space;
}

DisclosureSpace DisclosureSpace::FromJson(const BayesianGame& game,
                                          const Json& doc) {
  if (!doc.is_array() || static_cast<int>(doc.size()) != game.num_players()) {
    throw ConfigError("disclosure_spaces must hold one map per player");
  }
  std::vector<std::vector<std::vector<TypeSet>>> o(game.num_players());
  for (int i = 0; i < game.num_players(); ++i) {
    const auto& labels = game.type_labels(i);
    auto index_of = [&](const std::string& label) {
      auto it = std::find(labels.begin(), labels.end(), label);
      if (it == labels.end()) {
        throw ConfigError("unknown type '" + label + "' in disclosure_spaces");
      }
      return static_cast<int>(it - labels.begin());
    };
    o[i].assign(game.num_types(i), {});
    if (!doc[i].is_object()) {
      throw ConfigError("disclosure_spaces entries must be maps");
    }
    for (const auto& [label, sets] : doc[i].items()) {
      const int t = index_of(label);
      for (const Json& set : sets) {
        TypeSet mask = 0;
        for (const Json& member : set) {
          mask |= Singleton(index_of(member.get<std::string>()));
        }
        o[i][t].push_back(mask);
      }
    }
    for (int t = 0; t < game.num_types(i); ++t) {
      o[i][t] = OrderOptions(std::move(o[i][t]));
    }
  }
  DisclosureSpace space(std::move(o));
  space.Validate(game);
  return space;
}

Json DisclosureSpace::ToJson(const BayesianGame& game) const {
  Json doc = Json::array();
  for (int i = 0; i < num_players(); ++i) {
    Json player = Json::object();
    for (int t = 0; t < game.num_types(i); ++t) {
      Json sets = Json::array();
      for (TypeSet s : options_[i][t]) {
        Json members = Json::array();
        for (int k = 0; k < game.num_types(i); ++k) {
          if (Contains(s, k)) members.push_back(game.type_labels(i)[k]);
        }
        sets.push_back(members);
      }
      player[game.type_labels(i)[t]] = sets;
    }
    doc.push_back(player);
  }
  return doc;
}

Unraveling Classify(const BayesianGame& game, const DisclosureStrategy& sigma) {
  bool full = true, proper = false;
  for (int i = 0; i < game.num_players(); ++i) {
    for (int t = 0; t < game.num_types(i); ++t) {
      for (int j = 0; j < game.num_players(); ++j) {
        if (j == i) continue;
        const TypeSet s = sigma[i][t][j];
        if (s != Singleton(t)) full = false;
        if (s != FullSet(game.num_types(i))) proper = true;
      }
    }
  }
  if (full) return Unraveling::kFull;
  return proper ? Unraveling::kPartial : Unraveling::kNone;
}

std::vector<std::vector<std::vector<int>>> BayesNashContinuation::Solve(
    const BayesianGame& game, const CellStructure& cs) const {
  const int n = game.num_players();
  const ProductSpace& aspace = game.action_space();
  std::vector<std::vector<int>> on_path(n);
  std::size_t profiles = 1;
  for (int j = 0; j < n; ++j) {
    for (std::size_t id = 0; id < cs.cells[j].size(); ++id) {
      if (!cs.cells[j][id].on_path) continue;
      on_path[j].push_back(static_cast<int>(id));
      const std::size_t a = static_cast<std::size_t>(game.num_actions(j));
      if (profiles > max_profiles_ / a + 1) {
        throw ConfigError("continuation search space too large");
      }
      profiles *= a;
    }
  }
  if (profiles > max_profiles_) {
    throw ConfigError("continuation search space too large");
  }

  std::vector<std::vector<int>> actions(n);
  for (int j = 0; j < n; ++j) actions[j].assign(cs.cells[j].size(), 0);

  // Expected payoff of action a_j in cell id against on-path play.
  std::vector<int> digits(n);
  auto value = [&](int j, const Cell& cell, int a_j) {
    double v = 0.0;
    for (std::size_t t = 0; t < cell.belief.size(); ++t) {
      const double b = cell.belief[t];
      if (b == 0.0) continue;
      for (int k = 0; k < n; ++k) {
        digits[k] = k == j ? a_j : actions[k][cs.on_path_cell[k][t]];
      }
      v += b * game.Utility(t, aspace.Encode(digits), j);
    }
    return v;
  };
  auto best_value = [&](int j, const Cell& cell) {
    double best = -kInfinity;
    for (int a = 0; a < game.num_actions(j); ++a) {
      best = std::max(best, value(j, cell, a));
    }
    return best;
  };

  std::vector<std::pair<int, int>> slots;  // (player, cell)
  for (int j = 0; j < n; ++j) {
    for (int id : on_path[j]) slots.push_back({j, id});
  }
  std::vector<std::vector<std::vector<int>>> equilibria;
  std::vector<int> odometer(slots.size(), 0);
  while (true) {
    for (std::size_t s = 0; s < slots.size(); ++s) {
      actions[slots[s].first][slots[s].second] = odometer[s];
    }
    bool stable = true;
    for (const auto& [j, id] : slots) {
      const Cell& cell = cs.cells[j][id];
      if (value(j, cell, actions[j][id]) < best_value(j, cell) - 1e-12) {
        stable = false;
        break;
      }
    }
    if (stable) {
      auto eq = actions;
      for (int j = 0; j < n; ++j) {
        for (std::size_t id = 0; id < cs.cells[j].size(); ++id) {
          const Cell& cell = cs.cells[j][id];
          if (cell.on_path) continue;
          int best_a = 0;
          double best = -kInfinity;
          for (int a = 0; a < game.num_actions(j); ++a) {
            const double v = value(j, cell, a);
            if (v > best + 1e-12) {
              best = v;
              best_a = a;
            }
          }
          eq[j][id] = best_a;
        }
      }
      equilibria.push_back(std::move(eq));
      if (equilibria.size() >= max_equilibria_) break;
    }
    int pos = static_cast<int>(slots.size()) - 1;
    while (pos >= 0) {
      if (++odometer[pos] < game.num_actions(slots[pos].first)) break;
      odometer[pos] = 0;
      --pos;
    }
    if (pos < 0) break;
  }
  return equilibria;
}

UnravelingOutcome SolveDisclosureGame(const BayesianGame& game,
                                      const DisclosureSpace& space) {
  return SolveDisclosureGame(game, space, BayesNashContinuation());
}

UnravelingOutcome SolveDisclosureGame(const BayesianGame& game,
                                      const DisclosureSpace& space,
                                      const ContinuationSolver& solver,
                                      const DisclosureOptions& options) {
  const int n = game.num_players();
  if (space.num_players() != n) {
    throw ConfigError("disclosure space does not match the game");
  }
  UnravelingOutcome outcome;
  outcome.continuation = solver.Name();

  // Skeptical ranking from the full-information continuation.
  std::vector<std::vector<double>> rank(n);
  {
    const DisclosureStrategy full = FullDisclosure(game);
    Evaluator eval(game, space, full, nullptr);
    const CellStructure cs = eval.Build();
    const auto eqs = solver.Solve(game, cs);
    for (int i = 0; i < n; ++i) {
      rank[i].assign(game.num_types(i), 0.0);
      if (eqs.empty()) continue;
      for (int t_i = 0; t_i < game.num_types(i); ++t_i) {
        if (game.marginal(i, t_i) > 0.0) {
          rank[i][t_i] = eval.Payoff(eqs.front(), i, t_i, nullptr);
        }
      }
    }
  }

  // Odometer over (player, type, receiver) option indices.
  struct Slot {
    int i, t, j;
  };
  std::vector<Slot> slots;
  std::size_t total = 1;
  for (int i = 0; i < n; ++i) {
    for (int t = 0; t < game.num_types(i); ++t) {
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        slots.push_back({i, t, j});
        const std::size_t k = space.options(i, t).size();
        if (total > options.max_strategies / k + 1) {
          throw ConfigError("disclosure strategy space too large");
        }
        total *= k;
      }
    }
  }
  if (total > options.max_strategies) {
    throw ConfigError("disclosure strategy space too large");
  }
  std::vector<int> odometer(slots.size(), 0);
  DisclosureStrategy sigma(n);
  for (int i = 0; i < n; ++i) {
    sigma[i].assign(game.num_types(i),
                    std::vector<TypeSet>(n, FullSet(game.num_types(i))));
  }
  while (true) {
    for (std::size_t s = 0; s < slots.size(); ++s) {
      const Slot& sl = slots[s];
      sigma[sl.i][sl.t][sl.j] = space.options(sl.i, sl.t)[odometer[s]];
    }
    ++outcome.strategies_searched;
    Evaluator eval(game, space, sigma, &rank);
    const CellStructure cs = eval.Build();
    for (const auto& actions : solver.Solve(game, cs)) {
      bool ok = true;
      std::vector<TypeReport> reports;
      for (int i = 0; i < n && ok; ++i) {
        for (int t_i = 0; t_i < game.num_types(i) && ok; ++t_i) {
          if (game.marginal(i, t_i) <= 0.0) continue;
          TypeReport rep{i, t_i, eval.Payoff(actions, i, t_i, nullptr), 0, 0};
          for (const auto& msg : DeviationMessages(game, space, i, t_i)) {
            bool same = true, more_informative = true, strictly = false;
            bool all_single = true, all_full = true;
            for (int j = 0; j < n; ++j) {
              if (j == i) continue;
              const TypeSet cur = sigma[i][t_i][j];
              same &= msg[j] == cur;
              more_informative &= SubsetOf(msg[j], cur);
              strictly |= msg[j] != cur;
              all_single &= msg[j] == Singleton(t_i);
              all_full &= msg[j] == FullSet(game.num_types(i));
            }
            const double dev =
                same ? rep.on_path_payoff : eval.Payoff(actions, i, t_i, &msg);
            if (all_single) rep.full_disclosure_payoff = dev;
            if (all_full) rep.no_disclosure_payoff = dev;
            if (same) continue;
            const bool breaks =
                (more_informative && strictly)
                    ? dev >= rep.on_path_payoff - options.tol
                    : dev > rep.on_path_payoff + options.tol;
            if (breaks) {
              ok = false;
              break;
            }
          }
          reports.push_back(rep);
        }
      }
      if (!ok) continue;
      outcome.found = true;
      outcome.strategy = sigma;
      outcome.classification = Classify(game, sigma);
      outcome.cells = cs;
      outcome.actions = actions;
      outcome.types = std::move(reports);
      return outcome;
    }
    int pos = static_cast<int>(slots.size()) - 1;
    while (pos >= 0) {
      const Slot& sl = slots[pos];
      if (++odometer[pos] < static_cast<int>(space.options(sl.i, sl.t).size())) {
        break;
      }
      odometer[pos] = 0;
      --pos;
    }
    if (pos < 0) break;
  }
  return outcome;
}

Json OutcomeToJson(const BayesianGame& game, const UnravelingOutcome& outcome) {
  Json doc;
  doc["equilibrium_found"] = outcome.found;
  doc["strategies_searched"] = outcome.strategies_searched;
  doc["continuation"] = outcome.continuation;
  if (!outcome.found) {
    doc["result"] = "NoPureEquilibrium";
    return doc;
  }
  doc["classification"] = UnravelingName(outcome.classification);
  Json strategy = Json::array();
  const int n = game.num_players();
  for (int i = 0; i < n; ++i) {
    for (int t = 0; t < game.num_types(i); ++t) {
      Json shows = Json::object();
      for (int j = 0; j < n; ++j) {
        if (j != i) {
          shows[std::to_string(j)] = SetLabel(game, i, outcome.strategy[i][t][j]);
        }
      }
      strategy.push_back({{"player", i},
                          {"type", game.type_labels(i)[t]},
                          {"shows", shows}});
    }
  }
  doc["strategy"] = strategy;
  Json beliefs = Json::array();
  for (int j = 0; j < n; ++j) {
    for (std::size_t id = 0; id < outcome.cells.cells[j].size(); ++id) {
      const Cell& cell = outcome.cells.cells[j][id];
      Json received = Json::object();
      for (int i = 0; i < n; ++i) {
        if (i != j) received[std::to_string(i)] = SetLabel(game, i, cell.received[i]);
      }
      Json posterior = Json::object();
      for (std::size_t t = 0; t < cell.belief.size(); ++t) {
        if (cell.belief[t] > 0.0) posterior[game.TypeKey(t)] = cell.belief[t];
      }
      beliefs.push_back({{"receiver", j},
                         {"own_type", game.type_labels(j)[cell.own_type]},
                         {"received", received},
                         {"on_path", cell.on_path},
                         {"posterior", posterior},
                         {"action", game.action_labels(j)[outcome.actions[j][id]]}});
    }
  }
  doc["beliefs"] = beliefs;
  Json types = Json::array();
  for (const TypeReport& r : outcome.types) {
    types.push_back({{"player", r.player},
                     {"type", game.type_labels(r.player)[r.type]},
                     {"on_path_payoff", r.on_path_payoff},
                     {"full_disclosure_payoff", r.full_disclosure_payoff},
                     {"no_disclosure_payoff", r.no_disclosure_payoff}});
  }
  doc["types"] = types;
  return doc;
}

std::vector<PostUnravelingComponent> PostUnravelingGame(
    const BayesianGame& game, const UnravelingOutcome& outcome) {
  if (!outcome.found) {
    throw DomainError("post-unraveling game needs a solved equilibrium");
  }
  const int n = game.num_players();
  std::map<std::vector<TypeSet>, std::vector<std::size_t>> groups;
  for (std::size_t t = 0; t < game.num_joint_types(); ++t) {
    if (game.prior(t) == 0.0) continue;
    std::vector<TypeSet> key;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (j != i) key.push_back(outcome.strategy[i][game.TypeOf(t, i)][j]);
      }
    }
    groups[key].push_back(t);
  }
  std::shared_ptr<const BayesianGame> base;
  if (!game.tabulated()) base = std::make_shared<BayesianGame>(game);
  std::vector<PostUnravelingComponent> out;
  for (const auto& [key, members] : groups) {
    double mass = 0.0;
    std::vector<std::vector<bool>> present(n);
    for (int i = 0; i < n; ++i) present[i].assign(game.num_types(i), false);
    for (std::size_t t : members) {
      mass += game.prior(t);
      for (int i = 0; i < n; ++i) present[i][game.TypeOf(t, i)] = true;
    }
    std::vector<std::vector<int>> type_map(n);
    std::vector<std::vector<std::string>> labels(n), actions(n);
    std::vector<int> radix(n);
    for (int i = 0; i < n; ++i) {
      for (int t = 0; t < game.num_types(i); ++t) {
        if (present[i][t]) {
          type_map[i].push_back(t);
          labels[i].push_back(game.type_labels(i)[t]);
        }
      }
      actions[i] = game.action_labels(i);
      radix[i] = static_cast<int>(type_map[i].size());
    }
    const ProductSpace sub(radix);
    std::vector<std::size_t> joint_map(sub.size());
    std::vector<double> prior(sub.size(), 0.0);
    std::vector<bool> member(game.num_joint_types(), false);
    for (std::size_t t : members) member[t] = true;
    std::vector<int> digits(n);
    for (std::size_t k = 0; k < sub.size(); ++k) {
      for (int i = 0; i < n; ++i) digits[i] = type_map[i][sub.Digit(k, i)];
      joint_map[k] = game.type_space().Encode(digits);
      if (member[joint_map[k]]) prior[k] = game.prior(joint_map[k]) / mass;
    }
    double total = 0.0;
    for (double p : prior) total += p;
    for (double& p : prior) p /= total;

    std::string label;
    std::size_t pos = 0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        if (!label.empty()) label += " ";
        label += std::to_string(i) + "->" + std::to_string(j) + ":" +
                 SetLabel(game, i, key[pos++]);
      }
    }
    if (game.tabulated()) {
      const std::size_t na = game.num_joint_actions();
      std::vector<double> table(sub.size() * na * n);
      for (std::size_t k = 0; k < sub.size(); ++k) {
        for (std::size_t a = 0; a < na; ++a) {
          for (int i = 0; i < n; ++i) {
            table[(k * na + a) * n + i] = game.Utility(joint_map[k], a, i);
          }
        }
      }
      out.push_back({label, mass,
                     BayesianGame(labels, actions, prior, std::move(table)),
                     type_map, joint_map});
    } else {
      auto fn = [base, joint_map](std::size_t t, std::size_t a, int i) {
        return base->Utility(joint_map[t], a, i);
      };
      out.push_back({label, mass, BayesianGame(labels, actions, prior, fn),
                     type_map, joint_map});
    }
  }
  return out;
}

CorrelatedPolicy RestrictPolicy(const PostUnravelingComponent& component,
                                const CorrelatedPolicy& mu) {
  if (mu.scope() != PolicyScope::kFullProfile) {
    throw ScopeError("restriction needs a full-profile policy");
  }
  std::vector<Distribution> table;
  for (std::size_t t : component.joint_map) table.push_back(mu.at(t));
  return CorrelatedPolicy::FullProfile(component.game, std::move(table));
}

PipelineReport Prop2Pipeline(const BayesianGame& game,
                             const DisclosureSpace& space,
                             const CorrelatedPolicy& mu,
                             const ContinuationSolver& solver, double tol) {
  PipelineReport report;
  report.outcome = SolveDisclosureGame(game, space, solver);
  if (!report.outcome.found) {
    report.verdict = false;
    return report;
  }
  report.components = PostUnravelingGame(game, report.outcome);
  report.verdict = true;
  for (const auto& component : report.components) {
    const CorrelatedPolicy local = RestrictPolicy(component, mu);
    const PayoffVector x = InducedPayoff(component.game, local);
    report.feasible.push_back(CheckFeasible(component.game, x, tol));
    report.intir.push_back(CheckINTIR(component.game, x, tol));
    report.ic.push_back(CheckIC(component.game, local, x, tol));
    report.verdict = report.verdict && report.feasible.back().verdict &&
                     report.intir.back().verdict && report.ic.back().verdict;
  }
  return report;
}

PipelineReport Prop2Pipeline(const BayesianGame& game,
                             const DisclosureSpace& space,
                             const PayoffVector& x,
                             const ContinuationSolver& solver, double tol) {
  const SolverReport feasible = CheckFeasible(game, x, tol);
  if (!feasible.verdict) {
    PipelineReport report;
    report.outcome = SolveDisclosureGame(game, space, solver);
    report.feasible.push_back(feasible);
    report.verdict = false;
    return report;
  }
  return Prop2Pipeline(game, space, *feasible.witness, solver, tol);
}

Json PipelineToJson(const BayesianGame& game, const PipelineReport& report) {
  Json doc;
  doc["verdict"] = report.verdict;
  doc["regime"] = report.regime;
  doc["unraveling"] = OutcomeToJson(game, report.outcome);
  Json components = Json::array();
  for (std::size_t k = 0; k < report.components.size(); ++k) {
    const auto& c = report.components[k];
    Json entry{{"messages", c.label}, {"probability", c.probability}};
    if (k < report.feasible.size()) {
      entry["feasible"] = ReportToJson(c.game, report.feasible[k]);
      entry["INTIR"] = ReportToJson(c.game, report.intir[k]);
      entry["IC"] = ReportToJson(c.game, report.ic[k]);
    }
    components.push_back(entry);
  }
  doc["components"] = components;
  if (report.components.empty() && !report.feasible.empty()) {
    doc["feasible"] = ReportToJson(game, report.feasible.front());
  }
  return doc;
}

}  // namespace condisc
