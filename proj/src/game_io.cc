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

#include "condisc/game_io.h"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "condisc/errors.h"

namespace condisc {
namespace {

std::vector<std::string> Split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string current;
  for (char ch : s) {
    if (ch == sep) {
      parts.push_back(current);
      current.clear();
    } else {
      current += ch;
    }
  }
  parts.push_back(current);
  return parts;
}

void RejectUnknownKeys(const Json& doc, const std::set<std::string>& allowed,
                       const std::string& what) {
  if (!doc.is_object()) throw ConfigError(what + " must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (!allowed.contains(key)) {
      throw ConfigError("unknown key '" + key + "' in " + what);
    }
  }
}

std::vector<std::vector<std::string>> LabelLists(const Json& doc,
                                                 const std::string& what) {
  if (!doc.is_array()) throw ConfigError(what + " must be a list of lists");
  std::vector<std::vector<std::string>> lists;
  for (const Json& inner : doc) {
    if (!inner.is_array() || inner.empty()) {
      throw ConfigError(what + " entries must be nonempty lists");
    }
    std::vector<std::string> labels;
    std::set<std::string> seen;
    for (const Json& label : inner) {
      const std::string s = label.get<std::string>();
      if (s.find('|') != std::string::npos || s.find("::") != std::string::npos) {
        throw ConfigError("label '" + s + "' contains a reserved separator");
      }
      if (!seen.insert(s).second) {
        throw ConfigError("duplicate label '" + s + "' in " + what);
      }
      labels.push_back(s);
    }
    lists.push_back(std::move(labels));
  }
  return lists;
}

// Index of a '|'-separated label key over the given players.
std::size_t ParseKey(const std::string& key,
                     const std::vector<std::vector<std::string>>& labels,
                     const std::vector<int>& players,
                     const ProductSpace& space) {
  const std::vector<std::string> parts = Split(key, '|');
  if (parts.size() != players.size()) {
    throw ConfigError("key '" + key + "' has wrong arity");
  }
  std::vector<int> digits(players.size());
  for (std::size_t k = 0; k < players.size(); ++k) {
    const auto& options = labels[players[k]];
    auto it = std::find(options.begin(), options.end(), parts[k]);
    if (it == options.end()) {
      throw ConfigError("unknown label '" + parts[k] + "' in key '" + key + "'");
    }
    digits[k] = static_cast<int>(it - options.begin());
  }
  return space.Encode(digits);
}

std::string MakeKey(std::size_t index,
                    const std::vector<std::vector<std::string>>& labels,
                    const std::vector<int>& players,
                    const ProductSpace& space) {
  std::string key;
  for (std::size_t k = 0; k < players.size(); ++k) {
    if (k > 0) key += '|';
    key += labels[players[k]][space.Digit(index, static_cast<int>(k))];
  }
  return key;
}

std::vector<int> AllPlayers(int n) {
  std::vector<int> players(n);
  for (int i = 0; i < n; ++i) players[i] = i;
  return players;
}

std::vector<int> PlayersExcept(int n, int j) {
  std::vector<int> players;
  for (int i = 0; i < n; ++i) {
    if (i != j) players.push_back(i);
  }
  return players;
}

std::vector<std::vector<std::string>> AllTypeLabels(const BayesianGame& game) {
  std::vector<std::vector<std::string>> labels;
  for (int i = 0; i < game.num_players(); ++i) {
    labels.push_back(game.type_labels(i));
  }
  return labels;
}

std::vector<std::vector<std::string>> AllActionLabels(const BayesianGame& game) {
  std::vector<std::vector<std::string>> labels;
  for (int i = 0; i < game.num_players(); ++i) {
    labels.push_back(game.action_labels(i));
  }
  return labels;
}

}  // namespace

BayesianGame GameFromJson(const Json& doc) {
  RejectUnknownKeys(doc,
                    {"players", "types", "actions", "prior", "utility",
                     "disclosure_spaces", "name"},
                    "game definition");
  for (const char* key : {"players", "types", "actions", "prior", "utility"}) {
    if (!doc.contains(key)) {
      throw ConfigError(std::string("game definition is missing '") + key + "'");
    }
  }
  const int n = doc.at("players").get<int>();
  auto types = LabelLists(doc.at("types"), "types");
  auto actions = LabelLists(doc.at("actions"), "actions");
  if (n <= 0 || static_cast<int>(types.size()) != n ||
      static_cast<int>(actions.size()) != n) {
    throw ConfigError("'players' disagrees with types/actions");
  }
  std::vector<int> type_radix, action_radix;
  for (int i = 0; i < n; ++i) {
    type_radix.push_back(static_cast<int>(types[i].size()));
    action_radix.push_back(static_cast<int>(actions[i].size()));
  }
  const ProductSpace type_space(type_radix);
  const ProductSpace action_space(action_radix);
  const std::vector<int> everyone = AllPlayers(n);

  std::vector<double> prior(type_space.size(), 0.0);
  if (!doc.at("prior").is_object()) throw ConfigError("'prior' must be a map");
  for (const auto& [key, mass] : doc.at("prior").items()) {
    prior[ParseKey(key, types, everyone, type_space)] = mass.get<double>();
  }

  const std::size_t cells = type_space.size() * action_space.size();
  std::vector<double> utility(cells * n, 0.0);
  std::vector<bool> filled(cells, false);
  if (!doc.at("utility").is_object()) {
    throw ConfigError("'utility' must be a map");
  }
  for (const auto& [key, values] : doc.at("utility").items()) {
    const auto sep = key.find("::");
    if (sep == std::string::npos) {
      throw ConfigError("utility key '" + key + "' lacks '::'");
    }
    const std::size_t t =
        ParseKey(key.substr(0, sep), types, everyone, type_space);
    const std::size_t a =
        ParseKey(key.substr(sep + 2), actions, everyone, action_space);
    if (!values.is_array() || static_cast<int>(values.size()) != n) {
      throw ConfigError("utility entry '" + key + "' must list " +
                        std::to_string(n) + " numbers");
    }
    const std::size_t cell = t * action_space.size() + a;
    filled[cell] = true;
    for (int i = 0; i < n; ++i) utility[cell * n + i] = values[i].get<double>();
  }
  for (std::size_t cell = 0; cell < cells; ++cell) {
    if (!filled[cell]) {
      const std::size_t t = cell / action_space.size();
      const std::size_t a = cell % action_space.size();
      throw TotalityError("utility table is missing '" +
                          MakeKey(t, types, everyone, type_space) + "::" +
                          MakeKey(a, actions, everyone, action_space) + "'");
    }
  }
  return BayesianGame(std::move(types), std::move(actions), std::move(prior),
                      std::move(utility));
}

Json GameToJson(const BayesianGame& game) {
  const int n = game.num_players();
  Json doc;
  doc["players"] = n;
  doc["types"] = AllTypeLabels(game);
  doc["actions"] = AllActionLabels(game);
  Json prior = Json::object();
  for (std::size_t t = 0; t < game.num_joint_types(); ++t) {
    if (game.prior(t) != 0.0) prior[game.TypeKey(t)] = game.prior(t);
  }
  doc["prior"] = prior;
  Json utility = Json::object();
  for (std::size_t t = 0; t < game.num_joint_types(); ++t) {
    for (std::size_t a = 0; a < game.num_joint_actions(); ++a) {
      utility[game.TypeKey(t) + "::" + game.ActionKey(a)] =
          ExPostPayoffs(game, t, a);
    }
  }
  doc["utility"] = utility;
  return doc;
}

Json ReadJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError("'" + path + "' is not valid JSON: " + e.what());
  }
}

BayesianGame LoadGameFile(const std::string& path) {
  return GameFromJson(ReadJsonFile(path));
}

PayoffVector PayoffFromJson(const BayesianGame& game, const Json& doc) {
  const Json& x = doc.is_object() && doc.contains("x") ? doc.at("x") : doc;
  if (!x.is_array() || static_cast<int>(x.size()) != game.num_players()) {
    throw ConfigError("payoff vector must list one array per player");
  }
  PayoffVector payoff;
  for (int j = 0; j < game.num_players(); ++j) {
    if (!x[j].is_array() || static_cast<int>(x[j].size()) != game.num_types(j)) {
      throw TotalityError("payoff vector must give a value for every type of "
                          "player " + std::to_string(j));
    }
    payoff.values.push_back(x[j].get<std::vector<double>>());
  }
  return payoff;
}

Json PayoffToJson(const PayoffVector& x) { return Json{{"x", x.values}}; }

CorrelatedPolicy PolicyFromJson(const BayesianGame& game, const Json& doc) {
  RejectUnknownKeys(doc, {"scope", "player", "table"}, "policy");
  const std::string scope = doc.value("scope", "full");
  const int n = game.num_players();
  const int j = doc.value("player", -1);
  const auto type_labels = AllTypeLabels(game);
  const auto action_labels = AllActionLabels(game);
  std::vector<int> cond_players = AllPlayers(n);
  std::vector<int> act_players = AllPlayers(n);
  ProductSpace cond_space = game.type_space();
  ProductSpace act_space = game.action_space();
  if (scope == "minus") {
    if (j < 0 || j >= n) throw ConfigError("minus-scope policy needs 'player'");
    cond_players = PlayersExcept(n, j);
    act_players = PlayersExcept(n, j);
    cond_space = game.type_space().Without(j);
    act_space = game.action_space().Without(j);
  } else if (scope != "full" && scope != "reported") {
    throw ConfigError("unknown policy scope '" + scope + "'");
  }
  std::vector<std::vector<double>> dense(cond_space.size());
  std::vector<bool> seen(cond_space.size(), false);
  for (const auto& [cond_key, dist] : doc.at("table").items()) {
    const std::size_t key =
        ParseKey(cond_key, type_labels, cond_players, cond_space);
    seen[key] = true;
    for (const auto& [action_key, mass] : dist.items()) {
      const std::size_t a =
          ParseKey(action_key, action_labels, act_players, act_space);
      auto& row = dense[key];
      row.resize(act_space.size(), 0.0);
      row[a] += mass.get<double>();
    }
  }
  std::vector<Distribution> table;
  for (std::size_t k = 0; k < dense.size(); ++k) {
    if (!seen[k]) {
      throw TotalityError("policy is missing conditioning key '" +
                          MakeKey(k, type_labels, cond_players, cond_space) +
                          "'");
    }
    table.push_back(Distribution::FromDense(dense[k]));
  }
  if (scope == "minus") return CorrelatedPolicy::MinusPlayer(game, j, table);
  if (scope == "reported") return CorrelatedPolicy::ReportedType(game, j, table);
  return CorrelatedPolicy::FullProfile(game, table);
}

Json PolicyToJson(const BayesianGame& game, const CorrelatedPolicy& policy) {
  const int n = game.num_players();
  const auto type_labels = AllTypeLabels(game);
  const auto action_labels = AllActionLabels(game);
  std::vector<int> cond_players = AllPlayers(n);
  std::vector<int> act_players = AllPlayers(n);
  ProductSpace cond_space = game.type_space();
  ProductSpace act_space = game.action_space();
  Json doc;
  switch (policy.scope()) {
    case PolicyScope::kFullProfile:
      doc["scope"] = "full";
      break;
    case PolicyScope::kReportedType:
      doc["scope"] = "reported";
      doc["player"] = policy.player();
      break;
    case PolicyScope::kMinusPlayer:
      doc["scope"] = "minus";
      doc["player"] = policy.player();
      cond_players = PlayersExcept(n, policy.player());
      act_players = cond_players;
      cond_space = game.type_space().Without(policy.player());
      act_space = game.action_space().Without(policy.player());
      break;
  }
  Json table = Json::object();
  for (std::size_t k = 0; k < policy.size(); ++k) {
    Json dist = Json::object();
    for (const auto& [a, m] : policy.at(k).entries) {
      dist[MakeKey(a, action_labels, act_players, act_space)] = m;
    }
    table[MakeKey(k, type_labels, cond_players, cond_space)] = dist;
  }
  doc["table"] = table;
  return doc;
}

}  // namespace condisc
