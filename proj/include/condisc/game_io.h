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

#ifndef CONDISC_GAME_IO_H_
#define CONDISC_GAME_IO_H_

#include <string>

#include "condisc/game.h"
#include "json.hpp"

namespace condisc {

using Json = nlohmann::json;

// Game definition documents, see docs/game_format.md. The loader rejects
// unknown keys and non-total utility tables.
BayesianGame GameFromJson(const Json& doc);
Json GameToJson(const BayesianGame& game);
BayesianGame LoadGameFile(const std::string& path);
Json ReadJsonFile(const std::string& path);

// Payoff vectors: {"x": [[x_0(t) for t in T_0], [x_1(t) ...], ...]}.
PayoffVector PayoffFromJson(const BayesianGame& game, const Json& doc);
Json PayoffToJson(const PayoffVector& x);

// Policies: {"scope": "full" | "minus" | "reported", "player": j,
//            "table": {"<cond-key>": {"<action-key>": mass, ...}, ...}}.
// Condition keys are type keys ("t1|t2") over the conditioning players;
// action keys are over the acting players.
CorrelatedPolicy PolicyFromJson(const BayesianGame& game, const Json& doc);
Json PolicyToJson(const BayesianGame& game, const CorrelatedPolicy& policy);

}  // namespace condisc

#endif  // CONDISC_GAME_IO_H_
