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

#ifndef CONDISC_TOOLS_COMMANDS_H_
#define CONDISC_TOOLS_COMMANDS_H_

#include <cstdint>
#include <string>

namespace condisc {
namespace cli {

enum ExitCode { kPass = 0, kFail = 1, kConfigError = 2, kInternalError = 3 };

struct Settings {
  std::string command;
  std::string game;
  std::string payoff;
  std::string policy;
  double epsilon = 0.1;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  double tol = 1e-9;
  int jobs = 1;
  std::string out = "out";
  std::string label;
  std::string deviator;
  int player = -1;
  std::uint64_t depth_cap = 10000;
  bool termination = false;
  int max_k = 200;
  std::uint64_t samples = 1000000;
  std::string which = "all";
  std::string space;
};

// Merges a JSON scenario file into `settings`; unknown keys raise
// ConfigError.
void ApplyConfigFile(const std::string& path, Settings& settings);

int RunAnalyze(const Settings& s);
int RunFolk(const Settings& s);
int RunSimulate(const Settings& s);
int RunUnravel(const Settings& s);
int RunExamples(const Settings& s);

// Parses argv and dispatches; returns the process exit code.
int Main(int argc, char** argv);

}  // namespace cli
}  // namespace condisc

#endif  // CONDISC_TOOLS_COMMANDS_H_
