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

#ifndef CONDISC_LP_H_
#define CONDISC_LP_H_

#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace condisc {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class RowSense { kLessEqual, kEqual, kGreaterEqual };
enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

std::string LpStatusName(LpStatus status);

// Small dense linear program. Rows are stored sparsely; variables default
// to the bounds [0, +inf).
class LinearProgram {
 public:
  LinearProgram() = default;
  explicit LinearProgram(int num_vars);

  int AddVariable(double objective = 0.0, double lower = 0.0,
                  double upper = kInfinity);
  void SetObjective(int var, double coefficient);
  void SetBounds(int var, double lower, double upper);
  void SetMaximize(bool maximize) { maximize_ = maximize; }
  int AddRow(std::vector<std::pair<int, double>> coefficients, RowSense sense,
             double rhs);

  struct Row {
    std::vector<std::pair<int, double>> coefficients;
    RowSense sense;
    double rhs;
  };

  int num_vars() const { return static_cast<int>(objective_.size()); }
  int num_rows() const { return static_cast<int>(rows_.size()); }
  bool maximize() const { return maximize_; }
  const std::vector<double>& objective() const { return objective_; }
  double lower(int var) const { return lower_[var]; }
  double upper(int var) const { return upper_[var]; }
  const std::vector<Row>& rows() const { return rows_; }

  // Largest violation of any row or bound by x.
  double MaxViolation(const std::vector<double>& x) const;
  double Evaluate(const std::vector<double>& x) const;

 private:
  std::vector<double> objective_;
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<Row> rows_;
  bool maximize_ = false;
};

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  std::vector<double> x;
  double objective = 0.0;
  // Optimal phase-1 value; above kPhaseOneTolerance certifies infeasibility.
  double phase_one_value = 0.0;
  int pivots = 0;
};

inline constexpr double kPhaseOneTolerance = 1e-8;

// Two-phase primal simplex on a dense tableau. Dantzig pricing, switching to
// Bland's rule once a run of degenerate pivots is seen, so the result is a
// deterministic function of the input.
LpSolution SolveLp(const LinearProgram& lp);

}  // namespace condisc

#endif  // CONDISC_LP_H_
