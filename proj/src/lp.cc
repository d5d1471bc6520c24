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

#include "condisc/lp.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "condisc/errors.h"

namespace condisc {
namespace {

constexpr double kPivotTolerance = 1e-9;
constexpr double kCostTolerance = 1e-10;
constexpr int kDegenerateRunBeforeBland = 50;
constexpr int kRefactorInterval = 256;

// x_v = offset + sign * y[pos] - y[neg] (neg < 0 when unused).
struct VariableMap {
  int pos;
  int neg;
  double offset;
  double sign;
};

class Tableau {
 public:
  Tableau(Eigen::MatrixXd a, Eigen::VectorXd b, std::vector<int> basis)
      : a_(std::move(a)), b_(std::move(b)), basis_(std::move(basis)) {
    Refactor();
  }

  int rows() const { return static_cast<int>(a_.rows()); }
  int cols() const { return static_cast<int>(a_.cols()); }
  const std::vector<int>& basis() const { return basis_; }
  double rhs(int r) const { return t_(r, cols()); }
  double at(int r, int c) const { return t_(r, c); }

  // Runs primal simplex on `cost` restricted to `allowed` columns.
  LpStatus Optimize(const std::vector<double>& cost,
                    const std::vector<bool>& allowed, int* pivots) {
    cost_ = cost;
    ComputeReducedCosts();
    bool bland = false;
    int degenerate_run = 0;
    int since_refactor = 0;
    const long limit = 200000L + 50L * (rows() + cols());
    for (long iter = 0;; ++iter) {
      if (iter > limit) throw Error("simplex iteration limit reached");
      int enter = -1;
      double best = -kCostTolerance;
      for (int j = 0; j < cols(); ++j) {
        if (!allowed[j] || d_[j] >= best) continue;
        enter = j;
        if (bland) break;
        best = d_[j];
      }
      if (enter < 0) return LpStatus::kOptimal;
      int leave = -1;
      double ratio = 0.0;
      for (int r = 0; r < rows(); ++r) {
        const double coef = t_(r, enter);
        if (coef <= kPivotTolerance) continue;
        const double candidate = std::max(0.0, t_(r, cols())) / coef;
        if (leave < 0 || candidate < ratio - 1e-12 ||
            (candidate <= ratio + 1e-12 && basis_[r] < basis_[leave])) {
          if (leave < 0 || candidate < ratio - 1e-12) ratio = candidate;
          leave = r;
        }
      }
      if (leave < 0) return LpStatus::kUnbounded;
      if (ratio <= 1e-12) {
        if (++degenerate_run > kDegenerateRunBeforeBland) bland = true;
      } else {
        degenerate_run = 0;
      }
      Pivot(leave, enter);
      ++*pivots;
      if (++since_refactor >= kRefactorInterval) {
        Refactor();
        ComputeReducedCosts();
        since_refactor = 0;
      }
    }
  }

  void Pivot(int r, int c) {
    const double p = t_(r, c);
    t_.row(r) /= p;
    for (int i = 0; i < rows(); ++i) {
      if (i == r) continue;
      const double f = t_(i, c);
      if (f != 0.0) t_.row(i) -= f * t_.row(r);
    }
    const double f = d_[c];
    if (f != 0.0) {
      for (int j = 0; j <= cols(); ++j) d_[j] -= f * t_(r, j);
    }
    basis_[r] = c;
  }

  void RemoveRow(int r) {
    const int m = rows();
    for (int i = r; i + 1 < m; ++i) {
      a_.row(i) = a_.row(i + 1);
      b_[i] = b_[i + 1];
    }
    a_.conservativeResize(m - 1, Eigen::NoChange);
    b_.conservativeResize(m - 1);
    basis_.erase(basis_.begin() + r);
    Refactor();
  }

  // Rebuilds B^{-1}[A | b] from the original data.
  void Refactor() {
    const int m = rows();
    Eigen::MatrixXd full(m, cols() + 1);
    full.leftCols(cols()) = a_;
    full.col(cols()) = b_;
    if (m == 0) {
      t_ = full;
      return;
    }
    Eigen::MatrixXd basis_matrix(m, m);
    for (int r = 0; r < m; ++r) basis_matrix.col(r) = a_.col(basis_[r]);
    t_ = basis_matrix.partialPivLu().solve(full);
    for (int r = 0; r < m; ++r) {
      t_.col(basis_[r]).setZero();
      t_(r, basis_[r]) = 1.0;
    }
  }

  std::vector<double> Values() const {
    std::vector<double> y(cols(), 0.0);
    for (int r = 0; r < rows(); ++r) y[basis_[r]] = std::max(0.0, rhs(r));
    return y;
  }

 private:
  void ComputeReducedCosts() {
    d_.assign(cols() + 1, 0.0);
    for (int j = 0; j < cols(); ++j) d_[j] = cost_[j];
    for (int r = 0; r < rows(); ++r) {
      const double cb = cost_[basis_[r]];
      if (cb == 0.0) continue;
      for (int j = 0; j <= cols(); ++j) d_[j] -= cb * t_(r, j);
    }
  }

  Eigen::MatrixXd a_;
  Eigen::VectorXd b_;
  std::vector<int> basis_;
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> t_;
  std::vector<double> cost_;
  std::vector<double> d_;
};

}  // namespace

std::string LpStatusName(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal:
      return "optimal";
    case LpStatus::kInfeasible:
      return "infeasible";
    case LpStatus::kUnbounded:
      return "unbounded";
  }
  return "unknown";
}

LinearProgram::LinearProgram(int num_vars)
    : objective_(num_vars, 0.0),
      lower_(num_vars, 0.0),
      upper_(num_vars, kInfinity) {}

int LinearProgram::AddVariable(double objective, double lower, double upper) {
  objective_.push_back(objective);
  lower_.push_back(lower);
  upper_.push_back(upper);
  return num_vars() - 1;
}

void LinearProgram::SetObjective(int var, double coefficient) {
  objective_.at(var) = coefficient;
}

void LinearProgram::SetBounds(int var, double lower, double upper) {
  if (lower > upper) throw DomainError("variable lower bound above upper");
  lower_.at(var) = lower;
  upper_.at(var) = upper;
}

int LinearProgram::AddRow(std::vector<std::pair<int, double>> coefficients,
                          RowSense sense, double rhs) {
  for (const auto& [var, coef] : coefficients) {
    if (var < 0 || var >= num_vars()) throw DomainError("row variable index");
    if (!std::isfinite(coef)) throw DomainError("non-finite LP coefficient");
  }
  if (!std::isfinite(rhs)) throw DomainError("non-finite LP right-hand side");
  rows_.push_back({std::move(coefficients), sense, rhs});
  return num_rows() - 1;
}

double LinearProgram::MaxViolation(const std::vector<double>& x) const {
  double worst = 0.0;
  for (int v = 0; v < num_vars(); ++v) {
    worst = std::max(worst, lower_[v] - x[v]);
    worst = std::max(worst, x[v] - upper_[v]);
  }
  for (const Row& row : rows_) {
    double lhs = 0.0;
    for (const auto& [var, coef] : row.coefficients) lhs += coef * x[var];
    switch (row.sense) {
      case RowSense::kLessEqual:
        worst = std::max(worst, lhs - row.rhs);
        break;
      case RowSense::kGreaterEqual:
        worst = std::max(worst, row.rhs - lhs);
        break;
      case RowSense::kEqual:
        worst = std::max(worst, std::abs(lhs - row.rhs));
        break;
    }
  }
  return worst;
}

double LinearProgram::Evaluate(const std::vector<double>& x) const {
  double value = 0.0;
  for (int v = 0; v < num_vars(); ++v) value += objective_[v] * x[v];
  return value;
}

LpSolution SolveLp(const LinearProgram& lp) {
  const int n = lp.num_vars();
  for (double c : lp.objective()) {
    if (!std::isfinite(c)) throw DomainError("non-finite LP objective");
  }

  // Nonnegative structural columns.
  std::vector<VariableMap> map(n);
  int structural = 0;
  struct StdRow {
    std::vector<std::pair<int, double>> coefficients;
    RowSense sense;
    double rhs;
  };
  std::vector<StdRow> rows;
  for (int v = 0; v < n; ++v) {
    const double lo = lp.lower(v);
    const double hi = lp.upper(v);
    if (std::isfinite(lo)) {
      map[v] = {structural++, -1, lo, 1.0};
      if (std::isfinite(hi)) {
        rows.push_back({{{map[v].pos, 1.0}}, RowSense::kLessEqual, hi - lo});
      }
    } else if (std::isfinite(hi)) {
      map[v] = {structural++, -1, hi, -1.0};
    } else {
      const int pos = structural++;
      map[v] = {pos, structural++, 0.0, 1.0};
    }
  }
  for (const auto& row : lp.rows()) {
    StdRow out{{}, row.sense, row.rhs};
    for (const auto& [var, coef] : row.coefficients) {
      const VariableMap& vm = map[var];
      out.rhs -= coef * vm.offset;
      out.coefficients.push_back({vm.pos, coef * vm.sign});
      if (vm.neg >= 0) out.coefficients.push_back({vm.neg, -coef});
    }
    rows.push_back(std::move(out));
  }
  const double sign = lp.maximize() ? -1.0 : 1.0;
  std::vector<double> cost(structural, 0.0);
  for (int v = 0; v < n; ++v) {
    const double c = sign * lp.objective()[v];
    const VariableMap& vm = map[v];
    cost[vm.pos] += c * vm.sign;
    if (vm.neg >= 0) cost[vm.neg] -= c;
  }

  // Slack, surplus and artificial columns.
  const int m = static_cast<int>(rows.size());
  for (StdRow& row : rows) {
    if (row.rhs < 0) {
      row.rhs = -row.rhs;
      for (auto& entry : row.coefficients) entry.second = -entry.second;
      if (row.sense == RowSense::kLessEqual) {
        row.sense = RowSense::kGreaterEqual;
      } else if (row.sense == RowSense::kGreaterEqual) {
        row.sense = RowSense::kLessEqual;
      }
    }
  }
  int slack_count = 0;
  int artificial_count = 0;
  for (const StdRow& row : rows) {
    if (row.sense != RowSense::kEqual) ++slack_count;
    if (row.sense != RowSense::kLessEqual) ++artificial_count;
  }
  const int total = structural + slack_count + artificial_count;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, total);
  Eigen::VectorXd b(m);
  std::vector<int> basis(m);
  std::vector<bool> is_artificial(total, false);
  int next_slack = structural;
  int next_artificial = structural + slack_count;
  for (int r = 0; r < m; ++r) {
    for (const auto& [col, coef] : rows[r].coefficients) a(r, col) += coef;
    b[r] = rows[r].rhs;
    switch (rows[r].sense) {
      case RowSense::kLessEqual:
        a(r, next_slack) = 1.0;
        basis[r] = next_slack++;
        break;
      case RowSense::kGreaterEqual:
        a(r, next_slack++) = -1.0;
        [[fallthrough]];
      case RowSense::kEqual:
        a(r, next_artificial) = 1.0;
        is_artificial[next_artificial] = true;
        basis[r] = next_artificial++;
        break;
    }
  }

  LpSolution solution;
  Tableau tableau(std::move(a), std::move(b), std::move(basis));
  std::vector<bool> allowed(total, true);
  if (artificial_count > 0) {
    std::vector<double> phase_one(total, 0.0);
    for (int j = 0; j < total; ++j) {
      if (is_artificial[j]) phase_one[j] = 1.0;
    }
    tableau.Optimize(phase_one, allowed, &solution.pivots);
    tableau.Refactor();
    double infeasibility = 0.0;
    for (int r = 0; r < tableau.rows(); ++r) {
      if (is_artificial[tableau.basis()[r]]) {
        infeasibility += std::max(0.0, tableau.rhs(r));
      }
    }
    solution.phase_one_value = infeasibility;
    if (infeasibility > kPhaseOneTolerance) {
      solution.status = LpStatus::kInfeasible;
      return solution;
    }
    // Drive remaining artificials out of the basis; drop redundant rows.
    for (int r = tableau.rows() - 1; r >= 0; --r) {
      if (!is_artificial[tableau.basis()[r]]) continue;
      int best = -1;
      double best_abs = 1e-7;
      for (int j = 0; j < total; ++j) {
        if (is_artificial[j]) continue;
        if (std::abs(tableau.at(r, j)) > best_abs) {
          best_abs = std::abs(tableau.at(r, j));
          best = j;
        }
      }
      if (best >= 0) {
        tableau.Pivot(r, best);
      } else {
        tableau.RemoveRow(r);
      }
    }
    tableau.Refactor();
    for (int j = 0; j < total; ++j) allowed[j] = !is_artificial[j];
  }

  std::vector<double> phase_two(total, 0.0);
  std::copy(cost.begin(), cost.end(), phase_two.begin());
  const LpStatus status =
      tableau.Optimize(phase_two, allowed, &solution.pivots);
  if (status == LpStatus::kUnbounded) {
    solution.status = LpStatus::kUnbounded;
    return solution;
  }
  tableau.Refactor();
  const std::vector<double> y = tableau.Values();
  solution.x.assign(n, 0.0);
  for (int v = 0; v < n; ++v) {
    const VariableMap& vm = map[v];
    double value = vm.offset + vm.sign * y[vm.pos];
    if (vm.neg >= 0) value -= y[vm.neg];
    solution.x[v] = value;
  }
  solution.status = LpStatus::kOptimal;
  solution.objective = lp.Evaluate(solution.x);
  return solution;
}

}  // namespace condisc
