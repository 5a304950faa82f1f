#include "greennet/lp.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace greennet::lp {
namespace {

constexpr double kPivotTolerance = 1e-9;
constexpr double kCostTolerance = 1e-10;
constexpr std::size_t kMaxPivots = 200000;

// How an original variable is expressed through non-negative columns.
struct VariableMap {
  enum class Kind { kShifted, kMirrored, kFree } kind = Kind::kShifted;
  std::size_t column = 0;    // x = offset + y   |  x = offset - y  |  y+ ...
  std::size_t negative = 0;  // kFree only: x = y+ - y-
  double offset = 0;
};

enum class ColumnKind { kStructural, kSlack, kArtificial };

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), cells_(rows * (cols + 1), 0.0),
        basis_(rows, 0), reduced_(cols + 1, 0.0) {}

  double& at(std::size_t r, std::size_t c) { return cells_[r * (cols_ + 1) + c]; }
  double at(std::size_t r, std::size_t c) const {
    return cells_[r * (cols_ + 1) + c];
  }
  double& rhs(std::size_t r) { return at(r, cols_); }
  double rhs(std::size_t r) const { return at(r, cols_); }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::vector<std::size_t>& basis() { return basis_; }
  std::size_t pivots() const { return pivots_; }

  void set_costs(const std::vector<double>& cost) {
    for (std::size_t c = 0; c <= cols_; ++c) {
      reduced_[c] = c < cols_ ? cost[c] : 0.0;
    }
    for (std::size_t r = 0; r < rows_; ++r) {
      double cb = cost[basis_[r]];
      if (cb == 0) continue;
      for (std::size_t c = 0; c <= cols_; ++c) reduced_[c] -= cb * at(r, c);
    }
  }

  // Current objective value for the costs given to set_costs.
  double objective() const { return -reduced_[cols_]; }

  void pivot(std::size_t row, std::size_t col) {
    ++pivots_;
    if (pivots_ > kMaxPivots) {
      throw std::runtime_error("simplex pivot limit exceeded");
    }
    double p = at(row, col);
    for (std::size_t c = 0; c <= cols_; ++c) at(row, c) /= p;
    at(row, col) = 1.0;
    for (std::size_t r = 0; r < rows_; ++r) {
      if (r == row) continue;
      double factor = at(r, col);
      if (factor == 0) continue;
      for (std::size_t c = 0; c <= cols_; ++c) at(r, c) -= factor * at(row, c);
      at(r, col) = 0.0;
    }
    double factor = reduced_[col];
    if (factor != 0) {
      for (std::size_t c = 0; c <= cols_; ++c) {
        reduced_[c] -= factor * at(row, c);
      }
      reduced_[col] = 0.0;
    }
    basis_[row] = col;
  }

  // Bland's rule: lowest-index improving column, lowest-index basic variable
  // among tied ratios. Returns false when unbounded.
  bool optimize(const std::vector<bool>& allowed) {
    while (true) {
      std::size_t entering = cols_;
      for (std::size_t c = 0; c < cols_; ++c) {
        if (allowed[c] && reduced_[c] < -kCostTolerance) {
          entering = c;
          break;
        }
      }
      if (entering == cols_) return true;

      std::size_t leaving = rows_;
      double best_ratio = 0;
      for (std::size_t r = 0; r < rows_; ++r) {
        double a = at(r, entering);
        if (a <= kPivotTolerance) continue;
        double ratio = rhs(r) / a;
        if (leaving == rows_ || ratio < best_ratio - 1e-12) {
          best_ratio = ratio;
          leaving = r;
        } else if (ratio <= best_ratio + 1e-12 &&
                   basis_[r] < basis_[leaving]) {
          leaving = r;
        }
      }
      if (leaving == rows_) return false;
      pivot(leaving, entering);
    }
  }

  void erase_row(std::size_t row) {
    auto begin = cells_.begin() + static_cast<std::ptrdiff_t>(row * (cols_ + 1));
    cells_.erase(begin, begin + static_cast<std::ptrdiff_t>(cols_ + 1));
    basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(row));
    --rows_;
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> cells_;
  std::vector<std::size_t> basis_;
  std::vector<double> reduced_;  // last entry holds -objective
  std::size_t pivots_ = 0;
};

void check_input(const LinearProgram& lp) {
  const std::size_t n = lp.num_variables();
  if (!lp.lower.empty() && lp.lower.size() != n) {
    throw std::invalid_argument("solve_lp: lower bound count mismatch");
  }
  if (!lp.upper.empty() && lp.upper.size() != n) {
    throw std::invalid_argument("solve_lp: upper bound count mismatch");
  }
  for (double c : lp.objective) {
    if (!std::isfinite(c)) {
      throw std::invalid_argument("solve_lp: non-finite objective coefficient");
    }
  }
  for (const Constraint& row : lp.constraints) {
    if (row.coefficients.size() != n) {
      throw std::invalid_argument("solve_lp: constraint width mismatch");
    }
    if (!std::isfinite(row.rhs)) {
      throw std::invalid_argument("solve_lp: non-finite right-hand side");
    }
    for (double a : row.coefficients) {
      if (!std::isfinite(a)) {
        throw std::invalid_argument("solve_lp: non-finite coefficient");
      }
    }
  }
  for (double l : lp.lower) {
    if (std::isnan(l) || l == kInfinity) {
      throw std::invalid_argument("solve_lp: invalid lower bound");
    }
  }
  for (double u : lp.upper) {
    if (std::isnan(u) || u == -kInfinity) {
      throw std::invalid_argument("solve_lp: invalid upper bound");
    }
  }
}

struct StandardRow {
  std::vector<double> coefficients;  // over non-negative columns
  bool less_equal = true;
  double rhs = 0;
};

}  // namespace

std::size_t LinearProgram::add_variable(double cost, double lower_bound,
                                        double upper_bound) {
  std::size_t n = objective.size();
  if (lower.size() < n) lower.resize(n, 0.0);
  if (upper.size() < n) upper.resize(n, kInfinity);
  objective.push_back(cost);
  lower.push_back(lower_bound);
  upper.push_back(upper_bound);
  return n;
}

void LinearProgram::add_constraint(std::vector<double> coefficients,
                                   RowSense sense, double rhs) {
  coefficients.resize(objective.size(), 0.0);
  constraints.push_back({std::move(coefficients), sense, rhs});
}

std::string_view lp_status_name(LpStatus status) {
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

LpSolution solve_lp(const LinearProgram& lp) {
  check_input(lp);
  const std::size_t n = lp.num_variables();
  auto lower_of = [&](std::size_t j) {
    return lp.lower.empty() ? 0.0 : lp.lower[j];
  };
  auto upper_of = [&](std::size_t j) {
    return lp.upper.empty() ? kInfinity : lp.upper[j];
  };

  LpSolution solution;
  for (std::size_t j = 0; j < n; ++j) {
    if (lower_of(j) > upper_of(j)) {
      solution.status = LpStatus::kInfeasible;
      return solution;
    }
  }

  // Map every variable onto non-negative columns.
  std::vector<VariableMap> maps(n);
  std::size_t structural = 0;
  for (std::size_t j = 0; j < n; ++j) {
    VariableMap& m = maps[j];
    double lo = lower_of(j), hi = upper_of(j);
    if (std::isfinite(lo)) {
      m.kind = VariableMap::Kind::kShifted;
      m.offset = lo;
      m.column = structural++;
    } else if (std::isfinite(hi)) {
      m.kind = VariableMap::Kind::kMirrored;
      m.offset = hi;
      m.column = structural++;
    } else {
      m.kind = VariableMap::Kind::kFree;
      m.column = structural++;
      m.negative = structural++;
    }
  }

  std::vector<StandardRow> rows;
  auto add_row = [&](const std::vector<double>& a, RowSense sense, double b) {
    StandardRow row;
    row.coefficients.assign(structural, 0.0);
    double rhs = b;
    for (std::size_t j = 0; j < n; ++j) {
      if (a[j] == 0) continue;
      const VariableMap& m = maps[j];
      switch (m.kind) {
        case VariableMap::Kind::kShifted:
          row.coefficients[m.column] += a[j];
          rhs -= a[j] * m.offset;
          break;
        case VariableMap::Kind::kMirrored:
          row.coefficients[m.column] -= a[j];
          rhs -= a[j] * m.offset;
          break;
        case VariableMap::Kind::kFree:
          row.coefficients[m.column] += a[j];
          row.coefficients[m.negative] -= a[j];
          break;
      }
    }
    // Equalities become a <= and a >= pair.
    auto push = [&](bool less_equal) {
      StandardRow r = row;
      r.rhs = rhs;
      r.less_equal = less_equal;
      if (r.rhs < 0 || (r.rhs == 0 && !r.less_equal)) {
        for (double& c : r.coefficients) c = -c;
        r.rhs = -r.rhs;
        r.less_equal = !r.less_equal;
      }
      rows.push_back(std::move(r));
    };
    if (sense != RowSense::kGreaterEqual) push(true);
    if (sense != RowSense::kLessEqual) push(false);
  };
  for (const Constraint& c : lp.constraints) add_row(c.coefficients, c.sense, c.rhs);
  for (std::size_t j = 0; j < n; ++j) {
    const VariableMap& m = maps[j];
    if (m.kind == VariableMap::Kind::kShifted && std::isfinite(upper_of(j))) {
      std::vector<double> a(n, 0.0);
      a[j] = 1.0;
      add_row(a, RowSense::kLessEqual, upper_of(j));
    }
  }

  // Columns: structural | one slack or surplus per row | artificials.
  const std::size_t m = rows.size();
  std::size_t artificials = 0;
  for (const StandardRow& r : rows) artificials += r.less_equal ? 0 : 1;
  const std::size_t cols = structural + m + artificials;
  std::vector<ColumnKind> kinds(cols, ColumnKind::kStructural);
  Tableau tableau(m, cols);
  std::size_t next_artificial = structural + m;
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < structural; ++c) {
      tableau.at(r, c) = rows[r].coefficients[c];
    }
    tableau.rhs(r) = rows[r].rhs;
    std::size_t slack = structural + r;
    kinds[slack] = ColumnKind::kSlack;
    if (rows[r].less_equal) {
      tableau.at(r, slack) = 1.0;
      tableau.basis()[r] = slack;
    } else {
      tableau.at(r, slack) = -1.0;
      kinds[next_artificial] = ColumnKind::kArtificial;
      tableau.at(r, next_artificial) = 1.0;
      tableau.basis()[r] = next_artificial++;
    }
  }

  std::vector<bool> allowed(cols, true);
  if (artificials > 0) {
    std::vector<double> phase1(cols, 0.0);
    double scale = 1.0;
    for (std::size_t c = 0; c < cols; ++c) {
      if (kinds[c] == ColumnKind::kArtificial) phase1[c] = 1.0;
    }
    for (std::size_t r = 0; r < m; ++r) scale = std::max(scale, rows[r].rhs);
    tableau.set_costs(phase1);
    tableau.optimize(allowed);
    if (tableau.objective() > 1e-9 * scale) {
      solution.status = LpStatus::kInfeasible;
      solution.pivots = tableau.pivots();
      return solution;
    }
    // Drive zero-level artificials out of the basis; drop redundant rows.
    for (std::size_t r = 0; r < tableau.rows();) {
      if (kinds[tableau.basis()[r]] != ColumnKind::kArtificial) {
        ++r;
        continue;
      }
      std::size_t replacement = cols;
      for (std::size_t c = 0; c < cols; ++c) {
        if (kinds[c] != ColumnKind::kArtificial &&
            std::abs(tableau.at(r, c)) > kPivotTolerance) {
          replacement = c;
          break;
        }
      }
      if (replacement == cols) {
        tableau.erase_row(r);
      } else {
        tableau.pivot(r, replacement);
        ++r;
      }
    }
    for (std::size_t c = 0; c < cols; ++c) {
      if (kinds[c] == ColumnKind::kArtificial) allowed[c] = false;
    }
  }

  std::vector<double> phase2(cols, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const VariableMap& map = maps[j];
    switch (map.kind) {
      case VariableMap::Kind::kShifted:
        phase2[map.column] += lp.objective[j];
        break;
      case VariableMap::Kind::kMirrored:
        phase2[map.column] -= lp.objective[j];
        break;
      case VariableMap::Kind::kFree:
        phase2[map.column] += lp.objective[j];
        phase2[map.negative] -= lp.objective[j];
        break;
    }
  }
  tableau.set_costs(phase2);
  bool bounded = tableau.optimize(allowed);
  solution.pivots = tableau.pivots();
  if (!bounded) {
    solution.status = LpStatus::kUnbounded;
    return solution;
  }

  std::vector<double> y(cols, 0.0);
  for (std::size_t r = 0; r < tableau.rows(); ++r) {
    y[tableau.basis()[r]] = std::max(0.0, tableau.rhs(r));
  }
  solution.values.resize(n);
  solution.objective = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const VariableMap& map = maps[j];
    double x = 0;
    switch (map.kind) {
      case VariableMap::Kind::kShifted:
        x = map.offset + y[map.column];
        break;
      case VariableMap::Kind::kMirrored:
        x = map.offset - y[map.column];
        break;
      case VariableMap::Kind::kFree:
        x = y[map.column] - y[map.negative];
        break;
    }
    solution.values[j] = x;
    solution.objective += lp.objective[j] * x;
  }
  solution.status = LpStatus::kOptimal;
  return solution;
}

}  // namespace greennet::lp
