#ifndef GREENNET_LP_H
#define GREENNET_LP_H

#include <cstddef>
#include <limits>
#include <string_view>
#include <vector>

namespace greennet::lp {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class RowSense { kLessEqual, kEqual, kGreaterEqual };

struct Constraint {
  std::vector<double> coefficients;  // one per variable
  RowSense sense = RowSense::kLessEqual;
  double rhs = 0;
};

// minimize objective . x
// subject to  constraints, lower <= x <= upper.
// Lower bounds default to 0 and may be -infinity; upper bounds default to
// +infinity.
struct LinearProgram {
  std::vector<double> objective;
  std::vector<Constraint> constraints;
  std::vector<double> lower;
  std::vector<double> upper;

  std::size_t num_variables() const { return objective.size(); }

  std::size_t add_variable(double cost, double lower_bound = 0,
                           double upper_bound = kInfinity);
  // Coefficient vector is zero-padded to the current variable count.
  void add_constraint(std::vector<double> coefficients, RowSense sense,
                      double rhs);
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

std::string_view lp_status_name(LpStatus status);

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  std::vector<double> values;  // meaningful when optimal
  double objective = 0;
  std::size_t pivots = 0;
};

// Primal simplex on a dense tableau. Phase one finds a basis with artificial
// variables; both phases use Bland's rule, so the result is deterministic.
// Throws std::invalid_argument on dimension mismatch, non-finite data or
// inconsistent bounds.
LpSolution solve_lp(const LinearProgram& lp);

}  // namespace greennet::lp

#endif  // GREENNET_LP_H
