#include "greennet/lp.h"

#include <gtest/gtest.h>

#include <random>

#include "support/lp_bruteforce.h"

namespace greennet::lp {
namespace {

TEST(LpTest, TwoVariableMaximization) {
  // max x + y s.t. x + 2y <= 4, 3x + y <= 6; optimum at (8/5, 6/5).
  LinearProgram p;
  p.add_variable(-1);
  p.add_variable(-1);
  p.add_constraint({1, 2}, RowSense::kLessEqual, 4);
  p.add_constraint({3, 1}, RowSense::kLessEqual, 6);
  LpSolution s = solve_lp(p);
  ASSERT_EQ(s.status, LpStatus::kOptimal);
  EXPECT_NEAR(s.objective, -2.8, 1e-12);
  EXPECT_NEAR(s.values[0], 1.6, 1e-12);
  EXPECT_NEAR(s.values[1], 1.2, 1e-12);
}

TEST(LpTest, Infeasible) {
  LinearProgram p;
  p.add_variable(1);
  p.add_constraint({1}, RowSense::kGreaterEqual, 2);
  p.add_constraint({1}, RowSense::kLessEqual, 1);
  EXPECT_EQ(solve_lp(p).status, LpStatus::kInfeasible);
}

TEST(LpTest, Unbounded) {
  LinearProgram p;
  p.add_variable(-1);
  p.add_variable(0);
  p.add_constraint({1, -1}, RowSense::kLessEqual, 1);
  EXPECT_EQ(solve_lp(p).status, LpStatus::kUnbounded);
}

TEST(LpTest, EqualityAndGreaterRows) {
  // min 2x + 3y s.t. x + y = 4, x >= 1, y >= 1.5 -> x = 2.5, y = 1.5.
  LinearProgram p;
  p.add_variable(2);
  p.add_variable(3);
  p.add_constraint({1, 1}, RowSense::kEqual, 4);
  p.add_constraint({1, 0}, RowSense::kGreaterEqual, 1);
  p.add_constraint({0, 1}, RowSense::kGreaterEqual, 1.5);
  LpSolution s = solve_lp(p);
  ASSERT_EQ(s.status, LpStatus::kOptimal);
  EXPECT_NEAR(s.objective, 9.5, 1e-12);
  EXPECT_NEAR(s.values[0], 2.5, 1e-12);
}

TEST(LpTest, FreeAndBoundedVariables) {
  // min x with x free and x >= -3 as a row; min -y with y in [-2, 5].
  LinearProgram p;
  p.add_variable(1, -kInfinity, kInfinity);
  p.add_variable(-1, -2, 5);
  p.add_constraint({1, 0}, RowSense::kGreaterEqual, -3);
  LpSolution s = solve_lp(p);
  ASSERT_EQ(s.status, LpStatus::kOptimal);
  EXPECT_NEAR(s.values[0], -3, 1e-12);
  EXPECT_NEAR(s.values[1], 5, 1e-12);
  EXPECT_NEAR(s.objective, -8, 1e-12);
}

TEST(LpTest, UpperBoundOnlyVariable) {
  LinearProgram p;
  p.add_variable(-1, -kInfinity, 2);
  LpSolution s = solve_lp(p);
  ASSERT_EQ(s.status, LpStatus::kOptimal);
  EXPECT_NEAR(s.values[0], 2, 1e-12);
}

TEST(LpTest, BealeCyclingExampleTerminates) {
  // Classic degenerate LP on which the textbook rule cycles; optimum -5/4.
  LinearProgram p;
  p.add_variable(-0.75);
  p.add_variable(20);
  p.add_variable(-0.5);
  p.add_variable(6);
  p.add_constraint({0.25, -8, -1, 9}, RowSense::kLessEqual, 0);
  p.add_constraint({0.5, -12, -0.5, 3}, RowSense::kLessEqual, 0);
  p.add_constraint({0, 0, 1, 0}, RowSense::kLessEqual, 1);
  LpSolution s = solve_lp(p);
  ASSERT_EQ(s.status, LpStatus::kOptimal);
  EXPECT_NEAR(s.objective, -1.25, 1e-12);
}

TEST(LpTest, RedundantEqualities) {
  LinearProgram p;
  p.add_variable(1);
  p.add_variable(1);
  p.add_constraint({1, 1}, RowSense::kEqual, 2);
  p.add_constraint({2, 2}, RowSense::kEqual, 4);
  p.add_constraint({1, -1}, RowSense::kEqual, 0);
  LpSolution s = solve_lp(p);
  ASSERT_EQ(s.status, LpStatus::kOptimal);
  EXPECT_NEAR(s.values[0], 1, 1e-12);
  EXPECT_NEAR(s.values[1], 1, 1e-12);
}

TEST(LpTest, EmptyProgram) {
  LinearProgram p;
  LpSolution s = solve_lp(p);
  EXPECT_EQ(s.status, LpStatus::kOptimal);
  EXPECT_EQ(s.objective, 0);
}

TEST(LpTest, InconsistentBoundsAreInfeasible) {
  LinearProgram p;
  p.add_variable(1, 2, 1);
  EXPECT_EQ(solve_lp(p).status, LpStatus::kInfeasible);
}

TEST(LpTest, RejectsMalformedInput) {
  LinearProgram p;
  p.add_variable(1);
  p.constraints.push_back({{1, 2}, RowSense::kLessEqual, 1});
  EXPECT_THROW(solve_lp(p), std::invalid_argument);
  LinearProgram q;
  q.add_variable(std::nan(""));
  EXPECT_THROW(solve_lp(q), std::invalid_argument);
}

TEST(LpTest, StatusNames) {
  EXPECT_EQ(lp_status_name(LpStatus::kOptimal), "optimal");
  EXPECT_EQ(lp_status_name(LpStatus::kInfeasible), "infeasible");
  EXPECT_EQ(lp_status_name(LpStatus::kUnbounded), "unbounded");
}

TEST(LpPropertyTest, MatchesBasisEnumeration) {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 300; ++i) {
    LinearProgram p = testing::random_lp(rng);
    LpSolution simplex = solve_lp(p);
    testing::BruteForceResult brute = testing::brute_force_lp(p);
    ASSERT_EQ(simplex.status, brute.status) << "case " << i;
    if (brute.status == LpStatus::kOptimal) {
      EXPECT_NEAR(simplex.objective, brute.objective, 1e-7) << "case " << i;
      EXPECT_TRUE(testing::satisfies(p, simplex.values, 1e-7)) << "case " << i;
    }
  }
}

TEST(LpPropertyTest, Deterministic) {
  std::mt19937_64 rng(77);
  for (int i = 0; i < 50; ++i) {
    LinearProgram p = testing::random_lp(rng);
    LpSolution a = solve_lp(p), b = solve_lp(p);
    EXPECT_EQ(a.status, b.status);
    EXPECT_EQ(a.values, b.values);
    EXPECT_EQ(a.pivots, b.pivots);
  }
}

}  // namespace
}  // namespace greennet::lp
