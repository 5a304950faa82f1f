#ifndef GREENNET_TESTS_SUPPORT_LP_BRUTEFORCE_H
#define GREENNET_TESTS_SUPPORT_LP_BRUTEFORCE_H

// Reference LP solver by basis enumeration. Only valid for pointed feasible
// regions, i.e. every variable has a finite lower bound.

#include <cmath>
#include <optional>
#include <random>
#include <vector>

#include "greennet/lp.h"

namespace greennet::testing {

struct Hyperplane {
  std::vector<double> a;
  double b = 0;
};

// Solves the square system; nullopt when (numerically) singular.
inline std::optional<std::vector<double>> solve_square(
    std::vector<std::vector<double>> m, std::vector<double> rhs) {
  const std::size_t n = rhs.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(m[r][col]) > std::abs(m[pivot][col])) pivot = r;
    }
    if (std::abs(m[pivot][col]) < 1e-10) return std::nullopt;
    std::swap(m[pivot], m[col]);
    std::swap(rhs[pivot], rhs[col]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      double f = m[r][col] / m[col][col];
      if (f == 0) continue;
      for (std::size_t c = col; c < n; ++c) m[r][c] -= f * m[col][c];
      rhs[r] -= f * rhs[col];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = rhs[i] / m[i][i];
  return x;
}

// Unit vector spanning the null space of a (n-1) x n matrix of full row rank.
inline std::optional<std::vector<double>> null_direction(
    const std::vector<std::vector<double>>& rows, std::size_t n) {
  // Fix one coordinate to 1 and solve for the rest; try every choice.
  for (std::size_t fixed = 0; fixed < n; ++fixed) {
    std::vector<std::vector<double>> m;
    std::vector<double> rhs;
    for (const auto& row : rows) {
      std::vector<double> r;
      for (std::size_t j = 0; j < n; ++j) {
        if (j != fixed) r.push_back(row[j]);
      }
      m.push_back(std::move(r));
      rhs.push_back(-row[fixed]);
    }
    auto rest = n == 1 ? std::optional<std::vector<double>>(std::vector<double>{})
                       : solve_square(m, rhs);
    if (!rest) continue;
    std::vector<double> d(n);
    for (std::size_t j = 0, i = 0; j < n; ++j) {
      d[j] = j == fixed ? 1.0 : (*rest)[i++];
    }
    return d;
  }
  return std::nullopt;
}

template <typename F>
void for_each_subset(std::size_t total, std::size_t size, F&& f) {
  std::vector<std::size_t> pick(size);
  for (std::size_t i = 0; i < size; ++i) pick[i] = i;
  if (size > total) return;
  while (true) {
    f(pick);
    std::size_t i = size;
    while (i > 0 && pick[i - 1] == total - size + i - 1) --i;
    if (i == 0) return;
    ++pick[i - 1];
    for (std::size_t j = i; j < size; ++j) pick[j] = pick[j - 1] + 1;
  }
}

struct BruteForceResult {
  lp::LpStatus status = lp::LpStatus::kInfeasible;
  double objective = 0;
};

inline bool satisfies(const lp::LinearProgram& p, const std::vector<double>& x,
                      double tol) {
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (x[j] < p.lower[j] - tol || x[j] > p.upper[j] + tol) return false;
  }
  for (const lp::Constraint& c : p.constraints) {
    double lhs = 0;
    for (std::size_t j = 0; j < x.size(); ++j) lhs += c.coefficients[j] * x[j];
    switch (c.sense) {
      case lp::RowSense::kLessEqual:
        if (lhs > c.rhs + tol) return false;
        break;
      case lp::RowSense::kGreaterEqual:
        if (lhs < c.rhs - tol) return false;
        break;
      case lp::RowSense::kEqual:
        if (std::abs(lhs - c.rhs) > tol) return false;
        break;
    }
  }
  return true;
}

// Recession-cone membership of direction d.
inline bool is_recession_direction(const lp::LinearProgram& p,
                                   const std::vector<double>& d, double tol) {
  lp::LinearProgram homogeneous = p;
  for (auto& c : homogeneous.constraints) c.rhs = 0;
  for (std::size_t j = 0; j < d.size(); ++j) {
    homogeneous.lower[j] = std::isfinite(p.lower[j]) ? 0 : -lp::kInfinity;
    homogeneous.upper[j] = std::isfinite(p.upper[j]) ? 0 : lp::kInfinity;
  }
  return satisfies(homogeneous, d, tol);
}

inline BruteForceResult brute_force_lp(const lp::LinearProgram& p) {
  const std::size_t n = p.num_variables();
  std::vector<Hyperplane> planes;
  for (const auto& c : p.constraints) planes.push_back({c.coefficients, c.rhs});
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<double> e(n, 0.0);
    e[j] = 1.0;
    if (std::isfinite(p.lower[j])) planes.push_back({e, p.lower[j]});
    if (std::isfinite(p.upper[j])) planes.push_back({e, p.upper[j]});
  }

  BruteForceResult result;
  std::optional<double> best;
  for_each_subset(planes.size(), n, [&](const std::vector<std::size_t>& pick) {
    std::vector<std::vector<double>> m;
    std::vector<double> rhs;
    for (std::size_t i : pick) {
      m.push_back(planes[i].a);
      rhs.push_back(planes[i].b);
    }
    auto x = solve_square(m, rhs);
    if (!x || !satisfies(p, *x, 1e-9)) return;
    double value = 0;
    for (std::size_t j = 0; j < n; ++j) value += p.objective[j] * (*x)[j];
    if (!best || value < *best) best = value;
  });
  if (!best) return result;

  // Extreme rays of the recession cone come from n-1 tight hyperplanes.
  bool unbounded = false;
  for_each_subset(planes.size(), n - 1, [&](const std::vector<std::size_t>& pick) {
    if (unbounded) return;
    std::vector<std::vector<double>> rows;
    for (std::size_t i : pick) rows.push_back(planes[i].a);
    auto d = null_direction(rows, n);
    if (!d) return;
    for (double sign : {1.0, -1.0}) {
      std::vector<double> ray = *d;
      for (double& v : ray) v *= sign;
      double slope = 0;
      for (std::size_t j = 0; j < n; ++j) slope += p.objective[j] * ray[j];
      if (slope < -1e-9 && is_recession_direction(p, ray, 1e-9)) {
        unbounded = true;
      }
    }
  });
  result.status = unbounded ? lp::LpStatus::kUnbounded : lp::LpStatus::kOptimal;
  result.objective = *best;
  return result;
}

// Small LP with integer data and finite lower bounds.
inline lp::LinearProgram random_lp(std::mt19937_64& rng) {
  auto pick = [&](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };
  lp::LinearProgram p;
  const int n = pick(1, 4);
  const int m = pick(1, 4);
  for (int j = 0; j < n; ++j) {
    double lower = pick(0, 3) == 0 ? -pick(1, 2) : 0.0;
    double upper = pick(0, 3) == 0 ? lower + pick(0, 4) : lp::kInfinity;
    p.add_variable(pick(-3, 3), lower, upper);
  }
  for (int i = 0; i < m; ++i) {
    std::vector<double> a(n);
    for (double& v : a) v = pick(-3, 3);
    int s = pick(0, 5);
    auto sense = s < 3   ? lp::RowSense::kLessEqual
                 : s < 5 ? lp::RowSense::kGreaterEqual
                         : lp::RowSense::kEqual;
    p.add_constraint(std::move(a), sense, pick(-5, 6));
  }
  return p;
}

}  // namespace greennet::testing

#endif  // GREENNET_TESTS_SUPPORT_LP_BRUTEFORCE_H
