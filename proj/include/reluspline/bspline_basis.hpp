#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "reluspline/knot_grid.hpp"

namespace reluspline {

namespace detail {

inline void check_unit_interval(double x, const char* who) {
  // Also rejects NaN (the negated comparison fails).
  if (!(x >= 0.0 && x <= 1.0))
    throw std::domain_error(std::string(who) + ": x = " + std::to_string(x) +
                            " outside [0,1]");
}

}  // namespace detail

// Recursion weights for the order-raising identity
//   B_{i,s+1} = a_{i,s} B_{i,s} + b_{i,s} B_{i+1,s}.
// Both are clipped to [0,1] outside the ramp interval; the clipped regions are
// where the partner B-spline vanishes, so the identity is unaffected, and the
// clipped forms are exactly what a difference of two ReLU ramps realizes.
inline double ramp_up(const KnotGrid& g, int i, int s, double x) {
  const double lo = g.knot(i);
  const double hi = g.knot(i + s);
  if (x <= lo) return 0.0;
  if (x >= hi) return 1.0;
  return (x - lo) / (hi - lo);
}

inline double ramp_down(const KnotGrid& g, int i, int s, double x) {
  return 1.0 - ramp_up(g, i + 1, s, x);
}

// Order-2 (hat) B-spline on knots t_i, t_{i+1}, t_{i+2}.
inline double eval_hat(const KnotGrid& g, int i, double x) {
  const double t0 = g.knot(i);
  const double t1 = g.knot(i + 1);
  const double t2 = g.knot(i + 2);
  if (x <= t0 || x >= t2) return 0.0;
  if (x <= t1) return (x - t0) / (t1 - t0);
  return (t2 - x) / (t2 - t1);
}

// B_{i,s}(x) for 2 <= s <= k, i = -k+1, ..., M+k-s-1, x in [0,1].
inline double eval_bspline(const KnotGrid& g, int i, int s, double x) {
  if (s < 2 || s > g.k)
    throw std::invalid_argument("eval_bspline: order s = " + std::to_string(s) +
                                " outside [2, k = " + std::to_string(g.k) + "]");
  if (i < g.first_index() || i > g.M + g.k - s - 1)
    throw std::out_of_range("eval_bspline: index i = " + std::to_string(i) +
                            " outside [" + std::to_string(g.first_index()) +
                            ", " + std::to_string(g.M + g.k - s - 1) +
                            "] for order " + std::to_string(s));
  detail::check_unit_interval(x, "eval_bspline");
  if (s == 2) return eval_hat(g, i, x);
  return ramp_up(g, i, s - 1, x) * eval_bspline(g, i, s - 1, x) +
         ramp_down(g, i, s - 1, x) * eval_bspline(g, i + 1, s - 1, x);
}

// All order-k basis values at x, indexed j = i + k - 1 for i = -k+1, ..., M-1.
// Only the k splines whose support covers x's cell are evaluated.
inline Eigen::VectorXd eval_basis_vector(const KnotGrid& g, double x) {
  detail::check_unit_interval(x, "eval_basis_vector");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(g.basis_size());
  const int cell = std::min(static_cast<int>(std::floor(x * g.M)), g.M - 1);
  const int lo = std::max(g.first_index(), cell - g.k + 1);
  const int hi = std::min(g.M - 1, cell);
  for (int i = lo; i <= hi; ++i)
    out[i + g.k - 1] = eval_bspline(g, i, g.k, x);
  return out;
}

// ---- Tensor products ----------------------------------------------------
//
// The tensor basis over [0,1]^d uses the same grid on every axis.  Entries
// are ordered lexicographically with the FIRST coordinate's index slowest:
// flat = ((j_1 * R + j_2) * R + ...) * R + j_d, with R = basis_size() and
// j_c = i_c + k - 1.

inline long tensor_size(const KnotGrid& g, int d) {
  if (d < 1) throw std::invalid_argument("tensor_size: d must be >= 1");
  long q = 1;
  for (int c = 0; c < d; ++c) q *= g.basis_size();
  return q;
}

inline long tensor_flat_index(const KnotGrid& g, const std::vector<int>& multi) {
  const long R = g.basis_size();
  long flat = 0;
  for (int i : multi) {
    const int j = i + g.k - 1;
    if (j < 0 || j >= R)
      throw std::out_of_range("tensor_flat_index: index " + std::to_string(i) +
                              " outside basis range");
    flat = flat * R + j;
  }
  return flat;
}

inline std::vector<int> tensor_multi_index(const KnotGrid& g, int d, long flat) {
  const long R = g.basis_size();
  std::vector<int> multi(static_cast<size_t>(d));
  for (int c = d - 1; c >= 0; --c) {
    multi[static_cast<size_t>(c)] = static_cast<int>(flat % R) - (g.k - 1);
    flat /= R;
  }
  return multi;
}

inline Eigen::VectorXd eval_tensor_vector(const KnotGrid& g,
                                          const Eigen::VectorXd& x) {
  const int d = static_cast<int>(x.size());
  if (d < 1) throw std::invalid_argument("eval_tensor_vector: empty point");
  const long R = g.basis_size();
  std::vector<Eigen::VectorXd> axis(static_cast<size_t>(d));
  for (int c = 0; c < d; ++c)
    axis[static_cast<size_t>(c)] = eval_basis_vector(g, x[c]);
  const long q = tensor_size(g, d);
  Eigen::VectorXd out(q);
  for (long flat = 0; flat < q; ++flat) {
    long rem = flat;
    double p = 1.0;
    for (int c = d - 1; c >= 0; --c) {
      p *= axis[static_cast<size_t>(c)][rem % R];
      rem /= R;
    }
    out[flat] = p;
  }
  return out;
}

}  // namespace reluspline
