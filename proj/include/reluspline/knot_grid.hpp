#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace reluspline {

// Cardinal knot grid on [0,1]: knots t_i = i/M for i = -k+1, ..., M+k-1.
// The k-1 knots extending past each end give every order-<=k spline supported
// on [0,1] a complete stencil, so the basis below is a partition of unity on
// the whole interval.
struct KnotGrid {
  int M = 0;                  // mesh cells in [0,1]; spacing h = 1/M
  int k = 0;                  // spline order (polynomial degree + 1)
  std::vector<double> knots;  // knots[j] = t_{j-k+1}, size M + 2k - 1

  double spacing() const { return 1.0 / static_cast<double>(M); }
  int first_index() const { return -k + 1; }
  int last_index() const { return M + k - 1; }
  int num_knots() const { return M + 2 * k - 1; }

  // Number of order-k B-splines B_{i,k}, i = -k+1, ..., M-1.
  int basis_size() const { return M + k - 1; }

  double knot(int i) const {
    if (i < first_index() || i > last_index())
      throw std::out_of_range("KnotGrid::knot: index " + std::to_string(i) +
                              " outside [" + std::to_string(first_index()) +
                              ", " + std::to_string(last_index()) + "]");
    return knots[static_cast<size_t>(i + k - 1)];
  }
};

inline KnotGrid make_cardinal_grid(int M, int k) {
  if (M < 2)
    throw std::invalid_argument("make_cardinal_grid: M must be >= 2, got " +
                                std::to_string(M));
  if (k < 2)
    throw std::invalid_argument("make_cardinal_grid: k must be >= 2, got " +
                                std::to_string(k));
  KnotGrid g;
  g.M = M;
  g.k = k;
  g.knots.resize(static_cast<size_t>(M + 2 * k - 1));
  for (int i = -k + 1; i <= M + k - 1; ++i)
    g.knots[static_cast<size_t>(i + k - 1)] = static_cast<double>(i) / M;
  return g;
}

}  // namespace reluspline
