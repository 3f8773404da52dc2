#pragma once

#include <Eigen/Core>
#include <cmath>
#include <vector>

#include "reluspline/bspline_basis.hpp"
#include "reluspline/knot_grid.hpp"

namespace reluspline {

// Truncated-power block for one coordinate with grid (M, k):
//   x, x^2, ..., x^{k-1}, (x - t_1)_+^{k-1}, ..., (x - t_{M-1})_+^{k-1}
// (interior knots only; the constant is shared across coordinates and is not
// part of the block).  Size M + k - 2 = basis_size() - 1, and together with
// the constant these span the same order-k spline space as the B-spline basis.
inline int truncpower_block_size(const KnotGrid& g) { return g.M + g.k - 2; }

inline Eigen::VectorXd eval_truncpower_block(const KnotGrid& g, double x) {
  detail::check_unit_interval(x, "eval_truncpower_block");
  Eigen::VectorXd out(truncpower_block_size(g));
  int c = 0;
  double p = 1.0;
  for (int e = 1; e <= g.k - 1; ++e) {
    p *= x;
    out[c++] = p;
  }
  for (int j = 1; j <= g.M - 1; ++j) {
    const double r = x - g.knot(j);
    out[c++] = r > 0.0 ? std::pow(r, g.k - 1) : 0.0;
  }
  return out;
}

// Exact integrals over [0,1] of the block members, used to centralize fitted
// additive components:  int x^e = 1/(e+1),  int (x-t)_+^{k-1} = (1-t)^k / k.
inline Eigen::VectorXd truncpower_block_integrals(const KnotGrid& g) {
  Eigen::VectorXd out(truncpower_block_size(g));
  int c = 0;
  for (int e = 1; e <= g.k - 1; ++e) out[c++] = 1.0 / (e + 1);
  for (int j = 1; j <= g.M - 1; ++j)
    out[c++] = std::pow(1.0 - g.knot(j), g.k) / g.k;
  return out;
}

// Full additive design vector: leading 1, then one block per coordinate.
inline Eigen::VectorXd eval_truncpower_vector(const std::vector<KnotGrid>& grids,
                                              const Eigen::VectorXd& x) {
  if (static_cast<int>(grids.size()) != x.size())
    throw std::invalid_argument(
        "eval_truncpower_vector: point dimension does not match grid count");
  int total = 1;
  for (const auto& g : grids) total += truncpower_block_size(g);
  Eigen::VectorXd out(total);
  out[0] = 1.0;
  int at = 1;
  for (size_t j = 0; j < grids.size(); ++j) {
    out.segment(at, truncpower_block_size(grids[j])) =
        eval_truncpower_block(grids[j], x[static_cast<int>(j)]);
    at += truncpower_block_size(grids[j]);
  }
  return out;
}

}  // namespace reluspline
