#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "reluspline/knot_grid.hpp"

namespace reluspline {

// Resolution parameter for the squaring cascade.  2^m breakpoints per unit
// interval; everything downstream scales as 4^{-m}.
inline void check_resolution(int m) {
  if (m < 1 || m > 20)
    throw std::invalid_argument("resolution m = " + std::to_string(m) +
                                " outside [1, 20]");
}

// sup |SQ_m(z) - z^2| on [0,1]; attained at odd multiples of 2^{-m-1}.
inline double sq_error_bound(int m) { return std::ldexp(1.0, -2 * m - 2); }

// sup |x2_m(x,y) - xy| on [0,1]^2 (loose by design; actual peak ~1.5*4^{-m}).
inline double prod2_error_bound(int m) { return std::ldexp(1.0, -2 * m + 2); }

// s-fold chained product.
inline double prod_error_bound(int m, int s) {
  return (s - 1) * prod2_error_bound(m);
}

// Additive slack allotted to order stage s of the basis-net induction:
// Delta_s = (8^s / 14) * 4^{-m}.  Stage outputs are renormalized against it,
// which keeps them in [0,1] while the induction
//   delta_{s+1} <= 4 eps + 2 delta_s + 2 Delta_s <= Delta_{s+1}
// (eps = prod2_error_bound) closes for s >= 2 because 8^s >= 56.
inline double stage_slack(int s, int m) {
  return std::ldexp(1.0, 3 * s - 2 * m) / 14.0;
}

// sup_i |B~_{i,k} - B_{i,k}|: zero for k = 2 (hats are exact ReLU combos),
// Delta_k above for k >= 3.
inline double basis_net_error_bound(int k, int m) {
  return k == 2 ? 0.0 : stage_slack(k, m);
}

// sup over tensor indices for the d-variate basis net:
// (d-1) chained products at 4*4^{-m} each plus d propagated basis errors,
// d * 8^k/14 <= 8^k for d <= 14.
inline double tensor_net_error_bound(int k, int d, int m) {
  return (4.0 * (d - 1) + std::ldexp(1.0, 3 * k)) * std::ldexp(1.0, -2 * m);
}

}  // namespace reluspline
