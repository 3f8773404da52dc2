#pragma once

#include <Eigen/Core>
#include <cmath>
#include <vector>

#include "reluspline/approx_bounds.hpp"
#include "reluspline/bspline_basis.hpp"
#include "reluspline/knot_grid.hpp"

namespace reluspline {

// Closed-form scalar evaluation of the constructed networks.  Matrix-free
// but arithmetically parallel to the layer structure, so values agree with
// the nets to floating-point roundoff (~1e-15); used as a test oracle and as
// the fast path for simulation statistics (always cross-checked against the
// actual nets before use).
namespace closed_form {

inline double relu(double z) { return z > 0.0 ? z : 0.0; }

// Sawtooth tower g_s on [0,1]: 2^{s-1} teeth of unit height.
inline double teeth_value(int s, double x) {
  const double w = std::ldexp(x, s - 1);
  const double u = w - std::floor(w);
  return 2.0 * std::min(u, 1.0 - u);
}

// Piecewise-linear interpolant of z^2 at the dyadics j 2^{-m}: on cell j,
// SQ(z) = ((2j+1) z - j(j+1) 2^{-m}) 2^{-m}.
inline double sq_value(double z, int m) {
  const double T = std::ldexp(1.0, m);
  double j = std::floor(z * T);
  if (j > T - 1.0) j = T - 1.0;
  if (j < 0.0) j = 0.0;
  return ((2.0 * j + 1.0) * z - j * (j + 1.0) / T) / T;
}

inline double prod2_value(double x, double y, int m) {
  const double pm = std::ldexp(1.0, -2 * m);
  return (2.0 * sq_value((x + y) / 2.0, m) - sq_value(x, m) / 2.0 -
          sq_value(y, m) / 2.0 + pm) /
         (1.0 + 2.0 * pm);
}

// Left-to-right chained product, the order build_prod_s uses.
inline double prod_chain_value(const std::vector<double>& xs, int m) {
  double p = prod2_value(xs.at(0), xs.at(1), m);
  for (size_t j = 2; j < xs.size(); ++j) p = prod2_value(p, xs[j], m);
  return p;
}

// All B~_{i,k} values on one axis, indexed j = i + k - 1.
inline Eigen::VectorXd basis_net_values(const KnotGrid& g, int m, double x) {
  const int k = g.k;
  const int M = g.M;
  const int first = g.first_index();
  const auto hat = [&](int i) {
    const double d1 = g.knot(i + 1) - g.knot(i);
    const double d2 = g.knot(i + 2) - g.knot(i + 1);
    const double c1 = 1.0 / d1;
    const double c2 = -(d1 + d2) / (d1 * d2);
    const double c3 = 1.0 / d2;
    return c1 * relu(x - g.knot(i)) + c2 * relu(x - g.knot(i + 1)) +
           c3 * relu(x - g.knot(i + 2));
  };
  int R = M + 2 * k - 3;  // order-2 count
  Eigen::VectorXd cur(R);
  for (int ii = 0; ii < R; ++ii) cur[ii] = hat(first + ii);
  const double eps = prod2_error_bound(m);
  for (int s = 2; s <= k - 1; ++s) {
    const int R_next = M + 2 * k - s - 2;
    const double ds = stage_slack(s, m);
    const double invDD = 1.0 / (1.0 + 4.0 * eps + 4.0 * ds);
    const double num_bias = 2.0 * eps + 2.0 * ds;
    Eigen::VectorXd nxt(R_next);
    for (int ii = 0; ii < R_next; ++ii) {
      const int i = first + ii;
      const double da = g.knot(i + s) - g.knot(i);
      const double a =
          (relu(x - g.knot(i)) - relu(x - g.knot(i + s))) * (1.0 / da);
      const double db = g.knot(i + s + 1) - g.knot(i + 1);
      const double b =
          1.0 + (relu(x - g.knot(i + 1)) * (-1.0 / db) +
                 relu(x - g.knot(i + s + 1)) * (1.0 / db));
      nxt[ii] = (prod2_value(a, cur[ii], m) + prod2_value(b, cur[ii + 1], m) +
                 num_bias) *
                invDD;
    }
    cur.swap(nxt);
  }
  return cur;
}

// All tensor entries at x in [0,1]^d, first coordinate slowest, products
// chained axis by axis exactly as the tensor net's stages do.
inline Eigen::VectorXd tensor_net_values(const KnotGrid& g, int m,
                                         const Eigen::VectorXd& x) {
  const int d = static_cast<int>(x.size());
  const long R = g.basis_size();
  std::vector<Eigen::VectorXd> axis(static_cast<size_t>(d));
  for (int c = 0; c < d; ++c)
    axis[static_cast<size_t>(c)] = basis_net_values(g, m, x[c]);
  if (d == 1) return axis[0];
  long q = 1;
  for (int c = 0; c < d; ++c) q *= R;
  Eigen::VectorXd out(q);
  std::vector<long> idx(static_cast<size_t>(d));
  for (long flat = 0; flat < q; ++flat) {
    long rem = flat;
    for (int c = d - 1; c >= 0; --c) {
      idx[static_cast<size_t>(c)] = rem % R;
      rem /= R;
    }
    double p = prod2_value(axis[0][idx[0]], axis[1][idx[1]], m);
    for (int c = 2; c < d; ++c)
      p = prod2_value(p, axis[static_cast<size_t>(c)][idx[static_cast<size_t>(c)]], m);
    out[flat] = p;
  }
  return out;
}

inline double fnet_value(const Eigen::VectorXd& coeffs, const KnotGrid& g,
                         int m, const Eigen::VectorXd& x) {
  return coeffs.dot(tensor_net_values(g, m, x));
}

}  // namespace closed_form
}  // namespace reluspline
