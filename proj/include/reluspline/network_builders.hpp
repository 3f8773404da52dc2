#pragma once

#include <Eigen/Core>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "reluspline/approx_bounds.hpp"
#include "reluspline/bspline_basis.hpp"
#include "reluspline/knot_grid.hpp"
#include "reluspline/network_ops.hpp"
#include "reluspline/relu_network.hpp"

namespace reluspline {

// ---- sawtooth tower -----------------------------------------------------

// g_s = g o ... o g with g(z) = 2 sigma(z) - 4 sigma(z - 1/2) + 2 sigma(z - 1):
// s layers of width 3 on [0,1].
inline ReluNetwork build_teeth(int s) {
  if (s < 1) throw std::invalid_argument("build_teeth: s must be >= 1");
  std::vector<Layer> hidden;
  Eigen::VectorXd shifts(3);
  shifts << 0.0, 0.5, 1.0;
  Eigen::RowVector3d tooth(2.0, -4.0, 2.0);
  for (int l = 0; l < s; ++l) {
    Layer lay;
    if (l == 0) {
      lay.W = Eigen::MatrixXd::Ones(3, 1);
    } else {
      lay.W = Eigen::MatrixXd(3, 3);
      for (int r = 0; r < 3; ++r) lay.W.row(r) = tooth;
    }
    lay.v = shifts;
    hidden.push_back(std::move(lay));
  }
  Eigen::MatrixXd W_out(1, 3);
  W_out << 2.0, -4.0, 2.0;
  return ReluNetwork(1, std::move(hidden), std::move(W_out));
}

// ---- squaring cascade ---------------------------------------------------

// Piecewise-linear interpolant of z^2 at the dyadics j 2^{-m}, built by
// peeling one sawtooth per stage: f_s = f_{s-1} - g_s / 4^s.  Depth 2m with
// every hidden layer of width 4: split layers hold the three tooth legs plus
// the running remainder, merge layers hold the tooth value, the remainder,
// and the next stage's two shifted legs.  All breakpoint arithmetic is
// dyadic, so the net reproduces z^2 exactly (in floating point) at every
// breakpoint.
inline ReluNetwork build_sq(int m) {
  check_resolution(m);
  std::vector<Layer> hidden;
  for (int s = 1; s <= m; ++s) {
    Layer split;
    if (s == 1) {
      split.W = Eigen::MatrixXd::Ones(4, 1);
      split.v = Eigen::VectorXd(4);
      split.v << 0.0, 0.5, 1.0, 0.0;
    } else {
      // Previous merge already holds (g, f, g - 1/2, g - 1); re-select.
      split.W = Eigen::MatrixXd::Zero(4, 4);
      split.W(0, 0) = 1.0;  // tooth leg g
      split.W(1, 2) = 1.0;  // tooth leg g - 1/2
      split.W(2, 3) = 1.0;  // tooth leg g - 1
      split.W(3, 1) = 1.0;  // carry reads f
      split.v = Eigen::VectorXd::Zero(4);
    }
    hidden.push_back(std::move(split));

    Layer merge;
    merge.W = Eigen::MatrixXd::Zero(4, 4);
    merge.W.row(0) << 2.0, -4.0, 2.0, 0.0;  // g_s
    const double r4 = std::ldexp(1.0, -2 * s);
    merge.W.row(1) << -2.0 * r4, 4.0 * r4, -2.0 * r4, 1.0;  // f_s = f_{s-1} - g_s/4^s
    merge.W.row(2) << 2.0, -4.0, 2.0, 0.0;  // g_s - 1/2 for the next split
    merge.W.row(3) << 2.0, -4.0, 2.0, 0.0;  // g_s - 1 for the next split
    merge.v = Eigen::VectorXd(4);
    merge.v << 0.0, 0.0, 0.5, 1.0;
    hidden.push_back(std::move(merge));
  }
  Eigen::MatrixXd W_out(1, 4);
  W_out << 0.0, 1.0, 0.0, 0.0;
  return ReluNetwork(1, std::move(hidden), std::move(W_out));
}

// ---- shared product block ----------------------------------------------

namespace detail {

// Sparse affine expression over the nodes of the layer a block attaches to.
struct AffineForm {
  std::vector<std::pair<int, double>> terms;  // (node, weight)
  double bias = 0.0;
};

inline AffineForm pick_node(int node) { return AffineForm{{{node, 1.0}}, 0.0}; }

inline AffineForm average_of(const AffineForm& a, const AffineForm& b) {
  std::map<int, double> acc;
  for (const auto& t : a.terms) acc[t.first] += 0.5 * t.second;
  for (const auto& t : b.terms) acc[t.first] += 0.5 * t.second;
  AffineForm out;
  for (const auto& kv : acc) out.terms.push_back(kv);
  out.bias = 0.5 * (a.bias + b.bias);
  return out;
}

struct ProductUnit {
  int u = -1;  // chain indices
  int v = -1;
};

// Specification of one product block.  Chains are scalar expressions with
// values in [0,1] on the domain of use; each unit multiplies two chains;
// rails are nonnegative expressions carried through unchanged.  Output rows
// are affine over [unit values..., rail values..., 1].
struct SuperblockSpec {
  int state_dim = 0;
  std::vector<AffineForm> chains;
  std::vector<ProductUnit> units;
  std::vector<AffineForm> rails;
  std::vector<AffineForm> out;
  // Pad the value and collection layers with replicated nodes so every
  // hidden layer has the same width 4*(chains+units) + rails.
  bool uniform_width = false;
};

// Realizes all units of a spec through one shared squaring cascade:
//   x y = (2 SQ((x+y)/2) - SQ(x)/2 - SQ(y)/2 + 4^{-m}) / (1 + 2 * 4^{-m}).
// Hidden depth is always 2m+2: a value layer, m split/merge pairs run on
// every chain at once, and a collection layer holding the final remainders
// plus one constant node (value 4^{-m}) feeding the bias-free output.
// Merge layers carry the tooth value, the remainder, and the two shifted
// legs of the next stage per chain, so split and merge share the width
// 4*(chains+units) + rails.
inline ReluNetwork product_superblock(const SuperblockSpec& spec, int m) {
  check_resolution(m);
  if (spec.state_dim < 1)
    throw std::invalid_argument("product_superblock: empty state");
  if (spec.units.empty())
    throw std::invalid_argument("product_superblock: no product units");
  const int C = static_cast<int>(spec.chains.size());
  const int U = static_cast<int>(spec.units.size());
  const int R = static_cast<int>(spec.rails.size());
  std::vector<AffineForm> chains = spec.chains;
  for (const auto& unit : spec.units) {
    if (unit.u < 0 || unit.u >= C || unit.v < 0 || unit.v >= C)
      throw std::invalid_argument("product_superblock: unit references bad chain");
    chains.push_back(average_of(spec.chains[static_cast<size_t>(unit.u)],
                                spec.chains[static_cast<size_t>(unit.v)]));
  }
  const int CT = C + U;
  const int full = 4 * CT + R;

  std::vector<Layer> hidden;

  // Value layer: sigma of every chain and rail expression; under uniform
  // width the block of chain/rail nodes is replicated to fill the layer.
  const int vblock = CT + R;
  const int vwidth = spec.uniform_width ? full : vblock;
  {
    Layer lay;
    lay.W = Eigen::MatrixXd::Zero(vwidth, spec.state_dim);
    lay.v = Eigen::VectorXd::Zero(vwidth);
    for (int row = 0; row < vwidth; ++row) {
      const int j = row % vblock;
      if (j < CT) {
        for (const auto& t : chains[static_cast<size_t>(j)].terms)
          lay.W(row, t.first) += t.second;
        lay.v[row] = -chains[static_cast<size_t>(j)].bias;
      } else {
        for (const auto& t : spec.rails[static_cast<size_t>(j - CT)].terms)
          lay.W(row, t.first) += t.second;
        lay.v[row] = -spec.rails[static_cast<size_t>(j - CT)].bias;
      }
    }
    hidden.push_back(std::move(lay));
  }

  for (int s = 1; s <= m; ++s) {
    const int prev_width = (s == 1) ? vwidth : full;

    Layer split;
    split.W = Eigen::MatrixXd::Zero(full, prev_width);
    split.v = Eigen::VectorXd::Zero(full);
    if (s == 1) {
      // Tooth legs take their shifts here; replicated value nodes feed the
      // individual legs when present.
      const int ncopies = vwidth / vblock;
      const auto vcopy = [&](int copy, int j) {
        return (copy % ncopies) * vblock + j;
      };
      for (int j = 0; j < CT; ++j) {
        split.W(4 * j + 0, vcopy(0, j)) = 1.0;
        split.W(4 * j + 1, vcopy(1, j)) = 1.0;
        split.v[4 * j + 1] = 0.5;
        split.W(4 * j + 2, vcopy(2, j)) = 1.0;
        split.v[4 * j + 2] = 1.0;
        split.W(4 * j + 3, vcopy(3, j)) = 1.0;
      }
      for (int r = 0; r < R; ++r) split.W(4 * CT + r, CT + r) = 1.0;
    } else {
      // Previous merge holds (g, f, g - 1/2, g - 1) per chain; re-select.
      for (int j = 0; j < CT; ++j) {
        split.W(4 * j + 0, 4 * j + 0) = 1.0;
        split.W(4 * j + 1, 4 * j + 2) = 1.0;
        split.W(4 * j + 2, 4 * j + 3) = 1.0;
        split.W(4 * j + 3, 4 * j + 1) = 1.0;
      }
      for (int r = 0; r < R; ++r) split.W(4 * CT + r, 4 * CT + r) = 1.0;
    }
    hidden.push_back(std::move(split));

    Layer merge;
    merge.W = Eigen::MatrixXd::Zero(full, full);
    merge.v = Eigen::VectorXd::Zero(full);
    const double r4 = std::ldexp(1.0, -2 * s);
    for (int j = 0; j < CT; ++j) {
      merge.W(4 * j + 0, 4 * j + 0) = 2.0;
      merge.W(4 * j + 0, 4 * j + 1) = -4.0;
      merge.W(4 * j + 0, 4 * j + 2) = 2.0;
      merge.W(4 * j + 1, 4 * j + 0) = -2.0 * r4;
      merge.W(4 * j + 1, 4 * j + 1) = 4.0 * r4;
      merge.W(4 * j + 1, 4 * j + 2) = -2.0 * r4;
      merge.W(4 * j + 1, 4 * j + 3) = 1.0;
      merge.W.row(4 * j + 2) = merge.W.row(4 * j + 0);
      merge.v[4 * j + 2] = 0.5;
      merge.W.row(4 * j + 3) = merge.W.row(4 * j + 0);
      merge.v[4 * j + 3] = 1.0;
    }
    for (int r = 0; r < R; ++r) merge.W(4 * CT + r, 4 * CT + r) = 1.0;
    hidden.push_back(std::move(merge));
  }

  // Collection layer: remainders, one constant node, rails; replicated to
  // full width under uniform width.
  const double pm = std::ldexp(1.0, -2 * m);
  const int cblock = CT + 1 + R;
  const int cwidth = spec.uniform_width ? full : cblock;
  {
    Layer lay;
    lay.W = Eigen::MatrixXd::Zero(cwidth, full);
    lay.v = Eigen::VectorXd::Zero(cwidth);
    for (int row = 0; row < cwidth; ++row) {
      const int j = row % cblock;
      if (j < CT)
        lay.W(row, 4 * j + 1) = 1.0;
      else if (j == CT)
        lay.v[row] = -pm;
      else
        lay.W(row, 4 * CT + (j - CT - 1)) = 1.0;
    }
    hidden.push_back(std::move(lay));
  }

  const double invD = 1.0 / (1.0 + 2.0 * pm);
  Eigen::MatrixXd W_out =
      Eigen::MatrixXd::Zero(static_cast<int>(spec.out.size()), cwidth);
  for (size_t o = 0; o < spec.out.size(); ++o) {
    const int row = static_cast<int>(o);
    for (const auto& t : spec.out[o].terms) {
      if (t.first < U) {
        const auto& unit = spec.units[static_cast<size_t>(t.first)];
        const double cw = t.second * invD;
        W_out(row, C + t.first) += 2.0 * cw;
        W_out(row, unit.u) -= 0.5 * cw;
        W_out(row, unit.v) -= 0.5 * cw;
        W_out(row, CT) += cw;  // + 4^{-m}, via the constant node
      } else if (t.first < U + R) {
        W_out(row, CT + 1 + (t.first - U)) += t.second;
      } else {
        throw std::invalid_argument("product_superblock: bad output reference");
      }
    }
    // Constant-node value is 4^{-m}; scaling by 4^m is an exact exponent
    // shift, so biases pass through unrounded.
    W_out(row, CT) += spec.out[o].bias * std::ldexp(1.0, 2 * m);
  }
  return ReluNetwork(spec.state_dim, std::move(hidden), std::move(W_out));
}

// One-hidden-layer sigma passthrough for nonnegative values.
inline ReluNetwork passthrough_net(int width) {
  Layer lay;
  lay.W = Eigen::MatrixXd::Identity(width, width);
  lay.v = Eigen::VectorXd::Zero(width);
  return ReluNetwork(width, {std::move(lay)},
                     Eigen::MatrixXd::Identity(width, width));
}

}  // namespace detail

// ---- pairwise and chained products --------------------------------------

// x2_m(x, y) on [0,1]^2: NN(2m+2), every hidden layer of width 12.
inline ReluNetwork build_prod2(int m) {
  detail::SuperblockSpec sp;
  sp.state_dim = 2;
  sp.chains = {detail::pick_node(0), detail::pick_node(1)};
  sp.units = {{0, 1}};
  sp.out = {detail::AffineForm{{{0, 1.0}}, 0.0}};
  sp.uniform_width = true;
  return detail::product_superblock(sp, m);
}

// Chained s-fold product on [0,1]^s: blocks joined by one-layer buffers,
// pending inputs riding on rails.  Depth (s-1)(2m+3) - 1, width <= 10 + s.
inline ReluNetwork build_prod_s(int m, int s) {
  check_resolution(m);
  if (s < 2) throw std::invalid_argument("build_prod_s: s must be >= 2");
  detail::SuperblockSpec first;
  first.state_dim = s;
  first.chains = {detail::pick_node(0), detail::pick_node(1)};
  first.units = {{0, 1}};
  first.out = {detail::AffineForm{{{0, 1.0}}, 0.0}};
  for (int j = 2; j < s; ++j) {
    first.rails.push_back(detail::pick_node(j));
    first.out.push_back(detail::AffineForm{{{1 + (j - 2), 1.0}}, 0.0});
  }
  ReluNetwork net = detail::product_superblock(first, m);

  for (int t = 3; t <= s; ++t) {
    const int w = 1 + (s - t + 1);  // [running product, x_t, ..., x_s]
    net = compose(detail::passthrough_net(w), net);
    detail::SuperblockSpec sp;
    sp.state_dim = w;
    sp.chains = {detail::pick_node(0), detail::pick_node(1)};
    sp.units = {{0, 1}};
    sp.out = {detail::AffineForm{{{0, 1.0}}, 0.0}};
    for (int j = 2; j < w; ++j) {
      sp.rails.push_back(detail::pick_node(j));
      sp.out.push_back(detail::AffineForm{{{1 + (j - 2), 1.0}}, 0.0});
    }
    net = compose(detail::product_superblock(sp, m), net);
  }
  return net;
}

// ---- approximate B-spline basis nets ------------------------------------

namespace detail {

// Scale factors writing a hat B_{i,2} as a combination of three ramps:
// c1 sigma(x-t_i) + c2 sigma(x-t_{i+1}) + c3 sigma(x-t_{i+2}).
inline void hat_ramp_coeffs(const KnotGrid& g, int i, double& c1, double& c2,
                            double& c3) {
  const double d1 = g.knot(i + 1) - g.knot(i);
  const double d2 = g.knot(i + 2) - g.knot(i + 1);
  c1 = 1.0 / d1;
  c2 = -(d1 + d2) / (d1 * d2);
  c3 = 1.0 / d2;
}

}  // namespace detail

// Vector net for all order-k approximate basis functions B~_{i,k} on one
// axis.  Order 2 is an exact ramp combination (depth 1); each further order
// runs one shared product block over the recursion
//   B~_{i,s+1} = [x2(a~, B~_i) + x2(b~, B~_{i+1}) + 2 eps + 2 Delta_s] /
//                [1 + 4 eps + 4 Delta_s],
// whose additive slack keeps values in [0,1] and the error within
// basis_net_error_bound(k, m).
struct TildeBasis {
  KnotGrid grid;
  int m = 0;
  double bound = 0.0;
  ReluNetwork net;

  // Single-output slice for one basis index i in [-k+1, M-1].
  ReluNetwork component(int i) const {
    const int idx = i + grid.k - 1;
    if (idx < 0 || idx >= net.output_dim())
      throw std::out_of_range("TildeBasis::component: index " +
                              std::to_string(i) + " outside basis range");
    return ReluNetwork(net.input_dim(), net.hidden(),
                       net.output_weights().row(idx));
  }
};

inline TildeBasis build_tilde_B(const KnotGrid& grid, int m) {
  check_resolution(m);
  const int k = grid.k;
  const int M = grid.M;
  const int nk = grid.num_knots();
  const int first = grid.first_index();
  const auto sp_of = [&](int i) { return i + k - 1; };  // split node of knot i

  // Base layer: one ramp per knot.  sigma(x - t_0) doubles as the carried
  // copy of x itself.
  Layer base;
  base.W = Eigen::MatrixXd::Ones(nk, 1);
  base.v = Eigen::VectorXd(nk);
  for (int j = 0; j < nk; ++j) base.v[j] = grid.knots[static_cast<size_t>(j)];

  if (k == 2) {
    Eigen::MatrixXd W_out = Eigen::MatrixXd::Zero(grid.basis_size(), nk);
    for (int i = first; i <= M - 1; ++i) {
      double c1, c2, c3;
      detail::hat_ramp_coeffs(grid, i, c1, c2, c3);
      W_out(i + k - 1, sp_of(i)) = c1;
      W_out(i + k - 1, sp_of(i + 1)) = c2;
      W_out(i + k - 1, sp_of(i + 2)) = c3;
    }
    return TildeBasis{grid, m, basis_net_error_bound(k, m),
                      ReluNetwork(1, {std::move(base)}, std::move(W_out))};
  }

  ReluNetwork net(1, {std::move(base)}, Eigen::MatrixXd::Identity(nk, nk));
  const double eps = prod2_error_bound(m);

  for (int s = 2; s <= k - 1; ++s) {
    const int R_cur = M + 2 * k - s - 1;   // inputs B~_{., s}
    const int R_next = M + 2 * k - s - 2;  // outputs B~_{., s+1}
    const bool last = (s == k - 1);
    const double ds = stage_slack(s, m);
    const double invDD = 1.0 / (1.0 + 4.0 * eps + 4.0 * ds);
    const double num_bias = 2.0 * eps + 2.0 * ds;

    detail::SuperblockSpec sp;
    sp.state_dim = (s == 2) ? nk : nk + R_cur;
    // Chains 0..R_cur-1: current-order basis values.
    for (int ii = 0; ii < R_cur; ++ii) {
      if (s == 2) {
        const int i = first + ii;
        double c1, c2, c3;
        detail::hat_ramp_coeffs(grid, i, c1, c2, c3);
        sp.chains.push_back(detail::AffineForm{{{sp_of(i), c1},
                                                {sp_of(i + 1), c2},
                                                {sp_of(i + 2), c3}},
                                               0.0});
      } else {
        sp.chains.push_back(detail::pick_node(nk + ii));
      }
    }
    // Chains R_cur..R_cur+R_next-1: a~_{i,s}; then b~_{i,s} = 1 - a~_{i+1,s}.
    for (int ii = 0; ii < R_next; ++ii) {
      const int i = first + ii;
      const double da = grid.knot(i + s) - grid.knot(i);
      sp.chains.push_back(detail::AffineForm{
          {{sp_of(i), 1.0 / da}, {sp_of(i + s), -1.0 / da}}, 0.0});
    }
    for (int ii = 0; ii < R_next; ++ii) {
      const int i = first + ii;
      const double db = grid.knot(i + s + 1) - grid.knot(i + 1);
      sp.chains.push_back(detail::AffineForm{
          {{sp_of(i + 1), -1.0 / db}, {sp_of(i + s + 1), 1.0 / db}}, 1.0});
    }
    for (int ii = 0; ii < R_next; ++ii)
      sp.units.push_back({R_cur + ii, ii});                       // a~_i * B~_i
    for (int ii = 0; ii < R_next; ++ii)
      sp.units.push_back({R_cur + R_next + ii, ii + 1});          // b~_i * B~_{i+1}
    if (!last) sp.rails.push_back(detail::pick_node(sp_of(0)));   // x itself
    for (int ii = 0; ii < R_next; ++ii) {
      detail::AffineForm row;
      row.terms = {{ii, invDD}, {R_next + ii, invDD}};
      row.bias = num_bias * invDD;
      sp.out.push_back(std::move(row));
    }
    if (!last)
      sp.out.push_back(detail::AffineForm{{{2 * R_next + 0, 1.0}}, 0.0});

    net = compose(detail::product_superblock(sp, m), net);

    if (!last) {
      // Relayer: rebuild the knot ramps from the carried x and pass the new
      // basis values through.  State convention stays [ramps..., values...].
      Layer lay;
      lay.W = Eigen::MatrixXd::Zero(nk + R_next, R_next + 1);
      lay.v = Eigen::VectorXd::Zero(nk + R_next);
      for (int j = 0; j < nk; ++j) {
        lay.W(j, R_next) = 1.0;
        lay.v[j] = grid.knots[static_cast<size_t>(j)];
      }
      for (int ii = 0; ii < R_next; ++ii) lay.W(nk + ii, ii) = 1.0;
      ReluNetwork relayer(R_next + 1, {std::move(lay)},
                          Eigen::MatrixXd::Identity(nk + R_next, nk + R_next));
      net = compose(relayer, net);
    }
  }
  return TildeBasis{grid, m, basis_net_error_bound(k, m), std::move(net)};
}

// ---- tensor-product basis net -------------------------------------------

// All q = (M+k-1)^d tensor entries, ordered with the first coordinate's
// index slowest (matching eval_tensor_vector).  d == 1 returns the axis net
// itself; d >= 2 runs d axis stacks side by side and chains the axes through
// shared product blocks, later axes riding rails until their turn.
struct TensorBasisNet {
  KnotGrid grid;
  int d = 0;
  int m = 0;
  double bound = 0.0;
  ReluNetwork net;
};

inline TensorBasisNet build_tilde_D(const KnotGrid& grid, int d, int m) {
  if (d < 1 || d > 14)
    throw std::invalid_argument("build_tilde_D: d = " + std::to_string(d) +
                                " outside [1, 14]");
  TildeBasis axis = build_tilde_B(grid, m);
  if (d == 1)
    return TensorBasisNet{grid, 1, m, tensor_net_error_bound(grid.k, 1, m),
                          std::move(axis.net)};

  std::vector<ReluNetwork> stacks(static_cast<size_t>(d), axis.net);
  ReluNetwork net = parallel(stacks, false);
  const int R = grid.basis_size();
  long pcount = R;
  for (int t = 1; t <= d - 1; ++t) {
    const int pending = d - t - 1;  // axes still waiting after this stage
    detail::SuperblockSpec sp;
    sp.state_dim = static_cast<int>(pcount) + (pending + 1) * R;
    for (long p = 0; p < pcount; ++p)
      sp.chains.push_back(detail::pick_node(static_cast<int>(p)));
    for (int i = 0; i < R; ++i)
      sp.chains.push_back(detail::pick_node(static_cast<int>(pcount) + i));
    for (long p = 0; p < pcount; ++p)
      for (int i = 0; i < R; ++i)
        sp.units.push_back({static_cast<int>(p), static_cast<int>(pcount) + i});
    for (int r = 0; r < pending * R; ++r)
      sp.rails.push_back(detail::pick_node(static_cast<int>(pcount) + R + r));
    const int U = static_cast<int>(sp.units.size());
    for (int u = 0; u < U; ++u)
      sp.out.push_back(detail::AffineForm{{{u, 1.0}}, 0.0});
    for (int r = 0; r < pending * R; ++r)
      sp.out.push_back(detail::AffineForm{{{U + r, 1.0}}, 0.0});
    net = compose(detail::product_superblock(sp, m), net);
    pcount *= R;
  }
  return TensorBasisNet{grid, d, m, tensor_net_error_bound(grid.k, d, m),
                        std::move(net)};
}

// Fuse fitted coefficients into the tensor net's output layer: a scalar
// network for x -> c' B~(x), same depth and hidden widths as the basis net.
inline ReluNetwork assemble_fnet(const Eigen::VectorXd& coeffs,
                                 const TensorBasisNet& basis) {
  if (coeffs.size() != basis.net.output_dim())
    throw std::invalid_argument(
        "assemble_fnet: got " + std::to_string(coeffs.size()) +
        " coefficients for " + std::to_string(basis.net.output_dim()) +
        " basis outputs");
  return compose(affine_network(coeffs.transpose()), basis.net);
}

}  // namespace reluspline
