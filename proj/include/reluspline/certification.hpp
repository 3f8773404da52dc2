#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <functional>
#include <json.hpp>
#include <map>
#include <string>
#include <vector>

#include "reluspline/approx_bounds.hpp"
#include "reluspline/bspline_basis.hpp"
#include "reluspline/network_builders.hpp"

namespace reluspline {

// Outcome of scanning one constructed network against its mathematical
// target on a deterministic grid.  `pass` requires the observed sup error to
// sit within the analytic bound (no added slack) and, for basis-valued
// targets, the outputs to stay in [0,1] up to a 1e-12 rounding allowance.
struct Certificate {
  std::string target;
  int k = 0, d = 0, M = 0, m = 0, s = 0;
  double analytic_bound = 0.0;
  double scan_max_error = 0.0;
  double range_lo = 0.0, range_hi = 0.0;
  long grid_points = 0;
  int depth = 0, max_width = 0;
  bool pass = false;
  std::map<std::string, std::string> meta;
};

inline nlohmann::json to_json(const Certificate& c) {
  return nlohmann::json{{"target", c.target},
                        {"m", c.m},
                        {"k", c.k},
                        {"d", c.d},
                        {"M", c.M},
                        {"s", c.s},
                        {"analytic_bound", c.analytic_bound},
                        {"scan_max_error", c.scan_max_error},
                        {"range_lo", c.range_lo},
                        {"range_hi", c.range_hi},
                        {"grid_points", c.grid_points},
                        {"depth", c.depth},
                        {"max_width", c.max_width},
                        {"pass", c.pass},
                        {"meta", c.meta}};
}

namespace scan {

constexpr double kRangeTol = 1e-12;

// Uniform-count defaults per dimension, balancing coverage against the
// d-fold product blowup.
inline int uniform_axis_count(int d) {
  switch (d) {
    case 1: return 10000;
    case 2: return 200;
    case 3: return 50;
    case 4: return 20;
    default: return 10;
  }
}

inline int dyadic_cutoff(int d) {
  switch (d) {
    case 1: return 13;
    case 2: return 6;
    case 3: return 6;
    case 4: return 4;
    default: return 3;
  }
}

// One scan axis: uniform grid, plus in-domain knots and cell midpoints when
// a grid is given, plus the dyadics j 2^{-m} and their midpoints (where the
// squaring error peaks) when 2^m is small enough for the dimension.
inline std::vector<double> axis_points(int d, const KnotGrid* grid, int m,
                                       std::string* description = nullptr) {
  std::vector<double> xs;
  const int nu = uniform_axis_count(d);
  for (int j = 0; j <= nu; ++j) xs.push_back(static_cast<double>(j) / nu);
  std::string desc = "uniform(" + std::to_string(nu + 1) + ")";
  if (grid != nullptr) {
    for (int i = 0; i <= grid->M; ++i) {
      xs.push_back(grid->knot(i));
      if (i < grid->M) xs.push_back((grid->knot(i) + grid->knot(i + 1)) / 2.0);
    }
    desc += "+knots+midknots";
  }
  const bool dyadics = (m >= 1 && m <= dyadic_cutoff(d));
  if (dyadics) {
    for (int j = 0; j <= (1 << m); ++j) {
      xs.push_back(std::ldexp(static_cast<double>(j), -m));
      if (j < (1 << m)) xs.push_back((2.0 * j + 1.0) * std::ldexp(1.0, -m - 1));
    }
    desc += "+dyadics(m=" + std::to_string(m) + ")";
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  if (description) *description = desc;
  return xs;
}

struct ScanStats {
  double max_err = 0.0;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  long points = 0;
};

// Exhaustive product-grid scan.  The network is evaluated in batches through
// its own forward pass (never a surrogate); the reference is evaluated per
// point.
inline ScanStats scan_network(
    const ReluNetwork& net, const std::vector<std::vector<double>>& axes,
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& reference,
    int block_size = 4096) {
  const int d = static_cast<int>(axes.size());
  long total = 1;
  for (const auto& ax : axes) total *= static_cast<long>(ax.size());
  ScanStats st;
  st.points = total;

  Eigen::MatrixXd X(d, block_size);
  std::vector<long> idx(static_cast<size_t>(d), 0);
  long done = 0;
  while (done < total) {
    const int nb = static_cast<int>(std::min<long>(block_size, total - done));
    for (int p = 0; p < nb; ++p) {
      long rem = done + p;
      for (int c = d - 1; c >= 0; --c) {
        const auto& ax = axes[static_cast<size_t>(c)];
        X(c, p) = ax[static_cast<size_t>(rem % ax.size())];
        rem /= static_cast<long>(ax.size());
      }
    }
    const Eigen::MatrixXd Y = net.evaluate_batch(X.leftCols(nb));
    for (int p = 0; p < nb; ++p) {
      const Eigen::VectorXd ref = reference(X.col(p));
      for (int r = 0; r < Y.rows(); ++r) {
        st.max_err = std::max(st.max_err, std::abs(Y(r, p) - ref[r]));
        st.lo = std::min(st.lo, Y(r, p));
        st.hi = std::max(st.hi, Y(r, p));
      }
    }
    done += nb;
  }
  return st;
}

}  // namespace scan

namespace detail {

inline void finish_certificate(Certificate& c, const ReluNetwork& net,
                               const scan::ScanStats& st, bool check_range) {
  const auto arch = net.architecture();
  c.depth = arch.depth;
  c.max_width = arch.max_width;
  c.scan_max_error = st.max_err;
  c.range_lo = st.lo;
  c.range_hi = st.hi;
  c.grid_points = st.points;
  c.pass = st.max_err <= c.analytic_bound;
  if (check_range)
    c.pass = c.pass && st.lo >= -scan::kRangeTol && st.hi <= 1.0 + scan::kRangeTol;
  c.meta["range_checked"] = check_range ? "[0,1] within 1e-12" : "not required";
}

// The documented operator-size claims come in three mutually inconsistent
// variants; certificates record how the realized net compares to each.
inline void record_size_claims(Certificate& c, int k, int d, int m, int M,
                               int depth, int width) {
  const auto yn = [](bool b) { return b ? std::string("yes") : std::string("no"); };
  const long LA = static_cast<long>(2 * m + 3) * (k + d - 1) + 1;
  const double TA = 3.0 * std::pow(M + 2 * k, d);
  const long LB = static_cast<long>(2 * m + 3) * (k + d - 3) + k;
  const double TB = (d + 2.0) * std::pow(M + k - 1, d);
  const long LC = static_cast<long>(2 * m + 3) * (k + d - 3) + k - 1;
  c.meta["size_claim_A"] = "L<=(2m+3)(k+d-1)+1=" + std::to_string(LA) +
                           ", T<=3(M+2k)^d=" + std::to_string(static_cast<long>(TA)) +
                           "; depth:" + yn(depth <= LA) + " width:" + yn(width <= TA);
  c.meta["size_claim_B"] = "L<=(2m+3)(k+d-3)+k=" + std::to_string(LB) +
                           ", T<=(d+2)(M+k-1)^d=" + std::to_string(static_cast<long>(TB)) +
                           "; depth:" + yn(depth <= LB) + " width:" + yn(width <= TB);
  c.meta["size_claim_C"] = "L<=(2m+3)(k+d-3)+k-1=" + std::to_string(LC) +
                           "; depth:" + yn(depth <= LC);
}

}  // namespace detail

inline Certificate certify_sq(int m) {
  Certificate c;
  c.target = "sq";
  c.m = m;
  c.d = 1;
  c.analytic_bound = sq_error_bound(m);
  const auto net = build_sq(m);
  std::string desc;
  const auto axis = scan::axis_points(1, nullptr, m, &desc);
  const auto st = scan::scan_network(net, {axis}, [](const Eigen::VectorXd& x) {
    return Eigen::VectorXd::Constant(1, x[0] * x[0]);
  });
  c.meta["axis"] = desc;
  detail::finish_certificate(c, net, st, true);
  return c;
}

inline Certificate certify_prod2(int m) {
  Certificate c;
  c.target = "prod2";
  c.m = m;
  c.d = 2;
  c.s = 2;
  c.analytic_bound = prod2_error_bound(m);
  const auto net = build_prod2(m);
  std::string desc;
  const auto axis = scan::axis_points(2, nullptr, m, &desc);
  const auto st = scan::scan_network(net, {axis, axis}, [](const Eigen::VectorXd& x) {
    return Eigen::VectorXd::Constant(1, x[0] * x[1]);
  });
  c.meta["axis"] = desc;
  detail::finish_certificate(c, net, st, true);
  return c;
}

inline Certificate certify_prod_s(int m, int s) {
  Certificate c;
  c.target = (s == 3) ? "prod3" : "prod_s";
  c.m = m;
  c.d = s;
  c.s = s;
  c.analytic_bound = prod_error_bound(m, s);
  const auto net = build_prod_s(m, s);
  std::string desc;
  const auto axis = scan::axis_points(s, nullptr, m, &desc);
  const auto st = scan::scan_network(
      net, std::vector<std::vector<double>>(static_cast<size_t>(s), axis),
      [](const Eigen::VectorXd& x) {
        return Eigen::VectorXd::Constant(1, x.prod());
      });
  c.meta["axis"] = desc;
  detail::finish_certificate(c, net, st, true);
  return c;
}

inline Certificate certify_tilde_b(const KnotGrid& grid, int m) {
  Certificate c;
  c.target = "tilde_b";
  c.k = grid.k;
  c.M = grid.M;
  c.m = m;
  c.d = 1;
  const auto tb = build_tilde_B(grid, m);
  // Order 2 is exact; its certificate carries a pure rounding tolerance.
  c.analytic_bound = grid.k == 2 ? 1e-12 : tb.bound;
  if (grid.k == 2) c.meta["exact_construction"] = "order-2 ramps; bound is fp tolerance";
  std::string desc;
  const auto axis = scan::axis_points(1, &grid, m, &desc);
  const auto st = scan::scan_network(tb.net, {axis}, [&](const Eigen::VectorXd& x) {
    return eval_basis_vector(grid, x[0]);
  });
  c.meta["axis"] = desc;
  detail::finish_certificate(c, tb.net, st, true);
  detail::record_size_claims(c, grid.k, 1, m, grid.M, c.depth, c.max_width);
  return c;
}

inline Certificate certify_tilde_d(const KnotGrid& grid, int d, int m) {
  Certificate c;
  c.target = "tilde_d";
  c.k = grid.k;
  c.M = grid.M;
  c.m = m;
  c.d = d;
  c.analytic_bound = tensor_net_error_bound(grid.k, d, m);
  const auto td = build_tilde_D(grid, d, m);
  std::string desc;
  const auto axis = scan::axis_points(d, &grid, m, &desc);
  const auto st = scan::scan_network(
      td.net, std::vector<std::vector<double>>(static_cast<size_t>(d), axis),
      [&](const Eigen::VectorXd& x) { return eval_tensor_vector(grid, x); });
  c.meta["axis"] = desc;
  detail::finish_certificate(c, td.net, st, true);
  detail::record_size_claims(c, grid.k, d, m, grid.M, c.depth, c.max_width);
  return c;
}

// Fitted-network certificate: the assembled scalar net against the exact
// spline predictor sharing its coefficients.  The bound follows from
// Cauchy-Schwarz over the q basis discrepancies.
inline Certificate certify_fnet(const Eigen::VectorXd& coeffs,
                                const TensorBasisNet& basis) {
  Certificate c;
  c.target = "fnet";
  c.k = basis.grid.k;
  c.M = basis.grid.M;
  c.m = basis.m;
  c.d = basis.d;
  const double q = static_cast<double>(basis.net.output_dim());
  c.analytic_bound = coeffs.norm() * std::sqrt(q) * basis.bound;
  const auto fnet = assemble_fnet(coeffs, basis);
  std::string desc;
  const auto axis = scan::axis_points(basis.d, &basis.grid, basis.m, &desc);
  const auto st = scan::scan_network(
      fnet, std::vector<std::vector<double>>(static_cast<size_t>(basis.d), axis),
      [&](const Eigen::VectorXd& x) {
        return Eigen::VectorXd::Constant(1, coeffs.dot(eval_tensor_vector(basis.grid, x)));
      });
  c.meta["axis"] = desc;
  detail::finish_certificate(c, fnet, st, false);
  return c;
}

// The whole family at one parameter point, the unit the command-line
// `certify` subcommand works in.
inline std::vector<Certificate> certify_family(int k, int d, int M, int m) {
  const auto grid = make_cardinal_grid(M, k);
  std::vector<Certificate> certs;
  certs.push_back(certify_sq(m));
  certs.push_back(certify_prod2(m));
  certs.push_back(certify_prod_s(m, 3));
  certs.push_back(certify_tilde_b(grid, m));
  certs.push_back(certify_tilde_d(grid, d, m));
  return certs;
}

}  // namespace reluspline
