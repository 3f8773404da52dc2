#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "reluspline/bspline_basis.hpp"
#include "reluspline/dataset.hpp"
#include "reluspline/knot_grid.hpp"
#include "reluspline/network_builders.hpp"
#include "reluspline/network_ops.hpp"
#include "reluspline/truncated_power.hpp"

namespace reluspline {

// Additive least-squares spline fit: y ~ alpha + sum_j g_j(x_j) with each
// g_j a spline in the truncated-power basis, identified by the centering
// constraint  integral_0^1 g_j = 0.
struct AdditiveFit {
  std::vector<KnotGrid> grids;  // one per coordinate
  int d = 0;
  int n = 0;
  double alpha = 0.0;
  std::vector<Eigen::VectorXd> betas;  // block coefficients per coordinate
  std::vector<double> centers;         // c_j = integral of block_j beta_j
  Eigen::MatrixXd gram;                // full design gram, intercept included
  double tau2 = std::numeric_limits<double>::quiet_NaN();
  std::string status;

  bool certified() const { return status == "ok"; }
  long p() const {
    long p = 1;
    for (const auto& g : grids) p += truncpower_block_size(g);
    return p;
  }
};

inline Eigen::MatrixXd additive_design_matrix(const std::vector<KnotGrid>& grids,
                                              const Eigen::MatrixXd& X) {
  const int n = static_cast<int>(X.rows());
  const int d = static_cast<int>(X.cols());
  if (static_cast<int>(grids.size()) != d)
    throw std::invalid_argument("additive_design_matrix: need one knot grid "
                                "per coordinate");
  long p = 1;
  for (const auto& g : grids) p += truncpower_block_size(g);
  Eigen::MatrixXd D(n, p);
  D.col(0).setOnes();
  for (int r = 0; r < n; ++r) {
    long col = 1;
    for (int j = 0; j < d; ++j) {
      const Eigen::VectorXd block = eval_truncpower_block(grids[j], X(r, j));
      D.row(r).segment(col, block.size()) = block.transpose();
      col += block.size();
    }
  }
  return D;
}

inline AdditiveFit fit_additive(const Dataset& ds,
                                const std::vector<KnotGrid>& grids) {
  if (ds.n() < 1) throw std::invalid_argument("fit_additive: empty dataset");
  const Eigen::MatrixXd D = additive_design_matrix(grids, ds.X);
  const long p = D.cols();

  AdditiveFit fit;
  fit.grids = grids;
  fit.d = ds.d();
  fit.n = ds.n();
  fit.gram = D.transpose() * D;

  Eigen::VectorXd theta;
  if (ds.n() >= p) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(D);
    if (qr.rank() < p)
      throw std::runtime_error(
          "fit_additive: singular design (rank " + std::to_string(qr.rank()) +
          " of " + std::to_string(p) + "); the sample does not separate the "
          "truncated-power terms");
    theta = qr.solve(ds.y);
    const Eigen::VectorXd resid_normal = D.transpose() * (ds.y - D * theta);
    const double scale = (D.transpose() * ds.y).cwiseAbs().maxCoeff();
    if (resid_normal.cwiseAbs().maxCoeff() > 1e-8 * std::max(scale, 1e-12))
      throw std::runtime_error("fit_additive: least-squares solve failed the "
                               "normal-equation residual check");
    if (ds.n() > p) {
      fit.tau2 = (ds.y - D * theta).squaredNorm() / (ds.n() - p);
      fit.status = "ok";
    } else {
      fit.status = "saturated";
    }
  } else {
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(D);
    theta = cod.solve(ds.y);
    fit.status = "underdetermined";
  }

  // Center each block analytically so that integral_0^1 g_j = 0, moving the
  // subtracted mass into the intercept.
  fit.alpha = theta[0];
  long col = 1;
  for (int j = 0; j < fit.d; ++j) {
    const long len = truncpower_block_size(grids[j]);
    Eigen::VectorXd beta = theta.segment(col, len);
    const double c = truncpower_block_integrals(grids[j]).dot(beta);
    fit.betas.push_back(std::move(beta));
    fit.centers.push_back(c);
    fit.alpha += c;
    col += len;
  }
  return fit;
}

// The centered component function g_j evaluated at a scalar point.
inline double additive_component(const AdditiveFit& fit, int j, double x) {
  if (j < 0 || j >= fit.d)
    throw std::invalid_argument("additive_component: coordinate index out of "
                                "range");
  return eval_truncpower_block(fit.grids[j], x).dot(fit.betas[j]) -
         fit.centers[j];
}

inline Eigen::VectorXd predict_additive(const AdditiveFit& fit,
                                        const Eigen::MatrixXd& X) {
  if (X.cols() != fit.d)
    throw std::invalid_argument("predict_additive: dimension mismatch");
  Eigen::VectorXd out = Eigen::VectorXd::Constant(X.rows(), fit.alpha);
  for (int r = 0; r < X.rows(); ++r)
    for (int j = 0; j < fit.d; ++j)
      out[r] += additive_component(fit, j, X(r, j));
  return out;
}

// The fitted additive function as an explicit network: each component is
// re-expressed in the B-spline basis on the same knots (an exact change of
// basis, verified through a collocation residual), run through its basis
// network, and the coordinate networks are stacked side by side and summed.
struct AdditiveNetwork {
  std::vector<TildeBasis> bases;            // per coordinate
  std::vector<Eigen::VectorXd> b_coeffs;    // per-coordinate B-spline coeffs
  ReluNetwork net;
  double bound = 0.0;  // sup |net - additive spline predictor|
};

// B-spline coefficients of g_j + alpha/d per coordinate: an exact change of
// basis (the target is a spline on its own knots), obtained by collocation
// on Chebyshev points and guarded by the residual.
inline std::vector<Eigen::VectorXd> additive_b_coeffs(const AdditiveFit& fit) {
  std::vector<Eigen::VectorXd> b_coeffs;
  for (int j = 0; j < fit.d; ++j) {
    const KnotGrid& g = fit.grids[j];
    const long R = g.basis_size();
    const long npts = 10 * (g.M + g.k);
    Eigen::MatrixXd A(npts, R);
    Eigen::VectorXd target(npts);
    double target_sup = 0.0;
    for (long t = 0; t < npts; ++t) {
      const double x =
          0.5 * (1.0 - std::cos(M_PI * (t + 0.5) / static_cast<double>(npts)));
      A.row(t) = eval_basis_vector(g, x).transpose();
      target[t] = additive_component(fit, j, x) + fit.alpha / fit.d;
      target_sup = std::max(target_sup, std::abs(target[t]));
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
    Eigen::VectorXd c = qr.solve(target);
    const double resid = (A * c - target).cwiseAbs().maxCoeff();
    if (resid > 1e-8 * std::max(1.0, target_sup))
      throw std::runtime_error(
          "additive_b_coeffs: change of basis for coordinate " +
          std::to_string(j) + " left residual " + std::to_string(resid) +
          "; the component is not a spline on its own knots");
    b_coeffs.push_back(std::move(c));
  }
  return b_coeffs;
}

inline AdditiveNetwork additive_to_network(const AdditiveFit& fit, int m) {
  std::vector<Eigen::VectorXd> b_coeffs = additive_b_coeffs(fit);
  std::vector<TildeBasis> bases;
  std::vector<ReluNetwork> nets;
  double bound = 0.0;
  int max_depth = 0;

  for (int j = 0; j < fit.d; ++j) {
    const Eigen::VectorXd& c = b_coeffs[static_cast<size_t>(j)];
    TildeBasis basis = build_tilde_B(fit.grids[j], m);
    ReluNetwork scalar = compose(affine_network(c.transpose()), basis.net);
    max_depth = std::max(max_depth, scalar.depth());
    bound += c.norm() * std::sqrt(static_cast<double>(c.size())) * basis.bound;
    bases.push_back(std::move(basis));
    nets.push_back(std::move(scalar));
  }

  for (auto& nn : nets)
    if (nn.depth() < max_depth) nn = pad_depth(nn, max_depth);
  ReluNetwork stacked = parallel(nets, /*shared_input=*/false);
  ReluNetwork net =
      compose(affine_network(Eigen::RowVectorXd::Ones(fit.d)), stacked);
  return AdditiveNetwork{std::move(bases), std::move(b_coeffs), std::move(net),
                         bound};
}

}  // namespace reluspline
