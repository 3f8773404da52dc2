#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "reluspline/bspline_basis.hpp"
#include "reluspline/dataset.hpp"
#include "reluspline/knot_grid.hpp"
#include "reluspline/network_builders.hpp"

namespace reluspline {

// Least-squares tensor-product spline fit.  `status` is "ok" for the
// well-posed n > q case; exact saturation (n == q) and the minimum-norm
// underdetermined solve (n < q) are flagged and carry no variance estimate.
struct PilotFit {
  KnotGrid grid;
  int d = 0;
  int n = 0;
  Eigen::VectorXd coeffs;  // q, tensor order (first coordinate slowest)
  Eigen::MatrixXd gram;    // Phi' Phi
  double tau2 = std::numeric_limits<double>::quiet_NaN();  // rss / (n - q)
  std::string status;

  bool certified() const { return status == "ok"; }
  long q() const { return coeffs.size(); }
};

inline Eigen::MatrixXd pilot_design_matrix(const KnotGrid& grid,
                                           const Eigen::MatrixXd& X) {
  const int n = static_cast<int>(X.rows());
  const long q = tensor_size(grid, static_cast<int>(X.cols()));
  Eigen::MatrixXd Phi(n, q);
  for (int r = 0; r < n; ++r)
    Phi.row(r) = eval_tensor_vector(grid, X.row(r).transpose()).transpose();
  return Phi;
}

inline PilotFit fit_pilot(const Dataset& ds, const KnotGrid& grid) {
  if (ds.n() < 1) throw std::invalid_argument("fit_pilot: empty dataset");
  const long q = tensor_size(grid, ds.d());
  const Eigen::MatrixXd Phi = pilot_design_matrix(grid, ds.X);

  PilotFit fit;
  fit.grid = grid;
  fit.d = ds.d();
  fit.n = ds.n();
  fit.gram = Phi.transpose() * Phi;

  if (ds.n() >= q) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Phi);
    if (qr.rank() < q) {
      // Identify basis functions the design cannot pin down: those whose
      // pivot was dropped, by tensor multi-index.
      const auto perm = qr.colsPermutation().indices();
      std::string bad;
      for (long j = qr.rank(); j < q; ++j) {
        const auto multi = tensor_multi_index(grid, ds.d(), perm[j]);
        bad += bad.empty() ? "(" : ", (";
        for (size_t c = 0; c < multi.size(); ++c)
          bad += (c ? "," : "") + std::to_string(multi[c]);
        bad += ")";
      }
      throw std::runtime_error(
          "fit_pilot: singular design; unsupported basis indices " + bad +
          " (rank " + std::to_string(qr.rank()) + " of " + std::to_string(q) + ")");
    }
    fit.coeffs = qr.solve(ds.y);
    const Eigen::VectorXd resid_normal =
        Phi.transpose() * (ds.y - Phi * fit.coeffs);
    const double scale = (Phi.transpose() * ds.y).cwiseAbs().maxCoeff();
    if (resid_normal.cwiseAbs().maxCoeff() > 1e-8 * std::max(scale, 1e-12))
      throw std::runtime_error("fit_pilot: least-squares solve failed the "
                               "normal-equation residual check");
    if (ds.n() > q) {
      fit.tau2 = (ds.y - Phi * fit.coeffs).squaredNorm() / (ds.n() - q);
      fit.status = "ok";
    } else {
      fit.status = "saturated";
    }
  } else {
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(Phi);
    fit.coeffs = cod.solve(ds.y);
    fit.status = "underdetermined";
  }
  return fit;
}

inline Eigen::VectorXd predict_pilot(const PilotFit& fit,
                                     const Eigen::MatrixXd& X) {
  if (X.cols() != fit.d)
    throw std::invalid_argument("predict_pilot: dimension mismatch");
  Eigen::VectorXd out(X.rows());
  for (int r = 0; r < X.rows(); ++r)
    out[r] = fit.coeffs.dot(eval_tensor_vector(fit.grid, X.row(r).transpose()));
  return out;
}

// The fitted function as an explicit network, along with its basis net and
// the sup-norm discrepancy bound against the exact spline predictor.
struct PilotNetwork {
  TensorBasisNet basis;
  ReluNetwork net;
  double bound = 0.0;  // sup |net - spline predictor|
};

inline PilotNetwork pilot_to_network(const PilotFit& fit, int m) {
  TensorBasisNet basis = build_tilde_D(fit.grid, fit.d, m);
  ReluNetwork net = assemble_fnet(fit.coeffs, basis);
  const double bound =
      fit.coeffs.norm() * std::sqrt(static_cast<double>(fit.q())) * basis.bound;
  return PilotNetwork{std::move(basis), std::move(net), bound};
}

}  // namespace reluspline
