#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "reluspline/dataset.hpp"
#include "reluspline/json_io.hpp"
#include "reluspline/pilot_fit.hpp"
#include "reluspline/relu_network.hpp"

namespace reluspline {

inline double normal_cdf(double z) {
  // Phi(z) = erfc(-z/sqrt(2))/2
  return 0.5 * std::erfc(-z * M_SQRT1_2);
}

// Inverse standard normal CDF: rational approximation (Acklam-style minimax
// over three regions) followed by one Halley step against erfc, leaving
// |error| far below 1e-8 across (0,1).
inline double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("normal_quantile: p must lie strictly in "
                                "(0,1), got " + std::to_string(p));
  static const double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                              -2.759285104469687e+02, 1.383577518672690e+02,
                              -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                              -1.556989798598866e+02, 6.680131188771972e+01,
                              -1.328068155288572e+01};
  static const double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                              -2.400758277161838e+00, -2.549732539343734e+00,
                              4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                              2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  double x;
  if (p < plow) {
    const double r = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * r + c[1]) * r + c[2]) * r + c[3]) * r + c[4]) * r + c[5]) /
        ((((d[0] * r + d[1]) * r + d[2]) * r + d[3]) * r + 1.0);
  } else if (p <= 1.0 - plow) {
    const double q = p - 0.5, r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
        q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double r = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * r + c[1]) * r + c[2]) * r + c[3]) * r + c[4]) * r + c[5]) /
        ((((d[0] * r + d[1]) * r + d[2]) * r + d[3]) * r + 1.0);
  }
  // Halley refinement:  e = Phi(x) - p,  u = e / phi(x).
  const double e = normal_cdf(x) - p;
  const double u = e * std::sqrt(2.0 * M_PI) * std::exp(0.5 * x * x);
  x -= u / (1.0 + 0.5 * x * u);
  return x;
}

struct PointwiseInterval {
  Eigen::VectorXd x;
  double estimate = 0.0;
  double variance = 0.0;  // tau2 * D(x)' (Phi'Phi)^{-1} D(x)
  double alpha = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  bool degenerate = false;  // tau2 == 0: width carries no information
};

// Solves (Phi'Phi) u = D and verifies the solve actually inverted the Gram.
inline Eigen::VectorXd gram_solve(const Eigen::MatrixXd& gram,
                                  const Eigen::VectorXd& rhs) {
  Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
  const Eigen::VectorXd u = ldlt.solve(rhs);
  const double resid = (gram * u - rhs).cwiseAbs().maxCoeff();
  if (!std::isfinite(resid) ||
      resid > 1e-8 * std::max(1.0, rhs.cwiseAbs().maxCoeff()))
    throw std::runtime_error("gram_solve: Gram matrix is numerically "
                             "singular (solve residual " +
                             std::to_string(resid) + ")");
  return u;
}

inline PointwiseInterval pointwise_ci(const PilotFit& fit,
                                      const ReluNetwork& net,
                                      const Eigen::VectorXd& x, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("pointwise_ci: alpha must lie in (0,1)");
  if (x.size() != fit.d)
    throw std::invalid_argument("pointwise_ci: point dimension " +
                                std::to_string(x.size()) + " != fit dimension " +
                                std::to_string(fit.d));
  if (net.input_dim() != fit.d || net.output_dim() != 1)
    throw std::invalid_argument("pointwise_ci: network shape does not match "
                                "the fit");
  if (!fit.certified())
    throw std::invalid_argument("pointwise_ci: fit status '" + fit.status +
                                "' carries no variance estimate");

  const Eigen::VectorXd D = eval_tensor_vector(fit.grid, x);
  const Eigen::VectorXd u = gram_solve(fit.gram, D);
  const double quad = D.dot(u);
  if (quad <= 0.0)
    throw std::runtime_error("pointwise_ci: quadratic form D'(Phi'Phi)^{-1}D "
                             "came out nonpositive (" + std::to_string(quad) +
                             "); the Gram solve is unreliable here");

  PointwiseInterval ci;
  ci.x = x;
  ci.alpha = alpha;
  ci.estimate = net.evaluate(x)[0];
  ci.variance = fit.tau2 * quad;
  ci.degenerate = (fit.tau2 == 0.0);
  const double half = normal_quantile(1.0 - alpha / 2.0) * std::sqrt(ci.variance);
  ci.lower = ci.estimate - half;
  ci.upper = ci.estimate + half;
  return ci;
}

struct TestResult {
  double T_n = 0.0;  // ||f_net||_n^2 at the design points
  long q = 0;
  double Z_n = 0.0;  // (n T_n / tau2 - q) / sqrt(2q)
  double alpha = 0.0;
  double p_value = 0.0;
  bool reject = false;
  double tau2_used = 0.0;
  double pilot_T_n = 0.0;  // same statistic from the exact spline predictor
  double pilot_Z_n = 0.0;
};

inline TestResult gof_test(
    const PilotFit& fit, const ReluNetwork& net, const Dataset& data,
    double alpha,
    double tau2_known = std::numeric_limits<double>::quiet_NaN()) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("gof_test: alpha must lie in (0,1)");
  const long q = fit.q();
  const long n = data.n();
  if (q >= n)
    throw std::invalid_argument(
        "gof_test: basis size q=" + std::to_string(q) + " must be smaller "
        "than the sample size n=" + std::to_string(n) +
        "; the chi-square normalization has no degrees of freedom left");
  if (data.d() != fit.d)
    throw std::invalid_argument("gof_test: data dimension does not match fit");

  const double tau2 = std::isnan(tau2_known) ? fit.tau2 : tau2_known;
  if (!(tau2 > 0.0) || !std::isfinite(tau2))
    throw std::invalid_argument(
        "gof_test: need a positive noise variance (fit status '" + fit.status +
        "', tau2 " + std::to_string(tau2) + "); pass tau2_known to override");

  const Eigen::MatrixXd net_vals = net.evaluate_batch(data.X.transpose());
  const Eigen::VectorXd pilot_vals = predict_pilot(fit, data.X);
  const double sq2q = std::sqrt(2.0 * static_cast<double>(q));

  TestResult res;
  res.q = q;
  res.alpha = alpha;
  res.tau2_used = tau2;
  res.T_n = net_vals.row(0).squaredNorm() / static_cast<double>(n);
  res.pilot_T_n = pilot_vals.squaredNorm() / static_cast<double>(n);
  res.Z_n = (n * res.T_n / tau2 - q) / sq2q;
  res.pilot_Z_n = (n * res.pilot_T_n / tau2 - q) / sq2q;
  res.p_value = std::erfc(std::abs(res.Z_n) * M_SQRT1_2);  // 2(1-Phi(|Z|))
  res.reject = std::abs(res.Z_n) >= normal_quantile(1.0 - alpha / 2.0);
  return res;
}

inline json to_json(const TestResult& r) {
  return json{{"T_n", r.T_n},        {"q", r.q},
              {"Z_n", r.Z_n},        {"p_value", r.p_value},
              {"reject", r.reject},  {"tau2_used", r.tau2_used},
              {"pilot_Z_n", r.pilot_Z_n}};
}

}  // namespace reluspline
