#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "reluspline/dataset.hpp"
#include "reluspline/json_io.hpp"
#include "reluspline/knot_grid.hpp"
#include "reluspline/philox_rng.hpp"

namespace reluspline {

// Monte Carlo experiment configuration.  The bandwidth rule turns a sample
// size into a knot count: estimation-optimal M ~ n^{1/(2beta+d)}, testing
// M ~ n^{2/(4beta+d)}, or an explicit override.
struct SimConfig {
  std::string target = "sin2pi";  // zero | sin2pi | linear | additive_sin
  double amplitude = 1.0;
  double beta = 2.0;
  std::string design = "uniform";  // uniform | tilted
  std::string noise = "gaussian";  // gaussian | t5
  double tau = 0.5;
  std::vector<int> n_list{500};
  int d = 1;
  int k = 3;
  std::string bandwidth_rule = "estimation";  // estimation | testing | explicit
  int M_override = 0;
  int m_override = 0;  // 0: resolution rule m = ceil(log4(sqrt(n) h^{-d/2})) + 1
  int reps = 200;
  uint64_t seed = 20260821ull;
  std::string estimator = "pilot";  // pilot | additive
  bool tau_known = false;           // tests divide by tau^2 instead of tau-hat^2
  double alpha = 0.05;
};

inline void validate_config(const SimConfig& cfg) {
  if (cfg.d != 1 && cfg.d != 2)
    throw std::invalid_argument("SimConfig: d must be 1 or 2");
  if (cfg.k < 2 || cfg.k > 6)
    throw std::invalid_argument("SimConfig: spline order k must be in [2,6]");
  if (!(cfg.beta > 0.0))
    throw std::invalid_argument("SimConfig: beta must be positive");
  if (!(cfg.tau >= 0.0))
    throw std::invalid_argument("SimConfig: tau must be nonnegative");
  if (cfg.n_list.empty())
    throw std::invalid_argument("SimConfig: n_list must be nonempty");
  for (int n : cfg.n_list)
    if (n < 4) throw std::invalid_argument("SimConfig: every n must be >= 4");
  if (cfg.reps < 1)
    throw std::invalid_argument("SimConfig: reps must be positive");
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0))
    throw std::invalid_argument("SimConfig: alpha must lie in (0,1)");
  if (cfg.target != "zero" && cfg.target != "sin2pi" &&
      cfg.target != "linear" && cfg.target != "additive_sin")
    throw std::invalid_argument("SimConfig: unknown target '" + cfg.target +
                                "'");
  if ((cfg.target == "sin2pi" || cfg.target == "linear") && cfg.d != 1)
    throw std::invalid_argument("SimConfig: target '" + cfg.target +
                                "' is univariate");
  if (cfg.target == "additive_sin" && cfg.d != 2)
    throw std::invalid_argument("SimConfig: target 'additive_sin' needs d=2");
  if (cfg.design != "uniform" && cfg.design != "tilted")
    throw std::invalid_argument("SimConfig: unknown design '" + cfg.design +
                                "'");
  if (cfg.noise != "gaussian" && cfg.noise != "t5")
    throw std::invalid_argument("SimConfig: unknown noise '" + cfg.noise + "'");
  if (cfg.estimator != "pilot" && cfg.estimator != "additive")
    throw std::invalid_argument("SimConfig: unknown estimator '" +
                                cfg.estimator + "'");
  if (cfg.bandwidth_rule != "estimation" && cfg.bandwidth_rule != "testing" &&
      cfg.bandwidth_rule != "explicit")
    throw std::invalid_argument("SimConfig: unknown bandwidth_rule '" +
                                cfg.bandwidth_rule + "'");
  if (cfg.bandwidth_rule == "explicit" && cfg.M_override < 2)
    throw std::invalid_argument(
        "SimConfig: explicit bandwidth rule needs M_override >= 2");
}

inline json to_json(const SimConfig& cfg) {
  return json{{"target", cfg.target},
              {"amplitude", cfg.amplitude},
              {"beta", cfg.beta},
              {"design", cfg.design},
              {"noise", cfg.noise},
              {"tau", cfg.tau},
              {"n_list", cfg.n_list},
              {"d", cfg.d},
              {"k", cfg.k},
              {"bandwidth_rule", cfg.bandwidth_rule},
              {"M_override", cfg.M_override},
              {"m_override", cfg.m_override},
              {"reps", cfg.reps},
              {"seed", cfg.seed},
              {"estimator", cfg.estimator},
              {"tau_known", cfg.tau_known},
              {"alpha", cfg.alpha}};
}

inline SimConfig sim_config_from_json(const json& j) {
  static const std::vector<std::string> known{
      "target", "amplitude", "beta", "design", "noise",
      "tau",    "n_list",    "d",    "k",      "bandwidth_rule",
      "M_override", "m_override", "reps", "seed", "estimator",
      "tau_known", "alpha"};
  for (const auto& [key, val] : j.items()) {
    (void)val;
    bool ok = false;
    for (const auto& name : known) ok = ok || (key == name);
    if (!ok)
      throw std::invalid_argument("SimConfig: unknown key '" + key + "'");
  }
  SimConfig cfg;
  if (j.contains("target")) cfg.target = j.at("target").get<std::string>();
  if (j.contains("amplitude")) cfg.amplitude = j.at("amplitude").get<double>();
  if (j.contains("beta")) cfg.beta = j.at("beta").get<double>();
  if (j.contains("design")) cfg.design = j.at("design").get<std::string>();
  if (j.contains("noise")) cfg.noise = j.at("noise").get<std::string>();
  if (j.contains("tau")) cfg.tau = j.at("tau").get<double>();
  if (j.contains("n_list")) cfg.n_list = j.at("n_list").get<std::vector<int>>();
  if (j.contains("d")) cfg.d = j.at("d").get<int>();
  if (j.contains("k")) cfg.k = j.at("k").get<int>();
  if (j.contains("bandwidth_rule"))
    cfg.bandwidth_rule = j.at("bandwidth_rule").get<std::string>();
  if (j.contains("M_override")) cfg.M_override = j.at("M_override").get<int>();
  if (j.contains("m_override")) cfg.m_override = j.at("m_override").get<int>();
  if (j.contains("reps")) cfg.reps = j.at("reps").get<int>();
  if (j.contains("seed")) cfg.seed = j.at("seed").get<uint64_t>();
  if (j.contains("estimator"))
    cfg.estimator = j.at("estimator").get<std::string>();
  if (j.contains("tau_known")) cfg.tau_known = j.at("tau_known").get<bool>();
  if (j.contains("alpha")) cfg.alpha = j.at("alpha").get<double>();
  validate_config(cfg);
  return cfg;
}

// Knot count for sample size n.  The additive estimator converges at the
// one-dimensional rate, so its bandwidth uses d_eff = 1.
inline int resolve_M(const SimConfig& cfg, int n) {
  if (cfg.bandwidth_rule == "explicit") return cfg.M_override;
  const int d_eff = (cfg.estimator == "additive") ? 1 : cfg.d;
  const double expo = (cfg.bandwidth_rule == "testing")
                          ? 2.0 / (4.0 * cfg.beta + cfg.d)
                          : 1.0 / (2.0 * cfg.beta + d_eff);
  const int M = static_cast<int>(std::llround(std::pow(double(n), expo)));
  return std::max(2, M);
}

// Resolution rule: the smallest m with sqrt(n) h^{-d/2} <= 4^m, plus one.
inline int resolve_m(const SimConfig& cfg, int n, int M) {
  if (cfg.m_override > 0) return cfg.m_override;
  const double s =
      std::sqrt(double(n)) * std::pow(double(M), 0.5 * cfg.d);
  const int m = static_cast<int>(std::ceil(std::log(s) / std::log(4.0))) + 1;
  return std::max(2, m);
}

// Refinement rule for rate studies: pick m so the constructed network depth
// L = (2m+3)(k+d-1) satisfies n^{(2beta+2d)/(2beta+d)} <= 2^{L/(d+k)} with one
// extra refinement level of margin; the network-vs-spline discrepancy is then
// negligible at the estimation rate.
inline int resolve_m_depth(const SimConfig& cfg, int n) {
  if (cfg.m_override > 0) return cfg.m_override;
  const double need_bits = (2.0 * cfg.beta + 2.0 * cfg.d) /
                           (2.0 * cfg.beta + cfg.d) * std::log2(double(n)) *
                           double(cfg.d + cfg.k) / double(cfg.k + cfg.d - 1);
  const int m = 1 + static_cast<int>(std::ceil((need_bits - 3.0) / 2.0));
  return std::max(2, m);
}

// Finite-sample analogue of the resolution condition; a false return is a
// configuration lint warning, not an error.
inline bool resolution_condition_ok(const SimConfig& cfg, int n, int M,
                                    int m) {
  const double s = std::sqrt(double(n)) * std::pow(double(M), 0.5 * cfg.d);
  return s <= std::pow(4.0, m);
}

inline double target_value(const SimConfig& cfg, const Eigen::VectorXd& x) {
  if (cfg.target == "zero") return 0.0;
  if (cfg.target == "sin2pi")
    return cfg.amplitude * std::sin(2.0 * M_PI * x[0]);
  if (cfg.target == "linear") return cfg.amplitude * (x[0] - 0.5);
  // additive_sin
  return cfg.amplitude *
         (std::sin(2.0 * M_PI * x[0]) + std::sin(2.0 * M_PI * x[1]));
}

// Design density Q.  "tilted" is the product density q(x) = (1+x)/1.5 per
// coordinate: bounded away from 0 and infinity with c = 1.5.
inline double design_density(const SimConfig& cfg, const Eigen::VectorXd& x) {
  if (cfg.design == "uniform") return 1.0;
  double q = 1.0;
  for (int c = 0; c < x.size(); ++c) q *= (1.0 + x[c]) / 1.5;
  return q;
}

inline double sample_design_coordinate(const SimConfig& cfg, RandomStream& rs) {
  const double u = rs.uniform();
  if (cfg.design == "uniform") return u;
  // inverse CDF of (1+x)/1.5:  x^2/2 + x = 1.5 u
  return std::sqrt(1.0 + 3.0 * u) - 1.0;
}

// One replication's dataset: X_i i.i.d. from Q, Y_i = f0(X_i) + tau * eps_i,
// all draws from the replication's own counter-based stream.
inline Dataset gen_data(const SimConfig& cfg, int n, int rep) {
  RandomStream rs(cfg.seed,
                  derive_stream(cfg.seed, static_cast<uint64_t>(n),
                                static_cast<uint64_t>(rep)));
  Dataset ds;
  ds.X.resize(n, cfg.d);
  ds.y.resize(n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < cfg.d; ++c)
      ds.X(r, c) = sample_design_coordinate(cfg, rs);
    const double eps =
        (cfg.tau == 0.0) ? 0.0
        : (cfg.noise == "t5") ? rs.student_t5()
                              : rs.normal();
    ds.y[r] = target_value(cfg, ds.X.row(r).transpose()) + cfg.tau * eps;
  }
  return ds;
}

// Fixed evaluation grid with Q-weighted trapezoid weights, so that
// sum w_i g(x_i)^2 approximates the population loss E_Q[g(X)^2].
struct LossGrid {
  Eigen::MatrixXd pts;  // rows are points
  Eigen::VectorXd w;
};

inline LossGrid make_loss_grid(const SimConfig& cfg) {
  LossGrid lg;
  if (cfg.d == 1) {
    const int N = 10000;
    lg.pts.resize(N + 1, 1);
    lg.w.resize(N + 1);
    for (int i = 0; i <= N; ++i) {
      lg.pts(i, 0) = double(i) / N;
      const double trap = (i == 0 || i == N) ? 0.5 : 1.0;
      lg.w[i] = trap / N * design_density(cfg, lg.pts.row(i).transpose());
    }
  } else {
    const int N = 200;  // 201 x 201
    const long npts = static_cast<long>(N + 1) * (N + 1);
    lg.pts.resize(npts, 2);
    lg.w.resize(npts);
    long rix = 0;
    for (int i = 0; i <= N; ++i)
      for (int j = 0; j <= N; ++j, ++rix) {
        lg.pts(rix, 0) = double(i) / N;
        lg.pts(rix, 1) = double(j) / N;
        const double ti = (i == 0 || i == N) ? 0.5 : 1.0;
        const double tj = (j == 0 || j == N) ? 0.5 : 1.0;
        lg.w[rix] =
            ti * tj / double(N) / double(N) *
            design_density(cfg, lg.pts.row(rix).transpose());
      }
  }
  return lg;
}

inline Eigen::VectorXd target_values(const SimConfig& cfg,
                                     const Eigen::MatrixXd& pts) {
  Eigen::VectorXd out(pts.rows());
  for (long r = 0; r < pts.rows(); ++r)
    out[r] = target_value(cfg, pts.row(r).transpose());
  return out;
}

// Exact L2(dx) Gram of the univariate B-spline basis: Gauss-Legendre with
// k points per knot interval integrates the degree-(2k-2) products exactly.
inline Eigen::MatrixXd exact_l2_gram(const KnotGrid& grid) {
  static const std::vector<std::vector<std::pair<double, double>>> gl{
      {{0.0, 2.0}},
      {{-0.5773502691896257, 1.0}, {0.5773502691896257, 1.0}},
      {{-0.7745966692414834, 5.0 / 9.0},
       {0.0, 8.0 / 9.0},
       {0.7745966692414834, 5.0 / 9.0}},
      {{-0.8611363115940526, 0.3478548451374538},
       {-0.3399810435848563, 0.6521451548625461},
       {0.3399810435848563, 0.6521451548625461},
       {0.8611363115940526, 0.3478548451374538}},
      {{-0.9061798459386640, 0.2369268850561891},
       {-0.5384693101056831, 0.4786286704993665},
       {0.0, 0.5688888888888889},
       {0.5384693101056831, 0.4786286704993665},
       {0.9061798459386640, 0.2369268850561891}},
      {{-0.9324695142031521, 0.1713244923791704},
       {-0.6612093864662645, 0.3607615730481386},
       {-0.2386191860831969, 0.4679139345726910},
       {0.2386191860831969, 0.4679139345726910},
       {0.6612093864662645, 0.3607615730481386},
       {0.9324695142031521, 0.1713244923791704}}};
  const auto& rule = gl.at(static_cast<size_t>(grid.k - 1));
  const long R = grid.basis_size();
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(R, R);
  for (int cell = 0; cell < grid.M; ++cell) {
    const double a = double(cell) / grid.M;
    const double b = double(cell + 1) / grid.M;
    for (const auto& [node, weight] : rule) {
      const double x = 0.5 * (a + b) + 0.5 * (b - a) * node;
      const Eigen::VectorXd B = eval_basis_vector(grid, x);
      G.noalias() += (0.5 * (b - a) * weight) * B * B.transpose();
    }
  }
  return G;
}

}  // namespace reluspline
