// Acceptance suite: runs the nine release criteria end to end and prints one
// PASS/FAIL line per criterion with the measured numbers.
//
// Exit status is 0 when every criterion matches its documented status: all
// criteria pass except criterion 2, which fails on the d=1 stack-width claim
// for k >= 3 (the product-based construction needs ~4 nodes per squaring
// channel across 5R+1 channels, which exceeds 3(M+2k); depth claims and the
// d=2 width claims hold).  Any other outcome -- another criterion failing, or
// criterion 2 starting to pass -- exits nonzero so the discrepancy is flagged.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <string>
#include <vector>

#include "reluspline/certification.hpp"
#include "reluspline/experiments.hpp"
#include "reluspline/network_builders.hpp"

namespace {

using namespace reluspline;

struct Outcome {
  bool pass = false;
  // Criterion 2 distinguishes its documented red from any other failure; the
  // rest leave this unset and are documented iff they pass.
  bool as_documented = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

std::string fmt(const char* pattern, ...) {
  va_list args;
  va_start(args, pattern);
  char buf[512];
  std::vsnprintf(buf, sizeof(buf), pattern, args);
  va_end(args);
  return std::string(buf);
}

constexpr unsigned long long kSeed = 20260821ull;

// Criterion 1: every certificate in the (k,d,m,M) family grid holds its
// analytic bound on every scanned point, and the order-2 basis path is exact
// to floating-point tolerance.
Outcome criterion1() {
  int n_certs = 0;
  int n_fail = 0;
  double worst_ratio = 0.0;
  std::string worst_tag = "none";
  bool delta2_ok = true;
  for (int k : {2, 3, 4})
    for (int d : {1, 2})
      for (int m : {2, 4, 6, 8})
        for (int M : {2, 4, 8}) {
          const std::vector<Certificate> certs = certify_family(k, d, M, m);
          for (const Certificate& c : certs) {
            ++n_certs;
            if (!c.pass) ++n_fail;
            if (c.analytic_bound > 0.0) {
              const double ratio = c.scan_max_error / c.analytic_bound;
              if (ratio > worst_ratio) {
                worst_ratio = ratio;
                worst_tag = fmt("%s k=%d d=%d M=%d m=%d", c.target.c_str(), k,
                                d, M, m);
              }
            }
            if (c.target == "tilde_b" && k == 2 &&
                (c.analytic_bound > 1e-12 || c.scan_max_error > 1e-12))
              delta2_ok = false;
          }
        }
  Outcome out;
  out.pass = (n_fail == 0) && delta2_ok;
  out.detail =
      fmt("%d certificates, %d violations, worst scan/bound %.6f (%s), "
          "order-2 exact path within 1e-12: %s",
          n_certs, n_fail, worst_ratio, worst_tag.c_str(),
          delta2_ok ? "yes" : "no");
  return out;
}

// Criterion 2: pinned architectures.  The squaring, two-fold product and
// s-fold product shapes must match exactly; the basis stacks must respect the
// claimed depth and width bounds.
Outcome criterion2() {
  std::vector<std::string> fails;
  auto record = [&fails](const std::string& s) { fails.push_back(s); };

  for (int m : {2, 4, 6, 8}) {
    const Architecture sq = build_sq(m).architecture();
    bool sq_ok = sq.depth == 2 * m && sq.input_dim == 1 && sq.output_dim == 1;
    for (int w : sq.widths) sq_ok = sq_ok && (w == 4);
    if (!sq_ok) record(fmt("sq m=%d depth=%d width=%d", m, sq.depth, sq.max_width));

    const Architecture p2 = build_prod2(m).architecture();
    bool p2_ok = p2.depth == 2 * m + 2 && p2.input_dim == 2 && p2.output_dim == 1;
    for (int w : p2.widths) p2_ok = p2_ok && (w == 12);
    if (!p2_ok) record(fmt("prod2 m=%d depth=%d width=%d", m, p2.depth, p2.max_width));

    for (int s : {3, 4}) {
      const Architecture ps = build_prod_s(m, s).architecture();
      if (ps.depth != (s - 1) * (2 * m + 3) - 1 || ps.max_width > 10 + s)
        record(fmt("prod%d m=%d depth=%d width=%d", s, m, ps.depth, ps.max_width));
    }
  }

  // Basis stacks: depth claims hold everywhere; the d=1 width claim fails for
  // k >= 3, which is the documented red.
  bool expected_red_seen = false;
  bool unexpected = false;
  std::string red_example;
  for (int k : {2, 3, 4})
    for (int M : {2, 4, 8})
      for (int m : {2, 4}) {
        const KnotGrid grid = make_cardinal_grid(M, k);
        const Architecture b = build_tilde_B(grid, m).net.architecture();
        if (b.depth > k * (2 * m + 3))
          { record(fmt("tilde_b k=%d M=%d m=%d depth=%d", k, M, m, b.depth)); unexpected = true; }
        if (b.max_width > 3 * (M + 2 * k)) {
          if (k >= 3) {
            expected_red_seen = true;
            if (red_example.empty())
              red_example = fmt("k=%d M=%d m=%d width %d > %d", k, M, m,
                                b.max_width, 3 * (M + 2 * k));
          } else {
            record(fmt("tilde_b k=2 M=%d m=%d width=%d", M, m, b.max_width));
            unexpected = true;
          }
        }
        for (int d : {1, 2}) {
          const Architecture t = build_tilde_D(grid, d, m).net.architecture();
          if (t.depth > (2 * m + 3) * (k + d - 1))
            { record(fmt("tilde_d k=%d d=%d M=%d m=%d depth=%d", k, d, M, m, t.depth)); unexpected = true; }
          int wcap = 3;
          for (int c = 0; c < d; ++c) wcap *= (M + 2 * k);
          if (t.max_width > wcap && !(d == 1 && k >= 3)) {
            record(fmt("tilde_d k=%d d=%d M=%d m=%d width=%d > %d", k, d, M, m,
                       t.max_width, wcap));
            unexpected = true;
          }
        }
      }

  Outcome out;
  out.pass = fails.empty() && !expected_red_seen;
  out.as_documented = fails.empty() && expected_red_seen;
  if (out.pass) {
    out.detail = "all pinned shapes match";
  } else if (!unexpected && fails.empty()) {
    out.detail = fmt(
        "stack width exceeds 3(M+2k) at d=1 for k>=3 (%s); squaring/product "
        "shapes exact, all depth claims and d=2 width claims hold",
        red_example.c_str());
  } else {
    std::string joined;
    for (const std::string& f : fails) joined += (joined.empty() ? "" : "; ") + f;
    out.detail = "unexpected mismatches: " + joined;
  }
  return out;
}

// Criterion 3: the squaring network interpolates x^2 exactly on the dyadic
// grid at every depth up to m=10, in under a second.
Outcome criterion3() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (int m = 1; m <= 10; ++m) {
    const ReluNetwork sq = build_sq(m);
    const int npts = (1 << m) + 1;
    Eigen::MatrixXd pts(1, npts);
    for (int j = 0; j < npts; ++j) pts(0, j) = double(j) / double(1 << m);
    const Eigen::MatrixXd vals = sq.evaluate_batch(pts);
    for (int j = 0; j < npts; ++j)
      worst = std::max(worst, std::abs(vals(0, j) - pts(0, j) * pts(0, j)));
  }
  const double elapsed = seconds_since(t0);
  Outcome out;
  out.pass = worst <= 1e-12 && elapsed < 1.0;
  out.detail = fmt("max dyadic error %.3e (tol 1e-12), %.2fs", worst, elapsed);
  return out;
}

// Criterion 4: minimax rate exponents.  d=1 with order-2 splines (the minimal
// order achieving the beta=2 rate; its basis networks are dyadically exact)
// and d=2 additive with order-3 splines, both on a sqrt(2)-spaced ladder from
// 250 to 4000 with 200 replications.
Outcome criterion4() {
  SimConfig c1;
  c1.target = "sin2pi";
  c1.amplitude = 0.25;
  c1.beta = 2.0;
  c1.k = 2;
  c1.d = 1;
  c1.bandwidth_rule = "estimation";
  c1.estimator = "pilot";
  c1.tau = 1.0;
  c1.reps = 200;
  c1.seed = kSeed;
  c1.n_list = {250, 354, 500, 707, 1000, 1414, 2000, 2828, 4000};
  const ExperimentReport r1 = run_rate_experiment(c1);
  const double s1p = r1.aggregates.at("pilot_fit").at("slope").get<double>();
  const double s1n = r1.aggregates.at("net_fit").at("slope").get<double>();

  SimConfig c2 = c1;
  c2.target = "additive_sin";
  c2.d = 2;
  c2.k = 3;
  c2.estimator = "additive";
  const ExperimentReport r2 = run_rate_experiment(c2);
  const double s2p = r2.aggregates.at("pilot_fit").at("slope").get<double>();
  const double s2n = r2.aggregates.at("net_fit").at("slope").get<double>();

  const bool d1_ok = s1p >= -0.90 && s1p <= -0.70 && s1n >= -0.90 && s1n <= -0.70;
  // Additive rate -2b/(2b+1) = -0.8 within 0.12, and at least 0.1 steeper
  // than the full-tensor d=2 rate -2b/(2b+2) = -2/3.
  auto d2_band = [](double s) {
    return std::abs(s + 0.8) <= 0.12 && s <= -2.0 / 3.0 - 0.1;
  };
  const bool d2_ok = d2_band(s2p) && d2_band(s2n);

  Outcome out;
  out.pass = d1_ok && d2_ok;
  out.detail = fmt(
      "d=1 slopes pilot %.4f net %.4f (band [-0.90,-0.70]); d=2 additive "
      "pilot %.4f net %.4f (|s+0.8|<=0.12 and s<=-0.767)",
      s1p, s1n, s2p, s2n);
  return out;
}

// Criterion 5: the network-vs-pilot sup gap respects the certified bound on
// every fitted run, and with the depth rule for m the mean-loss relative gap
// stays below 5%.  Order-3 splines so the gap is genuinely nonzero.
Outcome criterion5() {
  SimConfig cfg;
  cfg.target = "sin2pi";
  cfg.amplitude = 0.25;
  cfg.beta = 2.0;
  cfg.k = 3;
  cfg.d = 1;
  cfg.bandwidth_rule = "estimation";
  cfg.estimator = "pilot";
  cfg.tau = 1.0;
  cfg.reps = 200;
  cfg.seed = kSeed;
  cfg.n_list = {250, 500, 1000, 2000, 4000};
  const ExperimentReport rep = run_rate_experiment(cfg);
  const bool gap_ok = rep.aggregates.at("all_gap_ok").get<bool>();
  const double rel = rep.aggregates.at("max_rel_gap_mean_loss").get<double>();
  Outcome out;
  out.pass = gap_ok && rel < 0.05;
  out.detail = fmt("sup gap within bound on all %d runs: %s; max relative "
                   "mean-loss gap %.4f (< 0.05)",
                   int(rep.records.size()), gap_ok ? "yes" : "no", rel);
  return out;
}

// Criterion 6: chi-square null calibration at n=2000 with the testing
// bandwidth (beta tag 0.9 gives M=27, q=29), Gaussian noise with known tau.
Outcome criterion6() {
  SimConfig cfg;
  cfg.target = "zero";
  cfg.beta = 0.9;
  cfg.k = 3;
  cfg.d = 1;
  cfg.bandwidth_rule = "testing";
  cfg.estimator = "pilot";
  cfg.tau = 1.0;
  cfg.tau_known = true;
  cfg.alpha = 0.05;
  cfg.reps = 2000;
  cfg.seed = kSeed;
  cfg.n_list = {2000};
  const ExperimentReport rep = run_null_calibration(cfg);
  const json& info = rep.aggregates.at("per_n").at(0);
  const int q = info.at("q").get<int>();
  const double mean_over_q = info.at("mean_nT_pilot_over_q").get<double>();
  const double band = info.at("chi2_mean_band").get<double>();
  const double size = info.at("sizes").at("alpha_0.05").get<double>();
  const double ks = info.at("ks_normal").get<double>();
  Outcome out;
  out.pass = std::abs(mean_over_q - 1.0) <= band && size >= 0.03 &&
             size <= 0.08 && ks <= 0.08;
  out.detail = fmt("q=%d, mean(nT)/q=%.4f (band +-%.4f), size@0.05=%.4f "
                   "(band [0.03,0.08]), KS(Z)=%.4f (<=0.08)",
                   q, mean_over_q, band, size, ks);
  return out;
}

// Criterion 7: pointwise CI coverage with an undersmoothed mesh (M=8 against
// the estimation rule's M=3) and m deep enough that the network error is
// negligible against the pointwise standard error.
Outcome criterion7() {
  SimConfig cfg;
  cfg.target = "sin2pi";
  cfg.amplitude = 1.0;
  cfg.beta = 2.0;
  cfg.k = 3;
  cfg.d = 1;
  cfg.bandwidth_rule = "explicit";
  cfg.M_override = 8;
  cfg.m_override = 6;
  cfg.estimator = "pilot";
  cfg.tau = 1.0;
  cfg.alpha = 0.05;
  cfg.reps = 2000;
  cfg.seed = kSeed;
  cfg.n_list = {500};
  const ExperimentReport rep =
      run_coverage_experiment(cfg, {0.25, 0.5, 0.75});
  Outcome out;
  out.pass = true;
  out.detail = "coverage";
  for (const json& pt : rep.aggregates.at("per_point")) {
    const double cov = pt.at("coverage").get<double>();
    out.pass = out.pass && cov >= 0.93 && cov <= 0.97;
    out.detail += fmt(" x0=%.2f: %.4f", pt.at("x0").get<double>(), cov);
  }
  out.detail += " (band [0.93,0.97])";
  return out;
}

// Criterion 8: power curve against local alternatives at the testing-rate
// separation: size at scale 0, monotone power, full power at the largest
// scale.
Outcome criterion8() {
  SimConfig cfg;
  cfg.target = "sin2pi";
  cfg.beta = 2.0;
  cfg.k = 3;
  cfg.d = 1;
  cfg.bandwidth_rule = "testing";
  cfg.estimator = "pilot";
  cfg.tau = 1.0;
  cfg.tau_known = true;
  cfg.alpha = 0.05;
  cfg.reps = 2000;
  cfg.seed = kSeed;
  cfg.n_list = {1000};
  const ExperimentReport rep = run_power_curve(cfg, {0.0, 1.0, 2.0, 4.0, 8.0});
  std::vector<double> power;
  for (const json& ps : rep.aggregates.at("per_scale"))
    power.push_back(ps.at("power").get<double>());
  bool monotone = true;
  for (size_t i = 1; i < power.size(); ++i)
    monotone = monotone && (power[i] >= power[i - 1] - 0.03);
  Outcome out;
  out.pass = power.front() >= 0.03 && power.front() <= 0.08 && monotone &&
             power.back() >= 0.99;
  out.detail = "power";
  const double scales[] = {0.0, 1.0, 2.0, 4.0, 8.0};
  for (size_t i = 0; i < power.size(); ++i)
    out.detail += fmt(" s=%g: %.4f", scales[i], power[i]);
  out.detail += fmt("; size band [0.03,0.08], monotone slack 0.03, "
                    "final >= 0.99");
  return out;
}

// Criterion 9: Gram eigenvalue windows share a single w across M in {4,8,16},
// and the empirical-vs-exact norm ratio shrinks from n=10R to n=100R.
Outcome criterion9() {
  SimConfig cfg;
  cfg.target = "sin2pi";
  cfg.beta = 2.0;
  cfg.k = 3;
  cfg.d = 1;
  cfg.bandwidth_rule = "explicit";
  cfg.M_override = 8;
  cfg.estimator = "pilot";
  cfg.tau = 1.0;
  cfg.reps = 20;
  cfg.seed = kSeed;
  cfg.n_list = {500};
  const ExperimentReport rep = run_diagnostics(cfg, {4, 8, 16});
  const json& agg = rep.aggregates;
  const double w = agg.at("single_w_required").get<double>();
  const bool positive = agg.at("all_windows_positive").get<bool>();
  const json& ne = agg.at("norm_equivalence");
  const double r_small = ne.at("max_ratio_n_small").get<double>();
  const double r_large = ne.at("max_ratio_n_large").get<double>();
  const bool shrinks = ne.at("max_ratio_shrinks").get<bool>();
  Outcome out;
  out.pass = positive && w <= 128.0 && shrinks;
  out.detail = fmt("single w=%.1f (<=128) across M={4,8,16}, windows "
                   "positive: %s; norm ratio %.4f -> %.4f (shrinks: %s)",
                   w, positive ? "yes" : "no", r_small, r_large,
                   shrinks ? "yes" : "no");
  return out;
}

}  // namespace

int main() {
  // Criterion 2's documented status is FAIL, red exactly on the d=1 stack
  // width for k >= 3; every other criterion must pass.
  Outcome (*checks[9])() = {criterion1, criterion2, criterion3,
                            criterion4, criterion5, criterion6,
                            criterion7, criterion8, criterion9};
  int mismatches = 0;
  for (int i = 0; i < 9; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    const Outcome out = checks[i]();
    const double elapsed = seconds_since(t0);
    std::printf("criterion %d: %s — %s [%.1fs]\n", i + 1,
                out.pass ? "PASS" : "FAIL", out.detail.c_str(), elapsed);
    std::fflush(stdout);
    const bool documented = (i == 1) ? out.as_documented : out.pass;
    if (!documented) ++mismatches;
  }
  if (mismatches == 0) {
    std::printf("acceptance: results match documented status "
                "(8 pass, criterion 2 red as analyzed)\n");
  } else {
    std::printf("acceptance: %d criteria deviate from documented status\n",
                mismatches);
  }
  return mismatches;
}
