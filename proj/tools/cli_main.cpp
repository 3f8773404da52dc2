#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "reluspline/certification.hpp"
#include "reluspline/dataset.hpp"
#include "reluspline/experiments.hpp"
#include "reluspline/fit_json.hpp"
#include "reluspline/inference.hpp"
#include "reluspline/json_io.hpp"
#include "reluspline/sim_config.hpp"

namespace {

using namespace reluspline;
namespace fs = std::filesystem;

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return json::parse(in);
}

SimConfig load_config(const std::string& path, uint64_t seed_override,
                      bool seed_given) {
  SimConfig cfg =
      path.empty() ? SimConfig{} : sim_config_from_json(load_json_file(path));
  if (seed_given) cfg.seed = seed_override;
  return cfg;
}

void write_text(const fs::path& path, const std::string& text) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << text;
}

// stdout when no output directory is given, <dir>/<name> otherwise
void emit(const std::string& out_dir, const std::string& name,
          const std::string& text) {
  if (out_dir.empty()) {
    std::cout << text;
    return;
  }
  const fs::path path = fs::path(out_dir) / name;
  write_text(path, text);
  std::cout << path.string() << "\n";
}

int auto_m(long n, int M, int d) {
  const double s = std::sqrt(double(n)) * std::pow(double(M), 0.5 * d);
  return std::max(2, static_cast<int>(std::ceil(std::log(s) / std::log(4.0))) +
                         1);
}

void lint_resolution(int n, int M, int m, int d) {
  const double s = std::sqrt(double(n)) * std::pow(double(M), 0.5 * d);
  if (s > std::pow(4.0, m))
    std::cerr << "warning: resolution condition violated at n=" << n
              << ", M=" << M << ", m=" << m << ": sqrt(n) h^(-d/2) = " << s
              << " > 4^m = " << std::pow(4.0, m)
              << "; refine m for valid inference\n";
}

// points CSV: header x1,...,xd with an optional trailing y column (ignored)
Eigen::MatrixXd read_points_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_points_csv: cannot open " + path);
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("read_points_csv: empty file " + path);
  std::vector<std::string> cols;
  std::stringstream hs(line);
  std::string tok;
  while (std::getline(hs, tok, ',')) cols.push_back(tok);
  int d = static_cast<int>(cols.size());
  bool has_y = !cols.empty() && cols.back() == "y";
  if (has_y) --d;
  for (int c = 0; c < d; ++c)
    if (cols[static_cast<size_t>(c)] != "x" + std::to_string(c + 1))
      throw std::runtime_error(
          "read_points_csv: expected header x1,...,xd[,y] in " + path);
  if (d < 1)
    throw std::runtime_error("read_points_csv: no coordinate columns in " +
                             path);
  std::vector<double> vals;
  long rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ls(line);
    for (int c = 0; c < d + (has_y ? 1 : 0); ++c) {
      if (!std::getline(ls, tok, ','))
        throw std::runtime_error("read_points_csv: short row in " + path);
      if (c < d) vals.push_back(std::stod(tok));
    }
    ++rows;
  }
  Eigen::MatrixXd X(rows, d);
  for (long r = 0; r < rows; ++r)
    for (int c = 0; c < d; ++c)
      X(r, c) = vals[static_cast<size_t>(r * d + c)];
  return X;
}

struct LoadedFit {
  std::string model;  // "pilot" | "additive"
  PilotFit pilot;
  AdditiveFit additive;
};

LoadedFit load_fit(const std::string& path) {
  const json j = load_json_file(path);
  LoadedFit lf;
  lf.model = j.at("model").get<std::string>();
  if (lf.model == "pilot")
    lf.pilot = pilot_fit_from_json(j);
  else if (lf.model == "additive")
    lf.additive = additive_fit_from_json(j);
  else
    throw std::runtime_error("unknown fit model '" + lf.model + "'");
  return lf;
}

int cmd_certify(int k, int d, int M, int m, const std::string& out_dir) {
  const std::vector<Certificate> certs = certify_family(k, d, M, m);
  json arr = json::array();
  bool all_pass = true;
  for (const auto& c : certs) {
    arr.push_back(to_json(c));
    all_pass = all_pass && c.pass;
  }
  emit(out_dir, "certificates.json", arr.dump(2) + "\n");
  for (const auto& c : certs)
    std::cerr << c.target << ": scan_max_error " << c.scan_max_error
              << " <= bound " << c.analytic_bound << " over " << c.grid_points
              << " points: " << (c.pass ? "pass" : "FAIL") << "\n";
  return all_pass ? 0 : 2;
}

int cmd_fit(const std::string& data_path, const SimConfig& cfg,
            const std::string& out_dir) {
  const Dataset ds = read_csv(data_path);
  if (ds.d() != cfg.d)
    throw std::runtime_error("fit: data has d=" + std::to_string(ds.d()) +
                             " but config says d=" + std::to_string(cfg.d));
  const int M = resolve_M(cfg, static_cast<int>(ds.n()));
  json out;
  if (cfg.estimator == "additive") {
    const std::vector<KnotGrid> grids(static_cast<size_t>(cfg.d),
                                      make_cardinal_grid(M, cfg.k));
    const AdditiveFit fit = fit_additive(ds, grids);
    out = to_json(fit);
    std::cerr << "additive fit: n=" << fit.n << " p=" << fit.p()
              << " status=" << fit.status << "\n";
  } else {
    const PilotFit fit = fit_pilot(ds, make_cardinal_grid(M, cfg.k));
    out = to_json(fit);
    std::cerr << "pilot fit: n=" << fit.n << " q=" << fit.q()
              << " status=" << fit.status << "\n";
  }
  emit(out_dir, "fit.json", out.dump(2) + "\n");
  return 0;
}

int cmd_predict(const std::string& fit_path, const std::string& net_path,
                const std::string& points_path, const std::string& out_dir,
                const std::string& format) {
  const Eigen::MatrixXd X = read_points_csv(points_path);
  Eigen::VectorXd yhat;
  if (!net_path.empty()) {
    const ReluNetwork net = network_from_json(load_json_file(net_path));
    if (net.input_dim() != X.cols())
      throw std::runtime_error("predict: network takes input_dim=" +
                               std::to_string(net.input_dim()) + " but points have d=" +
                               std::to_string(X.cols()));
    yhat = net.evaluate_batch(X.transpose()).row(0).transpose();
  } else {
    const LoadedFit lf = load_fit(fit_path);
    yhat = (lf.model == "pilot") ? predict_pilot(lf.pilot, X)
                                 : predict_additive(lf.additive, X);
  }
  if (format == "json") {
    json rows = json::array();
    for (long r = 0; r < X.rows(); ++r) {
      json rec{{"prediction", yhat[r]}};
      rec["x"] = std::vector<double>(X.row(r).data(), X.row(r).data() + X.cols());
      rows.push_back(rec);
    }
    emit(out_dir, "predictions.json", rows.dump(2) + "\n");
  } else {
    std::ostringstream csv;
    for (long c = 0; c < X.cols(); ++c) csv << "x" << (c + 1) << ",";
    csv << "prediction\n";
    csv.precision(17);
    for (long r = 0; r < X.rows(); ++r) {
      for (long c = 0; c < X.cols(); ++c) csv << X(r, c) << ",";
      csv << yhat[r] << "\n";
    }
    emit(out_dir, "predictions.csv", csv.str());
  }
  return 0;
}

int cmd_ci(const std::string& fit_path, const std::vector<std::string>& x0_args,
           double alpha, int m, const std::string& out_dir) {
  const LoadedFit lf = load_fit(fit_path);
  if (lf.model != "pilot")
    throw std::runtime_error(
        "ci: pointwise intervals are defined for pilot fits");
  const PilotFit& fit = lf.pilot;
  if (m <= 0) m = auto_m(fit.n, fit.grid.M, fit.d);
  lint_resolution(fit.n, fit.grid.M, m, fit.d);
  const PilotNetwork pn = pilot_to_network(fit, m);
  json arr = json::array();
  for (const std::string& arg : x0_args) {
    std::vector<double> coords;
    std::stringstream ss(arg);
    std::string tok;
    while (std::getline(ss, tok, ',')) coords.push_back(std::stod(tok));
    if (static_cast<int>(coords.size()) != fit.d)
      throw std::runtime_error("ci: point '" + arg + "' has " +
                               std::to_string(coords.size()) +
                               " coordinates but the fit has d=" +
                               std::to_string(fit.d));
    Eigen::VectorXd x0 = Eigen::Map<Eigen::VectorXd>(
        coords.data(), static_cast<long>(coords.size()));
    const PointwiseInterval ci = pointwise_ci(fit, pn.net, x0, alpha);
    arr.push_back(json{{"x", coords},
                       {"estimate", ci.estimate},
                       {"variance", ci.variance},
                       {"alpha", ci.alpha},
                       {"lower", ci.lower},
                       {"upper", ci.upper},
                       {"degenerate", ci.degenerate}});
  }
  emit(out_dir, "intervals.json", arr.dump(2) + "\n");
  return 0;
}

int cmd_test(const std::string& data_path, const SimConfig& cfg, int M_flag,
             int m_flag, double alpha, double tau2_known, bool tau_given,
             const std::string& out_dir) {
  const Dataset ds = read_csv(data_path);
  SimConfig tcfg = cfg;
  tcfg.d = static_cast<int>(ds.d());
  if (M_flag > 0) {
    tcfg.bandwidth_rule = "explicit";
    tcfg.M_override = M_flag;
  } else if (tcfg.bandwidth_rule == "estimation") {
    tcfg.bandwidth_rule = "testing";  // test statistic wants undersmoothing
  }
  const int n = static_cast<int>(ds.n());
  const int M = resolve_M(tcfg, n);
  const int m = (m_flag > 0) ? m_flag : auto_m(n, M, tcfg.d);
  lint_resolution(n, M, m, tcfg.d);
  const PilotFit fit = fit_pilot(ds, make_cardinal_grid(M, tcfg.k));
  const PilotNetwork pn = pilot_to_network(fit, m);
  const TestResult res = gof_test(
      fit, pn.net, ds, alpha,
      tau_given ? tau2_known : std::numeric_limits<double>::quiet_NaN());
  emit(out_dir, "test.json", to_json(res).dump(2) + "\n");
  return 0;
}

int cmd_emit_net(const std::string& fit_path, int m,
                 const std::string& out_dir) {
  const LoadedFit lf = load_fit(fit_path);
  json net_json;
  if (lf.model == "pilot") {
    if (m <= 0) m = auto_m(lf.pilot.n, lf.pilot.grid.M, lf.pilot.d);
    const PilotNetwork pn = pilot_to_network(lf.pilot, m);
    net_json = to_json(pn.net);
    std::cerr << "pilot network: depth " << pn.net.depth() << ", sup error <= "
              << pn.bound << "\n";
  } else {
    if (m <= 0)
      m = auto_m(lf.additive.n, lf.additive.grids.front().M, 1);
    const AdditiveNetwork an = additive_to_network(lf.additive, m);
    net_json = to_json(an.net);
    std::cerr << "additive network: depth " << an.net.depth()
              << ", sup error <= " << an.bound << "\n";
  }
  emit(out_dir, "net.json", net_json.dump(2) + "\n");
  return 0;
}

void lint_experiment(const SimConfig& cfg, bool depth_rule) {
  for (const int n : cfg.n_list) {
    const int M = resolve_M(cfg, n);
    const int m = depth_rule ? resolve_m_depth(cfg, n) : resolve_m(cfg, n, M);
    lint_resolution(n, M, m, cfg.d);
  }
}

int run_and_write(const ExperimentReport& rep, const std::string& out_dir,
                  const std::string& format) {
  write_report(rep, out_dir, format);
  std::cout << rep.experiment << " report written to " << out_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "reluspline: spline regression compiled into certified ReLU networks"};
  app.require_subcommand(1);

  std::string config_path, out_dir, format = "csv", data_path, fit_path,
              net_path, points_path;
  uint64_t seed = 0;
  bool seed_given = false;
  int k = 3, d = 1, M = 4, m = 4, M_flag = 0, m_flag = 0;
  double alpha = 0.05, tau2_known = 0.0;
  std::vector<std::string> x0_args;
  std::string scales_arg = "0,1,2,4,8", mlist_arg = "4,8,16";

  const auto add_common = [&](CLI::App* sub, bool with_format) {
    sub->add_option("--config", config_path, "JSON experiment configuration");
    sub->add_option("--seed", seed, "master seed override")
        ->each([&](const std::string&) { seed_given = true; });
    sub->add_option("--out", out_dir, "output directory");
    if (with_format)
      sub->add_option("--format", format, "records format: csv|json")
          ->check(CLI::IsMember({"csv", "json"}));
  };

  auto* certify = app.add_subcommand(
      "certify", "scan constructed networks against analytic error bounds");
  certify->add_option("--k", k, "spline order");
  certify->add_option("--d", d, "dimension");
  certify->add_option("--M", M, "knot cells");
  certify->add_option("--m", m, "refinement level");
  certify->add_option("--out", out_dir, "output directory");

  auto* fit = app.add_subcommand("fit", "least-squares spline fit from CSV");
  fit->add_option("--data", data_path, "CSV with header x1,...,xd,y")
      ->required();
  add_common(fit, false);

  auto* predict =
      app.add_subcommand("predict", "evaluate a fit or network at points");
  predict->add_option("--fit", fit_path, "fit JSON produced by `fit`");
  predict->add_option("--load-net", net_path, "network JSON to evaluate");
  predict->add_option("--points", points_path, "CSV with header x1,...,xd")
      ->required();
  predict->add_option("--out", out_dir, "output directory");
  predict->add_option("--format", format, "csv|json")
      ->check(CLI::IsMember({"csv", "json"}));

  auto* ci = app.add_subcommand("ci", "pointwise confidence intervals");
  ci->add_option("--fit", fit_path, "pilot fit JSON")->required();
  ci->add_option("--x0", x0_args, "evaluation point (d comma-separated "
                                  "coordinates); repeatable")
      ->required();
  ci->add_option("--alpha", alpha, "two-sided level");
  ci->add_option("--m", m_flag, "refinement level (0: resolution rule)");
  ci->add_option("--out", out_dir, "output directory");

  auto* test =
      app.add_subcommand("test", "goodness-of-fit test of H0: f0 = 0");
  test->add_option("--data", data_path, "CSV with header x1,...,xd,y")
      ->required();
  test->add_option("--alpha", alpha, "test level");
  auto* tau_opt = test->add_option("--tau-known", tau2_known,
                                   "known noise variance tau^2");
  test->add_option("--M", M_flag, "knot cells (0: testing bandwidth rule)");
  test->add_option("--m", m_flag, "refinement level (0: resolution rule)");
  add_common(test, false);

  auto* rates = app.add_subcommand("rates", "Monte Carlo convergence rates");
  add_common(rates, true);

  auto* nullcal =
      app.add_subcommand("null-calib", "null distribution calibration");
  add_common(nullcal, true);

  auto* power = app.add_subcommand("power", "power curve across signal scales");
  power->add_option("--scales", scales_arg, "comma-separated signal scales");
  add_common(power, true);

  auto* diagnose =
      app.add_subcommand("diagnose", "design eigenvalues and norm equivalence");
  diagnose->add_option("--M-list", mlist_arg, "comma-separated knot counts");
  add_common(diagnose, true);

  auto* emit_net = app.add_subcommand(
      "emit-net", "compile a fit into a network JSON");
  emit_net->add_option("--fit", fit_path, "fit JSON produced by `fit`")
      ->required();
  emit_net->add_option("--m", m_flag, "refinement level (0: resolution rule)");
  emit_net->add_option("--out", out_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (certify->parsed()) return cmd_certify(k, d, M, m, out_dir);

    if (fit->parsed())
      return cmd_fit(data_path, load_config(config_path, seed, seed_given),
                     out_dir);

    if (predict->parsed()) {
      if (fit_path.empty() == net_path.empty())
        throw std::runtime_error(
            "predict: give exactly one of --fit and --load-net");
      return cmd_predict(fit_path, net_path, points_path, out_dir, format);
    }

    if (ci->parsed()) return cmd_ci(fit_path, x0_args, alpha, m_flag, out_dir);

    if (test->parsed())
      return cmd_test(data_path, load_config(config_path, seed, seed_given),
                      M_flag, m_flag, alpha, tau2_known, tau_opt->count() > 0,
                      out_dir);

    if (emit_net->parsed()) return cmd_emit_net(fit_path, m_flag, out_dir);

    const SimConfig cfg = load_config(config_path, seed, seed_given);
    if (out_dir.empty()) out_dir = "reluspline_out";

    if (rates->parsed()) {
      lint_experiment(cfg, true);
      return run_and_write(run_rate_experiment(cfg), out_dir, format);
    }
    if (nullcal->parsed()) {
      lint_experiment(cfg, false);
      return run_and_write(run_null_calibration(cfg), out_dir, format);
    }
    if (power->parsed()) {
      lint_experiment(cfg, false);
      std::vector<double> scales;
      std::stringstream ss(scales_arg);
      std::string tok;
      while (std::getline(ss, tok, ',')) scales.push_back(std::stod(tok));
      return run_and_write(run_power_curve(cfg, scales), out_dir, format);
    }
    if (diagnose->parsed()) {
      std::vector<int> M_list;
      std::stringstream ss(mlist_arg);
      std::string tok;
      while (std::getline(ss, tok, ',')) M_list.push_back(std::stoi(tok));
      return run_and_write(run_diagnostics(cfg, M_list), out_dir, format);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
