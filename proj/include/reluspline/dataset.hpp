#pragma once

#include <Eigen/Core>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace reluspline {

// Regression sample: rows of X are design points in [0,1]^d.
struct Dataset {
  Eigen::MatrixXd X;  // n x d
  Eigen::VectorXd y;  // n

  int n() const { return static_cast<int>(X.rows()); }
  int d() const { return static_cast<int>(X.cols()); }
};

// CSV with header x1,...,xd,y.
inline Dataset read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_csv: cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("read_csv: empty file " + path);
  std::vector<std::string> cols;
  {
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      while (!tok.empty() && (tok.back() == '\r' || tok.back() == ' ')) tok.pop_back();
      cols.push_back(tok);
    }
  }
  if (cols.size() < 2 || cols.back() != "y")
    throw std::runtime_error("read_csv: expected header x1,...,xd,y in " + path);
  const int d = static_cast<int>(cols.size()) - 1;
  for (int c = 0; c < d; ++c)
    if (cols[static_cast<size_t>(c)] != "x" + std::to_string(c + 1))
      throw std::runtime_error("read_csv: unexpected column '" +
                               cols[static_cast<size_t>(c)] + "' in " + path);
  std::vector<double> vals;
  int n = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    std::stringstream ss(line);
    std::string tok;
    int got = 0;
    while (std::getline(ss, tok, ',')) {
      vals.push_back(std::stod(tok));
      ++got;
    }
    if (got != d + 1)
      throw std::runtime_error("read_csv: row " + std::to_string(n + 2) +
                               " has " + std::to_string(got) + " fields, want " +
                               std::to_string(d + 1));
    ++n;
  }
  Dataset ds;
  ds.X = Eigen::MatrixXd(n, d);
  ds.y = Eigen::VectorXd(n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < d; ++c)
      ds.X(r, c) = vals[static_cast<size_t>(r) * (d + 1) + c];
    ds.y[r] = vals[static_cast<size_t>(r) * (d + 1) + d];
  }
  return ds;
}

inline void write_csv(const std::string& path, const Dataset& ds) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_csv: cannot open " + path);
  out.precision(17);
  for (int c = 0; c < ds.d(); ++c) out << "x" << (c + 1) << ",";
  out << "y\n";
  for (int r = 0; r < ds.n(); ++r) {
    for (int c = 0; c < ds.d(); ++c) out << ds.X(r, c) << ",";
    out << ds.y[r] << "\n";
  }
}

}  // namespace reluspline
