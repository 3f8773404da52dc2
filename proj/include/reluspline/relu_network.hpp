#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace reluspline {

// One hidden layer: z -> max(0, W z - v), componentwise.  The shift enters
// with a minus sign, so a node with zero incoming weights and shift -c emits
// the constant c; that is how constants reach the (bias-free) output layer.
struct Layer {
  Eigen::MatrixXd W;
  Eigen::VectorXd v;
};

struct Architecture {
  int input_dim = 0;
  int output_dim = 0;
  int depth = 0;              // number of hidden layers
  std::vector<int> widths;    // hidden layer widths
  int max_width = 0;          // 0 for a pure affine map
};

// Feed-forward ReLU network  x -> W_out sigma_v(W_L ... sigma_v(W_1 x)).
// The output layer is linear with no bias.  Weights are stored dense; an
// internal compressed-row traversal plan (built once) drives evaluation so
// single-point and batched calls accumulate in the same order and agree
// bitwise.
class ReluNetwork {
 public:
  ReluNetwork(int input_dim, std::vector<Layer> hidden, Eigen::MatrixXd W_out)
      : input_dim_(input_dim),
        hidden_(std::move(hidden)),
        W_out_(std::move(W_out)) {
    if (input_dim_ < 1)
      throw std::invalid_argument("ReluNetwork: input_dim must be >= 1");
    int prev = input_dim_;
    for (size_t l = 0; l < hidden_.size(); ++l) {
      const auto& lay = hidden_[l];
      if (lay.W.rows() < 1)
        throw std::invalid_argument("ReluNetwork: empty hidden layer " +
                                    std::to_string(l + 1));
      if (lay.W.cols() != prev)
        throw std::invalid_argument(
            "ReluNetwork: layer " + std::to_string(l + 1) + " expects " +
            std::to_string(lay.W.cols()) + " inputs, got " +
            std::to_string(prev));
      if (lay.v.size() != lay.W.rows())
        throw std::invalid_argument("ReluNetwork: shift size mismatch in layer " +
                                    std::to_string(l + 1));
      if (!lay.W.allFinite() || !lay.v.allFinite())
        throw std::invalid_argument("ReluNetwork: non-finite entry in layer " +
                                    std::to_string(l + 1));
      prev = static_cast<int>(lay.W.rows());
    }
    if (W_out_.rows() < 1)
      throw std::invalid_argument("ReluNetwork: output layer must have rows");
    if (W_out_.cols() != prev)
      throw std::invalid_argument("ReluNetwork: output layer expects " +
                                  std::to_string(W_out_.cols()) +
                                  " inputs, got " + std::to_string(prev));
    if (!W_out_.allFinite())
      throw std::invalid_argument("ReluNetwork: non-finite output weight");
    build_plan();
  }

  int input_dim() const { return input_dim_; }
  int output_dim() const { return static_cast<int>(W_out_.rows()); }
  int depth() const { return static_cast<int>(hidden_.size()); }
  const std::vector<Layer>& hidden() const { return hidden_; }
  const Eigen::MatrixXd& output_weights() const { return W_out_; }

  Architecture architecture() const {
    Architecture a;
    a.input_dim = input_dim_;
    a.output_dim = output_dim();
    a.depth = depth();
    for (const auto& lay : hidden_) a.widths.push_back(static_cast<int>(lay.W.rows()));
    a.max_width = a.widths.empty() ? 0 : *std::max_element(a.widths.begin(), a.widths.end());
    return a;
  }

  Eigen::VectorXd evaluate(const Eigen::VectorXd& x) const {
    Eigen::MatrixXd X(x.size(), 1);
    X.col(0) = x;
    return evaluate_batch(X).col(0);
  }

  // Points are columns of X; result columns align with them.
  Eigen::MatrixXd evaluate_batch(const Eigen::MatrixXd& X) const {
    if (X.rows() != input_dim_)
      throw std::invalid_argument("ReluNetwork::evaluate: point dimension " +
                                  std::to_string(X.rows()) + " != input_dim " +
                                  std::to_string(input_dim_));
    const int np = static_cast<int>(X.cols());
    Eigen::MatrixXd out(output_dim(), np);
    if (np == 0) return out;

    // Working buffers hold one value block in [node][point] layout so the
    // inner point loop is contiguous.
    std::vector<double> cur(static_cast<size_t>(max_stage_width_) * np);
    std::vector<double> nxt(cur.size());
    for (int c = 0; c < input_dim_; ++c)
      for (int p = 0; p < np; ++p)
        cur[static_cast<size_t>(c) * np + p] = X(c, p);

    for (size_t l = 0; l < hidden_.size(); ++l) {
      forward(plan_[l], cur.data(), np, nxt.data());
      const auto& v = hidden_[l].v;
      for (int r = 0; r < v.size(); ++r) {
        double* row = nxt.data() + static_cast<size_t>(r) * np;
        const double shift = v[r];
        for (int p = 0; p < np; ++p) row[p] = std::max(0.0, row[p] - shift);
      }
      cur.swap(nxt);
    }
    forward(plan_.back(), cur.data(), np, nxt.data());
    for (int r = 0; r < out.rows(); ++r)
      for (int p = 0; p < np; ++p)
        out(r, p) = nxt[static_cast<size_t>(r) * np + p];
    return out;
  }

 private:
  struct SparseRows {
    int rows = 0;
    int cols = 0;
    std::vector<long> ptr;   // size rows + 1
    std::vector<int> col;    // ascending within each row
    std::vector<double> val;
  };

  static SparseRows compress(const Eigen::MatrixXd& W) {
    SparseRows s;
    s.rows = static_cast<int>(W.rows());
    s.cols = static_cast<int>(W.cols());
    s.ptr.assign(static_cast<size_t>(s.rows) + 1, 0);
    for (int r = 0; r < s.rows; ++r) {
      for (int c = 0; c < s.cols; ++c) {
        if (W(r, c) != 0.0) {
          s.col.push_back(c);
          s.val.push_back(W(r, c));
        }
      }
      s.ptr[static_cast<size_t>(r) + 1] = static_cast<long>(s.col.size());
    }
    return s;
  }

  // dst[r] = sum over stored (c, w) of w * src[c], accumulated in stored
  // order for every point, independent of the batch size.
  static void forward(const SparseRows& s, const double* src, int np, double* dst) {
    for (int r = 0; r < s.rows; ++r) {
      double* row = dst + static_cast<size_t>(r) * np;
      std::fill(row, row + np, 0.0);
      for (long e = s.ptr[r]; e < s.ptr[r + 1]; ++e) {
        const double w = s.val[static_cast<size_t>(e)];
        const double* from = src + static_cast<size_t>(s.col[static_cast<size_t>(e)]) * np;
        for (int p = 0; p < np; ++p) row[p] += w * from[p];
      }
    }
  }

  void build_plan() {
    plan_.clear();
    max_stage_width_ = input_dim_;
    for (const auto& lay : hidden_) {
      plan_.push_back(compress(lay.W));
      max_stage_width_ = std::max(max_stage_width_, static_cast<int>(lay.W.rows()));
    }
    plan_.push_back(compress(W_out_));
    max_stage_width_ = std::max(max_stage_width_, static_cast<int>(W_out_.rows()));
  }

  int input_dim_;
  std::vector<Layer> hidden_;
  Eigen::MatrixXd W_out_;
  std::vector<SparseRows> plan_;
  int max_stage_width_ = 0;
};

}  // namespace reluspline
