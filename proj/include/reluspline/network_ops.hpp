#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <string>
#include <vector>

#include "reluspline/relu_network.hpp"

namespace reluspline {

// Depth-0 network computing x -> W x.
inline ReluNetwork affine_network(const Eigen::MatrixXd& W) {
  return ReluNetwork(static_cast<int>(W.cols()), {}, W);
}

// outer(inner(x)).  The inner output layer (linear, bias-free) is fused into
// the first outer layer, so depths add exactly.
inline ReluNetwork compose(const ReluNetwork& outer, const ReluNetwork& inner) {
  if (outer.input_dim() != inner.output_dim())
    throw std::invalid_argument(
        "compose: outer expects " + std::to_string(outer.input_dim()) +
        " inputs, inner provides " + std::to_string(inner.output_dim()));
  std::vector<Layer> hidden = inner.hidden();
  Eigen::MatrixXd W_out;
  if (outer.depth() == 0) {
    W_out = outer.output_weights() * inner.output_weights();
  } else {
    Layer first;
    first.W = outer.hidden()[0].W * inner.output_weights();
    first.v = outer.hidden()[0].v;
    hidden.push_back(std::move(first));
    for (size_t l = 1; l < outer.hidden().size(); ++l)
      hidden.push_back(outer.hidden()[l]);
    W_out = outer.output_weights();
  }
  return ReluNetwork(inner.input_dim(), std::move(hidden), std::move(W_out));
}

// Side-by-side combination.  With shared_input the nets read the same input
// vector (first layers stacked); otherwise inputs are concatenated and every
// layer is block-diagonal.  Outputs are always concatenated.  All nets must
// have equal depth; pad_depth() exists to arrange that.
inline ReluNetwork parallel(const std::vector<ReluNetwork>& nets,
                            bool shared_input) {
  if (nets.empty()) throw std::invalid_argument("parallel: no networks");
  const int L = nets[0].depth();
  for (const auto& n : nets)
    if (n.depth() != L)
      throw std::invalid_argument(
          "parallel: depths differ (" + std::to_string(L) + " vs " +
          std::to_string(n.depth()) + "); equalize with pad_depth first");
  int in_dim = 0;
  if (shared_input) {
    in_dim = nets[0].input_dim();
    for (const auto& n : nets)
      if (n.input_dim() != in_dim)
        throw std::invalid_argument("parallel: shared input dims differ");
  } else {
    for (const auto& n : nets) in_dim += n.input_dim();
  }

  std::vector<Layer> hidden;
  for (int l = 0; l < L; ++l) {
    int rows = 0, cols = 0;
    for (const auto& n : nets) {
      rows += static_cast<int>(n.hidden()[l].W.rows());
      cols += static_cast<int>(n.hidden()[l].W.cols());
    }
    const bool stack_first = (l == 0 && shared_input);
    Layer lay;
    lay.W = Eigen::MatrixXd::Zero(rows, stack_first ? in_dim : cols);
    lay.v = Eigen::VectorXd(rows);
    int r0 = 0, c0 = 0;
    for (const auto& n : nets) {
      const auto& src = n.hidden()[l];
      lay.W.block(r0, stack_first ? 0 : c0, src.W.rows(), src.W.cols()) = src.W;
      lay.v.segment(r0, src.v.size()) = src.v;
      r0 += static_cast<int>(src.W.rows());
      c0 += static_cast<int>(src.W.cols());
    }
    hidden.push_back(std::move(lay));
  }

  int out_rows = 0, out_cols = 0;
  for (const auto& n : nets) {
    out_rows += n.output_dim();
    out_cols += static_cast<int>(n.output_weights().cols());
  }
  const bool stack_out = (L == 0 && shared_input);
  Eigen::MatrixXd W_out =
      Eigen::MatrixXd::Zero(out_rows, stack_out ? in_dim : out_cols);
  int r0 = 0, c0 = 0;
  for (const auto& n : nets) {
    W_out.block(r0, stack_out ? 0 : c0, n.output_weights().rows(),
                n.output_weights().cols()) = n.output_weights();
    r0 += n.output_dim();
    c0 += static_cast<int>(n.output_weights().cols());
  }
  return ReluNetwork(in_dim, std::move(hidden), std::move(W_out));
}

// Append identity hidden layers until the depth reaches target.  For L >= 1
// the padding carries post-ReLU values, which are nonnegative, so it is
// always exact.  For a depth-0 net the first padded layer applies ReLU to the
// affine output; the caller must know those values are nonnegative on the
// domain of use.
inline ReluNetwork pad_depth(const ReluNetwork& net, int target_depth) {
  if (target_depth < net.depth())
    throw std::invalid_argument("pad_depth: target " +
                                std::to_string(target_depth) +
                                " below current depth " +
                                std::to_string(net.depth()));
  if (target_depth == net.depth()) return net;
  std::vector<Layer> hidden = net.hidden();
  Eigen::MatrixXd W_out = net.output_weights();
  const int width = net.output_dim();
  if (net.depth() == 0) {
    Layer first;
    first.W = W_out;
    first.v = Eigen::VectorXd::Zero(width);
    hidden.push_back(std::move(first));
    W_out = Eigen::MatrixXd::Identity(width, width);
  }
  while (static_cast<int>(hidden.size()) < target_depth) {
    Layer pad;
    const int w = static_cast<int>(hidden.back().W.rows());
    pad.W = Eigen::MatrixXd::Identity(w, w);
    pad.v = Eigen::VectorXd::Zero(w);
    hidden.push_back(std::move(pad));
  }
  return ReluNetwork(net.input_dim(), std::move(hidden), std::move(W_out));
}

}  // namespace reluspline
