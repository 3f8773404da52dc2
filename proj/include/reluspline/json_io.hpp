#pragma once

#include <Eigen/Core>
#include <json.hpp>
#include <stdexcept>
#include <vector>

#include "reluspline/knot_grid.hpp"
#include "reluspline/relu_network.hpp"

namespace reluspline {

using nlohmann::json;

inline json matrix_to_json(const Eigen::MatrixXd& W) {
  json rows = json::array();
  for (int r = 0; r < W.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < W.cols(); ++c) row.push_back(W(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Eigen::MatrixXd matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty())
    throw std::invalid_argument("matrix_from_json: expected nonempty array of rows");
  const size_t rows = j.size();
  const size_t cols = j.at(0).size();
  Eigen::MatrixXd W(rows, cols);
  for (size_t r = 0; r < rows; ++r) {
    if (j.at(r).size() != cols)
      throw std::invalid_argument("matrix_from_json: ragged rows");
    for (size_t c = 0; c < cols; ++c)
      W(static_cast<int>(r), static_cast<int>(c)) = j.at(r).at(c).get<double>();
  }
  return W;
}

inline json vector_to_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (int i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

inline Eigen::VectorXd vector_from_json(const json& j) {
  Eigen::VectorXd v(j.size());
  for (size_t i = 0; i < j.size(); ++i)
    v[static_cast<int>(i)] = j.at(i).get<double>();
  return v;
}

inline json to_json(const KnotGrid& g) {
  return json{{"M", g.M}, {"k", g.k}, {"knots", g.knots}};
}

inline KnotGrid knot_grid_from_json(const json& j) {
  KnotGrid g = make_cardinal_grid(j.at("M").get<int>(), j.at("k").get<int>());
  if (j.contains("knots")) {
    const auto stored = j.at("knots").get<std::vector<double>>();
    if (stored.size() != g.knots.size())
      throw std::invalid_argument("knot_grid_from_json: knot count mismatch");
    g.knots = stored;
  }
  return g;
}

inline json to_json(const ReluNetwork& net) {
  json layers = json::array();
  for (const auto& lay : net.hidden())
    layers.push_back(json{{"W", matrix_to_json(lay.W)}, {"v", vector_to_json(lay.v)}});
  return json{{"input_dim", net.input_dim()},
              {"layers", std::move(layers)},
              {"W_out", matrix_to_json(net.output_weights())}};
}

inline ReluNetwork network_from_json(const json& j) {
  std::vector<Layer> hidden;
  for (const auto& lj : j.at("layers"))
    hidden.push_back(Layer{matrix_from_json(lj.at("W")), vector_from_json(lj.at("v"))});
  return ReluNetwork(j.at("input_dim").get<int>(), std::move(hidden),
                     matrix_from_json(j.at("W_out")));
}

}  // namespace reluspline
