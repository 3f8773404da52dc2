#pragma once

#include <cmath>
#include <limits>

#include <json.hpp>

#include "reluspline/additive_fit.hpp"
#include "reluspline/json_io.hpp"
#include "reluspline/pilot_fit.hpp"

namespace reluspline {

// JSON numbers cannot carry NaN; a missing variance estimate round-trips
// through null.
inline json tau2_to_json(double tau2) {
  if (std::isnan(tau2)) return nullptr;
  return tau2;
}

inline double tau2_from_json(const json& j) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  return j.get<double>();
}

inline json to_json(const PilotFit& fit) {
  return json{{"model", "pilot"},
              {"grid", to_json(fit.grid)},
              {"d", fit.d},
              {"n", fit.n},
              {"coeffs", vector_to_json(fit.coeffs)},
              {"gram", matrix_to_json(fit.gram)},
              {"tau2", tau2_to_json(fit.tau2)},
              {"status", fit.status}};
}

inline PilotFit pilot_fit_from_json(const json& j) {
  PilotFit fit;
  fit.grid = knot_grid_from_json(j.at("grid"));
  fit.d = j.at("d").get<int>();
  fit.n = j.at("n").get<int>();
  fit.coeffs = vector_from_json(j.at("coeffs"));
  fit.gram = matrix_from_json(j.at("gram"));
  fit.tau2 = tau2_from_json(j.at("tau2"));
  fit.status = j.at("status").get<std::string>();
  return fit;
}

inline json to_json(const AdditiveFit& fit) {
  json grids = json::array();
  for (const auto& g : fit.grids) grids.push_back(to_json(g));
  json betas = json::array();
  for (const auto& b : fit.betas) betas.push_back(vector_to_json(b));
  return json{{"model", "additive"},
              {"grids", std::move(grids)},
              {"d", fit.d},
              {"n", fit.n},
              {"alpha", fit.alpha},
              {"betas", std::move(betas)},
              {"centers", fit.centers},
              {"gram", matrix_to_json(fit.gram)},
              {"tau2", tau2_to_json(fit.tau2)},
              {"status", fit.status}};
}

inline AdditiveFit additive_fit_from_json(const json& j) {
  AdditiveFit fit;
  for (const auto& g : j.at("grids")) fit.grids.push_back(knot_grid_from_json(g));
  fit.d = j.at("d").get<int>();
  fit.n = j.at("n").get<int>();
  fit.alpha = j.at("alpha").get<double>();
  for (const auto& b : j.at("betas")) fit.betas.push_back(vector_from_json(b));
  fit.centers = j.at("centers").get<std::vector<double>>();
  fit.gram = matrix_from_json(j.at("gram"));
  fit.tau2 = tau2_from_json(j.at("tau2"));
  fit.status = j.at("status").get<std::string>();
  return fit;
}

}  // namespace reluspline
