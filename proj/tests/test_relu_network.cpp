#include <catch2/catch.hpp>

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <sstream>

#include "reluspline/json_io.hpp"
#include "reluspline/network_ops.hpp"
#include "reluspline/relu_network.hpp"

using namespace reluspline;

namespace {

// Deterministic messy test network with mixed sparsity.
ReluNetwork messy_net(unsigned seed, int in_dim, int out_dim, int depth, int width) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::bernoulli_distribution keep(0.6);
  std::vector<Layer> hidden;
  int prev = in_dim;
  for (int l = 0; l < depth; ++l) {
    Layer lay;
    lay.W = Eigen::MatrixXd::Zero(width, prev);
    lay.v = Eigen::VectorXd(width);
    for (int r = 0; r < width; ++r) {
      for (int c = 0; c < prev; ++c)
        if (keep(rng)) lay.W(r, c) = U(rng);
      lay.v[r] = 0.3 * U(rng);
    }
    hidden.push_back(std::move(lay));
    prev = width;
  }
  Eigen::MatrixXd W_out(out_dim, prev);
  for (int r = 0; r < out_dim; ++r)
    for (int c = 0; c < prev; ++c) W_out(r, c) = keep(rng) ? U(rng) : 0.0;
  return ReluNetwork(in_dim, std::move(hidden), std::move(W_out));
}

Eigen::MatrixXd halton_points(int dim, int n) {
  // Deterministic scattered points in [-1, 1]^dim.
  Eigen::MatrixXd X(dim, n);
  const int primes[] = {2, 3, 5, 7, 11};
  for (int p = 0; p < n; ++p)
    for (int c = 0; c < dim; ++c) {
      double f = 1.0, r = 0.0;
      int i = p + 1;
      while (i > 0) {
        f /= primes[c % 5];
        r += f * (i % primes[c % 5]);
        i /= primes[c % 5];
      }
      X(c, p) = 2.0 * r - 1.0;
    }
  return X;
}

}  // namespace

TEST_CASE("construction validates shapes and finiteness") {
  Eigen::MatrixXd W1 = Eigen::MatrixXd::Ones(3, 2);
  Eigen::VectorXd v1 = Eigen::VectorXd::Zero(3);
  Eigen::MatrixXd Wo = Eigen::MatrixXd::Ones(1, 3);

  CHECK_NOTHROW(ReluNetwork(2, {Layer{W1, v1}}, Wo));
  CHECK_THROWS_AS(ReluNetwork(3, {Layer{W1, v1}}, Wo), std::invalid_argument);
  CHECK_THROWS_AS(ReluNetwork(2, {Layer{W1, Eigen::VectorXd::Zero(2)}}, Wo),
                  std::invalid_argument);
  CHECK_THROWS_AS(ReluNetwork(2, {Layer{W1, v1}}, Eigen::MatrixXd::Ones(1, 2)),
                  std::invalid_argument);

  Eigen::MatrixXd bad = W1;
  bad(1, 1) = std::nan("");
  CHECK_THROWS_AS(ReluNetwork(2, {Layer{bad, v1}}, Wo), std::invalid_argument);
  bad(1, 1) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(ReluNetwork(2, {Layer{bad, v1}}, Wo), std::invalid_argument);
}

TEST_CASE("shift sign convention and constant nodes") {
  // Node with zero weights and shift -c emits the constant c.
  Eigen::MatrixXd W1 = Eigen::MatrixXd::Zero(1, 1);
  Eigen::VectorXd v1(1);
  v1[0] = -0.75;
  Eigen::MatrixXd Wo(1, 1);
  Wo(0, 0) = 2.0;
  ReluNetwork net(1, {Layer{W1, v1}}, Wo);
  Eigen::VectorXd x(1);
  x[0] = 123.0;
  CHECK(net.evaluate(x)[0] == 1.5);

  // Positive shift subtracts before the ReLU.
  Eigen::MatrixXd W2 = Eigen::MatrixXd::Ones(1, 1);
  Eigen::VectorXd v2(1);
  v2[0] = 0.5;
  ReluNetwork ramp(1, {Layer{W2, v2}}, Eigen::MatrixXd::Ones(1, 1));
  x[0] = 0.8;
  CHECK(ramp.evaluate(x)[0] == Approx(0.3));
  x[0] = 0.2;
  CHECK(ramp.evaluate(x)[0] == 0.0);
}

TEST_CASE("pure affine networks") {
  Eigen::MatrixXd W(2, 3);
  W << 1, 2, 3, 4, 5, 6;
  const auto net = affine_network(W);
  CHECK(net.depth() == 0);
  CHECK(net.architecture().max_width == 0);
  Eigen::VectorXd x(3);
  x << -1, 0.5, 2;
  CHECK((net.evaluate(x) - W * x).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("batched evaluation is bitwise identical to single points") {
  const auto net = messy_net(7, 3, 2, 5, 17);
  const auto X = halton_points(3, 257);
  const auto Y = net.evaluate_batch(X);
  for (int p = 0; p < X.cols(); p += 13) {
    const auto y = net.evaluate(X.col(p));
    for (int r = 0; r < 2; ++r) REQUIRE(y[r] == Y(r, p));
  }
  // Different batch partitions agree bitwise too.
  const auto Yfront = net.evaluate_batch(X.leftCols(100));
  REQUIRE((Yfront - Y.leftCols(100)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("compose fuses affine boundaries and adds depths") {
  const auto inner = messy_net(11, 2, 3, 2, 9);
  const auto outer = messy_net(13, 3, 1, 3, 7);
  const auto both = compose(outer, inner);
  CHECK(both.depth() == 5);
  CHECK(both.input_dim() == 2);
  CHECK(both.output_dim() == 1);
  const auto X = halton_points(2, 101);
  const auto direct = outer.evaluate_batch(inner.evaluate_batch(X));
  const auto fused = both.evaluate_batch(X);
  CHECK((direct - fused).cwiseAbs().maxCoeff() <= 1e-12);

  // Affine outer keeps depth.
  Eigen::MatrixXd A(1, 3);
  A << 1, -2, 0.5;
  const auto scaled = compose(affine_network(A), inner);
  CHECK(scaled.depth() == 2);
  const Eigen::MatrixXd want = A * inner.evaluate_batch(X);
  CHECK((scaled.evaluate_batch(X) - want).cwiseAbs().maxCoeff() <= 1e-12);

  CHECK_THROWS_AS(compose(inner, outer), std::invalid_argument);  // 1 output vs 2 inputs
}

TEST_CASE("parallel with independent and shared inputs") {
  const auto a = messy_net(3, 2, 2, 3, 6);
  const auto b = messy_net(5, 1, 1, 3, 4);
  const auto side = parallel({a, b}, false);
  CHECK(side.input_dim() == 3);
  CHECK(side.output_dim() == 3);
  CHECK(side.depth() == 3);
  CHECK(side.architecture().max_width == 10);
  const auto X = halton_points(3, 63);
  const auto Ya = a.evaluate_batch(X.topRows(2));
  const auto Yb = b.evaluate_batch(X.bottomRows(1));
  const auto Y = side.evaluate_batch(X);
  CHECK((Y.topRows(2) - Ya).cwiseAbs().maxCoeff() == 0.0);
  CHECK((Y.bottomRows(1) - Yb).cwiseAbs().maxCoeff() == 0.0);

  const auto c = messy_net(17, 2, 1, 3, 5);
  const auto shared = parallel({a, c}, true);
  CHECK(shared.input_dim() == 2);
  const auto X2 = halton_points(2, 63);
  const auto Ys = shared.evaluate_batch(X2);
  CHECK((Ys.topRows(2) - a.evaluate_batch(X2)).cwiseAbs().maxCoeff() == 0.0);
  CHECK((Ys.bottomRows(1) - c.evaluate_batch(X2)).cwiseAbs().maxCoeff() == 0.0);

  const auto deeper = messy_net(19, 1, 1, 4, 4);
  CHECK_THROWS_WITH(parallel({a, deeper}, false),
                    Catch::Contains("pad_depth"));
}

TEST_CASE("pad_depth preserves values on nonnegative carriers") {
  const auto net = messy_net(23, 2, 2, 2, 5);
  const auto padded = pad_depth(net, 6);
  CHECK(padded.depth() == 6);
  const auto X = halton_points(2, 77);
  CHECK((padded.evaluate_batch(X) - net.evaluate_batch(X)).cwiseAbs().maxCoeff() == 0.0);

  // Depth-0 net carrying nonnegative values pads exactly on that domain.
  Eigen::MatrixXd W = Eigen::MatrixXd::Identity(2, 2);
  const auto idpad = pad_depth(affine_network(W), 3);
  CHECK(idpad.depth() == 3);
  Eigen::MatrixXd P = (halton_points(2, 31).array() + 1.0) / 2.0;  // in [0,1]
  CHECK((idpad.evaluate_batch(P) - P).cwiseAbs().maxCoeff() == 0.0);

  CHECK_THROWS_AS(pad_depth(net, 1), std::invalid_argument);
}

TEST_CASE("json round trip is bitwise") {
  const auto net = messy_net(29, 2, 3, 4, 11);
  const json j = to_json(net);
  const auto back = network_from_json(j);
  CHECK(back.depth() == net.depth());
  const auto X = halton_points(2, 129);
  const auto Y1 = net.evaluate_batch(X);
  const auto Y2 = back.evaluate_batch(X);
  REQUIRE((Y1 - Y2).cwiseAbs().maxCoeff() == 0.0);
  // Serialized form is stable under a second round trip.
  CHECK(to_json(back) == j);

  // Schema spot checks.
  CHECK(j.at("input_dim") == 2);
  CHECK(j.at("layers").size() == 4);
  CHECK(j.at("layers").at(0).at("W").size() == 11);
  CHECK(j.at("W_out").size() == 3);
}

TEST_CASE("knot grid json round trip") {
  const auto g = make_cardinal_grid(8, 3);
  const json j = to_json(g);
  CHECK(j.at("M") == 8);
  CHECK(j.at("k") == 3);
  CHECK(j.at("knots").size() == static_cast<size_t>(g.num_knots()));
  const auto back = knot_grid_from_json(j);
  CHECK(back.knots == g.knots);
}
