#include <catch2/catch.hpp>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <vector>

#include "reluspline/bspline_basis.hpp"
#include "reluspline/knot_grid.hpp"
#include "reluspline/truncated_power.hpp"

using namespace reluspline;

namespace {

// Independent reference: Cox-de Boor from order-1 indicators with half-open
// cells.  Shares no code with the production recursion (which starts from
// hats and uses clipped ramps), so agreement is a real cross-check.
double cdb_oracle(const KnotGrid& g, int i, int s, double x) {
  if (s == 1) {
    return (x >= g.knot(i) && x < g.knot(i + 1)) ? 1.0 : 0.0;
  }
  const double d1 = g.knot(i + s - 1) - g.knot(i);
  const double d2 = g.knot(i + s) - g.knot(i + 1);
  double acc = 0.0;
  if (d1 > 0.0) acc += (x - g.knot(i)) / d1 * cdb_oracle(g, i, s - 1, x);
  if (d2 > 0.0) acc += (g.knot(i + s) - x) / d2 * cdb_oracle(g, i + 1, s - 1, x);
  return acc;
}

std::vector<double> scan_points(const KnotGrid& g, int n_uniform) {
  std::vector<double> xs;
  for (int j = 0; j <= n_uniform; ++j)
    xs.push_back(static_cast<double>(j) / n_uniform);
  for (int i = 0; i <= g.M; ++i) {
    xs.push_back(g.knot(i));
    if (i < g.M) xs.push_back((g.knot(i) + g.knot(i + 1)) / 2.0);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return xs;
}

}  // namespace

TEST_CASE("cardinal grid layout") {
  const auto g = make_cardinal_grid(4, 3);
  CHECK(g.num_knots() == 4 + 2 * 3 - 1);
  CHECK(g.basis_size() == 4 + 3 - 1);
  CHECK(g.knot(0) == 0.0);
  CHECK(g.knot(4) == 1.0);
  CHECK(g.knot(-2) == Approx(-0.5));
  CHECK(g.knot(6) == Approx(1.5));
  CHECK(g.spacing() == Approx(0.25));

  // The defining count for (M=2, k=3): M + 2k - 1 = 7 knots, 4 basis splines.
  const auto g23 = make_cardinal_grid(2, 3);
  CHECK(g23.num_knots() == 7);
  CHECK(g23.basis_size() == 4);

  CHECK_THROWS_AS(make_cardinal_grid(1, 3), std::invalid_argument);
  CHECK_THROWS_AS(make_cardinal_grid(4, 1), std::invalid_argument);
  CHECK_THROWS_AS(g.knot(7), std::out_of_range);
  CHECK_THROWS_AS(g.knot(-3), std::out_of_range);
}

TEST_CASE("hat spline values") {
  const auto g = make_cardinal_grid(4, 2);
  CHECK(eval_bspline(g, 1, 2, 0.5) == 1.0);  // peak at t_2
  CHECK(eval_bspline(g, 1, 2, 0.25) == 0.0);
  CHECK(eval_bspline(g, 1, 2, 0.375) == Approx(0.5));
  CHECK(eval_bspline(g, 1, 2, 0.625) == Approx(0.5));
  CHECK(eval_bspline(g, -1, 2, 0.0) == Approx(1.0));  // boundary hat peaks at 0
  CHECK(eval_bspline(g, 3, 2, 1.0) == Approx(1.0));
}

TEST_CASE("frozen interior values at higher orders") {
  // Classic cardinal B-spline knot values: quadratic 1/2 at its first interior
  // knot and 3/4 at the support midpoint; cubic 2/3 at the central knot.
  const auto g3 = make_cardinal_grid(4, 3);
  CHECK(eval_bspline(g3, 0, 3, g3.knot(1)) == Approx(0.5).margin(1e-12));
  CHECK(eval_bspline(g3, 0, 3, 0.375) == Approx(0.75).margin(1e-12));
  const auto g4 = make_cardinal_grid(4, 4);
  CHECK(eval_bspline(g4, 0, 4, g4.knot(2)) == Approx(2.0 / 3.0).margin(1e-12));
  CHECK(eval_bspline(g4, 0, 4, g4.knot(1)) == Approx(1.0 / 6.0).margin(1e-12));
  CHECK(eval_bspline(g4, 0, 4, g4.knot(3)) == Approx(1.0 / 6.0).margin(1e-12));
}

TEST_CASE("argument validation") {
  const auto g = make_cardinal_grid(4, 3);
  CHECK_THROWS_AS(eval_bspline(g, 0, 3, -0.1), std::domain_error);
  CHECK_THROWS_AS(eval_bspline(g, 0, 3, 1.1), std::domain_error);
  CHECK_THROWS_AS(eval_bspline(g, 0, 3, std::nan("")), std::domain_error);
  CHECK_THROWS_AS(eval_bspline(g, 0, 5, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(eval_bspline(g, 0, 1, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(eval_bspline(g, -3, 3, 0.5), std::out_of_range);
  CHECK_THROWS_AS(eval_bspline(g, 4, 3, 0.5), std::out_of_range);  // max i is M+k-s-1 = 3
  CHECK_NOTHROW(eval_bspline(g, 3, 3, 0.5));
}

TEST_CASE("recursion matches the indicator-based oracle") {
  for (int k : {3, 4}) {
    for (int M : {2, 4, 8}) {
      const auto g = make_cardinal_grid(M, k);
      const auto xs = scan_points(g, 2000);
      for (int s = 2; s <= k; ++s) {
        for (int i = g.first_index(); i <= M + k - s - 1; ++i) {
          for (double x : xs) {
            const double mine = eval_bspline(g, i, s, x);
            const double ref = cdb_oracle(g, i, s, x);
            REQUIRE(mine == Approx(ref).margin(1e-12));
          }
        }
      }
    }
  }
}

TEST_CASE("partition of unity and range") {
  for (int k : {2, 3, 4}) {
    for (int M : {2, 4, 8, 16}) {
      const auto g = make_cardinal_grid(M, k);
      for (int j = 0; j <= 10000; ++j) {
        const double x = static_cast<double>(j) / 10000;
        const auto v = eval_basis_vector(g, x);
        REQUIRE(std::abs(v.sum() - 1.0) <= 1e-10);
        REQUIRE(v.minCoeff() >= 0.0);
        REQUIRE(v.maxCoeff() <= 1.0 + 1e-12);
        REQUIRE((v.array() != 0.0).count() <= k);
      }
    }
  }
}

TEST_CASE("basis vector agrees with per-spline evaluation") {
  const auto g = make_cardinal_grid(8, 3);
  for (double x : scan_points(g, 997)) {
    const auto v = eval_basis_vector(g, x);
    for (int i = g.first_index(); i <= g.M - 1; ++i)
      REQUIRE(v[i + g.k - 1] == Approx(eval_bspline(g, i, g.k, x)).margin(1e-14));
  }
}

TEST_CASE("tensor vector factorizes") {
  const auto g = make_cardinal_grid(2, 2);
  CHECK(tensor_size(g, 2) == 9);

  for (int d : {2, 3}) {
    const auto gg = make_cardinal_grid(4, 3);
    const long q = tensor_size(gg, d);
    Eigen::VectorXd x(d);
    for (int trial = 0; trial < 50; ++trial) {
      for (int c = 0; c < d; ++c)
        x[c] = std::fmod(0.137 + 0.61803398875 * (trial * d + c + 1), 1.0);
      const auto t = eval_tensor_vector(gg, x);
      REQUIRE(t.size() == q);
      REQUIRE(std::abs(t.sum() - 1.0) <= 1e-10);
      std::vector<Eigen::VectorXd> ax;
      for (int c = 0; c < d; ++c) ax.push_back(eval_basis_vector(gg, x[c]));
      for (long flat = 0; flat < q; flat += 7) {
        const auto multi = tensor_multi_index(gg, d, flat);
        REQUIRE(tensor_flat_index(gg, multi) == flat);
        double p = 1.0;
        for (int c = 0; c < d; ++c) p *= ax[c][multi[c] + gg.k - 1];
        REQUIRE(t[flat] == Approx(p).margin(1e-12));
      }
    }
  }
}

TEST_CASE("tensor ordering puts the first coordinate slowest") {
  const auto g = make_cardinal_grid(2, 2);  // basis_size = 3
  // flat = j1 * 3 + j2 with j_c = i_c + 1
  CHECK(tensor_flat_index(g, {-1, -1}) == 0);
  CHECK(tensor_flat_index(g, {-1, 0}) == 1);
  CHECK(tensor_flat_index(g, {0, -1}) == 3);
  CHECK(tensor_flat_index(g, {1, 1}) == 8);
  const auto m = tensor_multi_index(g, 2, 5);
  CHECK(m[0] == 0);
  CHECK(m[1] == 1);
}

TEST_CASE("truncated powers span the same space") {
  // Fit every B-spline on [1, truncated-power block] and every block member on
  // the B-splines: residuals vanish iff the spans coincide.
  for (int k : {2, 3, 4}) {
    const int M = 4;
    const auto g = make_cardinal_grid(M, k);
    const int n = 501;
    const int R = g.basis_size();
    const int P = truncpower_block_size(g) + 1;
    REQUIRE(P == R);
    Eigen::MatrixXd B(n, R), T(n, P);
    for (int r = 0; r < n; ++r) {
      const double x = static_cast<double>(r) / (n - 1);
      B.row(r) = eval_basis_vector(g, x).transpose();
      T(r, 0) = 1.0;
      T.row(r).segment(1, P - 1) = eval_truncpower_block(g, x).transpose();
    }
    Eigen::MatrixXd cB = T.colPivHouseholderQr().solve(B);
    REQUIRE((T * cB - B).cwiseAbs().maxCoeff() <= 1e-8);
    Eigen::MatrixXd cT = B.colPivHouseholderQr().solve(T);
    REQUIRE((B * cT - T).cwiseAbs().maxCoeff() <= 1e-8);
  }
}

TEST_CASE("truncated power integrals are exact") {
  const auto g = make_cardinal_grid(4, 3);
  const auto ints = truncpower_block_integrals(g);
  // Simpson on a fine grid as an independent check.
  const int n = 2000;
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(truncpower_block_size(g));
  for (int r = 0; r <= n; ++r) {
    const double x = static_cast<double>(r) / n;
    const double w = (r == 0 || r == n) ? 1.0 : (r % 2 == 1 ? 4.0 : 2.0);
    acc += w * eval_truncpower_block(g, x);
  }
  acc /= 3.0 * n;
  for (int c = 0; c < ints.size(); ++c)
    CHECK(acc[c] == Approx(ints[c]).margin(1e-9));
}
