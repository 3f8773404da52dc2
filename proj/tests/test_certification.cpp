#include <catch2/catch.hpp>

#include <cmath>

#include "reluspline/certification.hpp"

using namespace reluspline;

TEST_CASE("axis point composition") {
  const auto g = make_cardinal_grid(4, 3);
  std::string desc;
  const auto ax = scan::axis_points(1, &g, 3, &desc);
  CHECK(desc == "uniform(10001)+knots+midknots+dyadics(m=3)");
  CHECK(ax.front() == 0.0);
  CHECK(ax.back() == 1.0);
  for (size_t j = 1; j < ax.size(); ++j) REQUIRE(ax[j] > ax[j - 1]);
  // Knot midpoints and dyadic midpoints are present.
  CHECK(std::binary_search(ax.begin(), ax.end(), 0.125));
  CHECK(std::binary_search(ax.begin(), ax.end(), 3.0 / 16.0));

  // High-dimension axes drop the dyadic family at large m.
  const auto ax2 = scan::axis_points(2, nullptr, 8, &desc);
  CHECK(desc == "uniform(201)");
  CHECK(ax2.size() == 201);
}

TEST_CASE("squaring certificates across m") {
  for (int m : {1, 4, 9}) {
    const auto c = certify_sq(m);
    CHECK(c.pass);
    CHECK(c.target == "sq");
    CHECK(c.analytic_bound == sq_error_bound(m));
    // The dyadic midpoints are on the grid, so the scan attains the bound.
    CHECK(c.scan_max_error == c.analytic_bound);
    CHECK(c.range_lo >= 0.0);
    CHECK(c.range_hi <= 1.0);
    CHECK(c.depth == 2 * m);
    CHECK(c.max_width == 4);
    CHECK(c.grid_points >= 10001);
  }
}

TEST_CASE("product certificates") {
  const auto c2 = certify_prod2(3);
  CHECK(c2.pass);
  CHECK(c2.analytic_bound == prod2_error_bound(3));
  CHECK(c2.scan_max_error <= c2.analytic_bound);
  CHECK(c2.scan_max_error >= 0.2 * c2.analytic_bound);  // bound is loose by ~2.7x, not vacuous
  CHECK(c2.depth == 8);
  CHECK(c2.max_width == 12);

  const auto c3 = certify_prod_s(2, 3);
  CHECK(c3.pass);
  CHECK(c3.target == "prod3");
  CHECK(c3.analytic_bound == 2 * prod2_error_bound(2));
  CHECK(c3.depth == 2 * (2 * 2 + 3) - 1);
}

TEST_CASE("axis basis certificates") {
  const auto cb2 = certify_tilde_b(make_cardinal_grid(4, 2), 5);
  CHECK(cb2.pass);
  CHECK(cb2.analytic_bound == 1e-12);  // exact construction, fp tolerance
  CHECK(cb2.scan_max_error <= 1e-12);
  CHECK(cb2.meta.count("exact_construction") == 1);

  const auto cb3 = certify_tilde_b(make_cardinal_grid(4, 3), 4);
  CHECK(cb3.pass);
  CHECK(cb3.analytic_bound == Approx(1.0 / 7.0));
  CHECK(cb3.scan_max_error <= cb3.analytic_bound);
  CHECK(cb3.meta.count("size_claim_A") == 1);
  CHECK(cb3.meta.at("size_claim_C").find("depth:") != std::string::npos);
}

TEST_CASE("tensor certificates") {
  const auto cd = certify_tilde_d(make_cardinal_grid(2, 2), 2, 3);
  CHECK(cd.pass);
  CHECK(cd.analytic_bound == (4.0 + 64.0) * std::ldexp(1.0, -6));
  CHECK(cd.range_lo >= -scan::kRangeTol);
  CHECK(cd.range_hi <= 1.0 + scan::kRangeTol);
  CHECK(cd.grid_points > 40000);

  // d = 1 tensor target is the axis net under the coarser tensor bound.
  const auto cd1 = certify_tilde_d(make_cardinal_grid(4, 3), 1, 4);
  CHECK(cd1.pass);
  CHECK(cd1.analytic_bound == 512.0 * std::ldexp(1.0, -8));
  CHECK(cd1.depth == 2 * 4 + 3);
}

TEST_CASE("fitted network certificate") {
  const auto g = make_cardinal_grid(2, 3);
  const auto td = build_tilde_D(g, 2, 4);
  Eigen::VectorXd coeffs(td.net.output_dim());
  for (int i = 0; i < coeffs.size(); ++i) coeffs[i] = std::sin(1.0 + i);
  const auto c = certify_fnet(coeffs, td);
  CHECK(c.pass);
  CHECK(c.target == "fnet");
  CHECK(c.analytic_bound ==
        Approx(coeffs.norm() * std::sqrt(16.0) * td.bound));
  CHECK(c.scan_max_error <= c.analytic_bound);
  CHECK(c.scan_max_error > 0.0);
}

TEST_CASE("family driver") {
  const auto certs = certify_family(3, 2, 2, 2);
  REQUIRE(certs.size() == 5);
  CHECK(certs[0].target == "sq");
  CHECK(certs[1].target == "prod2");
  CHECK(certs[2].target == "prod3");
  CHECK(certs[3].target == "tilde_b");
  CHECK(certs[4].target == "tilde_d");
  for (const auto& c : certs) CHECK(c.pass);

  const auto j = to_json(certs[4]);
  CHECK(j.at("target") == "tilde_d");
  CHECK(j.at("pass") == true);
  CHECK(j.at("analytic_bound").get<double>() == certs[4].analytic_bound);
  CHECK(j.at("meta").count("size_claim_B") == 1);
}
