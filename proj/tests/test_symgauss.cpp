#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "kacrice/symgauss.hpp"
#include "kacrice/torus.hpp"

using namespace kacrice;

TEST_CASE("symmetric coordinate ordering") {
  auto idx = sym_coord_pairs(3);
  REQUIRE(idx.size() == 6);
  CHECK(idx[0] == std::make_pair(0, 0));
  CHECK(idx[1] == std::make_pair(1, 1));
  CHECK(idx[2] == std::make_pair(2, 2));
  CHECK(idx[3] == std::make_pair(0, 1));
  CHECK(idx[4] == std::make_pair(0, 2));
  CHECK(idx[5] == std::make_pair(1, 2));
}

TEST_CASE("invariant metric derived quantities") {
  InvariantMetric m(2, 1.3, 0.7);
  CHECK(m.D() == 3);
  CHECK(m.R2() == Catch::Approx(8.0 / M_PI));  // 4 Gamma(3) / pi
  CHECK(m.alpha() == Catch::Approx(1.0 / (0.49 * 8.0 / M_PI)));
  // alpha + N beta collapses to 1/(N a^2).
  CHECK(m.alpha() + 2.0 * m.beta() ==
        Catch::Approx(1.0 / (2.0 * 1.3 * 1.3)).epsilon(1e-12));
  CHECK(m.positive_definite());
  CHECK_THROWS_AS(InvariantMetric(0, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(InvariantMetric(2, -1.0, 1.0), std::invalid_argument);
}

TEST_CASE("normalization constants") {
  CHECK(z_const(1) == Catch::Approx(2.0 / std::sqrt(M_PI)));
  CHECK(z_weyl(1) == Catch::Approx(1.0));
  // The two products coincide exactly at N = 2 ...
  CHECK(z_const(2) == Catch::Approx(z_weyl(2)).epsilon(1e-14));
  // ... and differ for N >= 3.
  CHECK(z_weyl(3) / z_const(3) == Catch::Approx(gamma_fn(2.5) / gamma_fn(1.0)));
}

TEST_CASE("z_weyl matches the Selberg Monte Carlo") {
  for (int N : {2, 3}) {
    const int D = N * (N + 1) / 2;
    McEstimate e = eigen_reduced_integral(N, 1.0, 0.0, false, 400000, 5);
    CHECK(e.mean == Catch::Approx(z_weyl(N) * std::pow(2.0 * M_PI, 0.5 * D))
                        .margin(4.0 * e.std_error));
  }
}

TEST_CASE("eigenvalue integral: closed form at N=1 and divergence guard") {
  const double alpha = 1.0, beta = 0.4;
  McEstimate e = eigen_reduced_integral(1, alpha, beta, true, 200000, 3);
  CHECK(e.mean ==
        Catch::Approx(2.0 / (1.0 + beta / alpha)).margin(4.0 * e.std_error));
  CHECK_THROWS_AS(eigen_reduced_integral(2, -1.0, 0.0, true, 10, 0),
                  std::invalid_argument);
  CHECK_THROWS_AS(eigen_reduced_integral(2, 1.0, -0.6, true, 10, 0),
                  std::invalid_argument);
}

TEST_CASE("iab quadrature agrees with the 3-D Monte Carlo") {
  const double abs_[3][2] = {{9.0 / 5.0, 1.0}, {2.0, 0.0}, {3.0, 1.0}};
  for (const auto& ab : abs_) {
    const double q = iab(ab[0], ab[1]);
    McEstimate mc = iab_mc(ab[0], ab[1], 200000, 17);
    CHECK(q == Catch::Approx(mc.mean).margin(4.0 * mc.std_error));
  }
  CHECK_THROWS_AS(iab(1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(iab_mc(1.0, 2.0, 10, 0), std::invalid_argument);
}

TEST_CASE("determinant expectation matches a 1-D quadrature oracle") {
  // Under G_2(a,b) (+) 1 block covariance, rotating (X11, X22) to
  // u = (X11+X22)/sqrt2, v = (X11-X22)/sqrt2 and integrating the radial
  // variable in closed form gives
  //   E|det X| = (1/2pi) Int_0^{2pi} 2 c_+^{3/2} (c_+ + 2)^{-1/2} dtheta
  //              - b + 1,   c(theta) = b + a cos 2theta,
  // where c_+ is the positive part (the radial formula only contributes on
  // the arcs where c > 0).
  for (const auto& ab : {std::pair{9.0 / 5.0, 1.0}, {2.0, 0.0}, {3.0, 1.0}}) {
    const double a = ab.first, b = ab.second;
    QuadResult q = adaptive_quad(
        [&](double theta) {
          const double c = b + a * std::cos(2.0 * theta);
          if (c <= 0.0) return 0.0;
          return 2.0 * std::pow(c, 1.5) / std::sqrt(c + 2.0);
        },
        0.0, 2.0 * M_PI, 1e-10, 1e-10);
    const double target = q.value / (2.0 * M_PI) - b + 1.0;
    McEstimate e = det_abs_expectation(block_covariance(2, a, b), 200000, 21);
    CHECK(e.mean == Catch::Approx(target).margin(4.0 * e.std_error));
  }
}

TEST_CASE("det_abs_expectation validates the coordinate dimension") {
  Matrix c(4);  // 4 is not L(L+1)/2 for any integer L
  for (int i = 0; i < 4; ++i) c(i, i) = 1.0;
  CHECK_THROWS_AS(det_abs_expectation(c, 100, 0), std::invalid_argument);
}

TEST_CASE("metric Gaussian integral agrees with a direct Sym_2 Monte Carlo") {
  // Direct path in Frobenius coordinates q1 = (x+y)/sqrt2, q2 = (x-y)/sqrt2,
  // q3 = sqrt2 z: the weight e^{-alpha tr A^2 - beta (tr A)^2} factorizes as
  // q1 ~ N(0, 1/(2 alpha + 4 beta)), q2, q3 ~ N(0, 1/(2 alpha)), and
  // det A = (q1^2 - q2^2 - q3^2)/2.
  InvariantMetric m(2, 1.1, 0.8);
  const double alpha = m.alpha(), beta = m.beta();
  const double s1 = 1.0 / std::sqrt(2.0 * alpha + 4.0 * beta);
  const double s23 = 1.0 / std::sqrt(2.0 * alpha);
  const double norm =
      std::pow(2.0 * M_PI, 1.5) * s1 * s23 * s23;  // Gaussian mass
  McEstimate direct = mc_mean(
      [&](std::uint64_t i) {
        RngStream stream(31, i);
        const double q1 = s1 * stream.normal();
        const double q2 = s23 * stream.normal();
        const double q3 = s23 * stream.normal();
        return 0.5 * std::abs(q1 * q1 - q2 * q2 - q3 * q3);
      },
      400000);
  const double lhs = m.c_n() * norm * direct.mean;
  const double lhs_se = m.c_n() * norm * direct.std_error;
  McEstimate reduced = det_abs_gauss_metric(m, 400000, 32);
  CHECK(lhs == Catch::Approx(reduced.mean)
                   .margin(4.0 * std::hypot(lhs_se, reduced.std_error)));
}
