#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "kacrice/quadrature.hpp"
#include "kacrice/sphere.hpp"

using namespace kacrice;

TEST_CASE("d=3 coefficient sums against hand-expanded formulas") {
  const int nu = 3;
  SphereSums s = sphere_sums(nu, 3);
  CHECK(s.ell == 3);
  // r: (1/pi) sum C_{n,1,3}^2 P'_{n,3}(1)^2.
  double r = 0.0;
  for (int n = 1; n <= nu; ++n) {
    const double t = cnjd(n, 1, 3) * legendre_deriv_at_one(n, 3, 1);
    r += t * t / M_PI;
  }
  CHECK(s.r == Catch::Approx(r).epsilon(1e-12));
  // r0: sum (2n+1) n^2 (n+1)^2 / (16 pi).
  double r0 = 0.0;
  for (int n = 0; n <= nu; ++n)
    r0 += (2.0 * n + 1.0) * n * n * (n + 1.0) * (n + 1.0) / (16.0 * M_PI);
  CHECK(s.r0 == Catch::Approx(r0).epsilon(1e-12));
  CHECK_THROWS_AS(sphere_sums(1, 3), std::invalid_argument);
  CHECK_THROWS_AS(sphere_sums(5, 2), std::invalid_argument);
}

TEST_CASE("sums approach their scaling limits at the 1/nu rate") {
  for (int d : {3, 4}) {
    auto rel_err = [&](int nu) {
      SphereSums s = sphere_sums(nu, d);
      const double e1 =
          std::abs(s.r / std::pow(nu, d + 1.0) / asy_r_constant(d) - 1.0);
      const double e2 =
          std::abs(s.r0 / std::pow(nu, d + 3.0) / asy_r0_constant(d) - 1.0);
      const double e3 =
          std::abs(s.r_beta / std::pow(nu, d + 3.0) / asy_rbeta_constant(d) -
                   1.0);
      return std::max({e1, e2, e3});
    };
    const double e100 = rel_err(100), e200 = rel_err(200);
    CHECK(e200 < 0.05);
    // Euler-Maclaurin rate: doubling nu roughly halves the error.
    CHECK(e200 == Catch::Approx(0.5 * e100).epsilon(0.25));
  }
}

TEST_CASE("d=3 harmonic Hessians have the classical constants") {
  auto hs = harmonic_hessians(3);
  REQUIRE(hs.size() == 2);
  const double c = 2.0 / std::sqrt(M_PI);
  CHECK(hs[0](0, 0) == Catch::Approx(c));
  CHECK(hs[0](1, 1) == Catch::Approx(-c));
  CHECK(hs[0](0, 1) == 0.0);
  CHECK(hs[1](0, 0) == 0.0);
  CHECK(hs[1](0, 1) == Catch::Approx(c));
  CHECK(hs[1](1, 0) == Catch::Approx(c));
}

TEST_CASE("degree-2 basis functions are L^2-normalized on the sphere") {
  // sigma_{dp-1} E[f^2] = 1 for f = c1 (dp x_1^2 - 1) and f = c2 x_1 x_2
  // with x uniform on S^{dp-1}.
  for (int d : {3, 5}) {
    const int dp = d - 1;
    auto hs = harmonic_hessians(d);
    const double c1 = 0.5 * hs[0](dp - 1, dp - 1) * -1.0;  // h = 2 c1 (...)
    const double c2 = hs.back()(dp - 2, dp - 1);
    McEstimate e1 = mc_mean(
        [&](std::uint64_t i) {
          RngStream s(100 + d, i);
          std::vector<double> x = s.normal_draw(dp);
          double n2 = 0.0;
          for (double v : x) n2 += v * v;
          const double f = c1 * (dp * x[0] * x[0] / n2 - 1.0);
          return f * f;
        },
        200000);
    CHECK(sphere_area(dp - 1) * e1.mean ==
          Catch::Approx(1.0).margin(4.0 * sphere_area(dp - 1) * e1.std_error));
    if (dp >= 2) {
      McEstimate e2 = mc_mean(
          [&](std::uint64_t i) {
            RngStream s(200 + d, i);
            std::vector<double> x = s.normal_draw(dp);
            double n2 = 0.0;
            for (double v : x) n2 += v * v;
            const double f = c2 * x[0] * x[1] / n2;
            return f * f;
          },
          200000);
      CHECK(sphere_area(dp - 1) * e2.mean ==
            Catch::Approx(1.0).margin(4.0 * sphere_area(dp - 1) *
                                      e2.std_error));
    }
  }
}

TEST_CASE("absolute parabola integral closed form") {
  for (double c : {3.0, 5.0, 1.5})
    for (double q : {0.2, 1.0, c - 0.1}) {
      QuadResult ref = adaptive_quad(
          [&](double x) { return std::abs(c * x * x - q); }, 0.0, 1.0, 1e-12,
          1e-12);
      CHECK(detail::abs_parabola_integral(c, q) ==
            Catch::Approx(ref.value).epsilon(1e-10));
    }
}

TEST_CASE("3-D Gaussian absolute quadratic integral vs Monte Carlo") {
  const double p = 2.0, q = 1.0;
  McEstimate e = mc_mean(
      [&](std::uint64_t i) {
        RngStream s(7, i);
        const double u0 = s.normal() / std::sqrt(2.0);
        const double u1 = s.normal() / std::sqrt(2.0);
        const double u2 = s.normal() / std::sqrt(2.0);
        return std::abs(p * u0 * u0 - q * (u1 * u1 + u2 * u2));
      },
      400000);
  const double mc = std::pow(M_PI, 1.5) * e.mean;
  const double se = std::pow(M_PI, 1.5) * e.std_error;
  CHECK(detail::abs_quad_gauss3(p, q) == Catch::Approx(mc).margin(4.0 * se));
}

TEST_CASE("d=3 sphere determinant integral: MC vs cylindrical closed form") {
  const double r0 = 1.0, rb = 0.5;
  McEstimate e = detail::det_sphere_integral(3, r0, rb, 300000, 13);
  const double exact = sphere_gauss_factor(3, 2) *
                       detail::abs_quad_gauss3(r0, 4.0 / M_PI * rb);
  CHECK(e.mean == Catch::Approx(exact).margin(4.0 * e.std_error));
}

TEST_CASE("d=3 expectation: MC path vs quadrature path") {
  const int nu = 5;
  McEstimate e = expectation_sphere(nu, 3, 300000, 19);
  CHECK(e.mean ==
        Catch::Approx(expectation_sphere_quad(nu)).margin(4.0 * e.std_error));
}

TEST_CASE("asymptotic constant: MC path vs quadrature path at d=3") {
  McEstimate e = kd_constant(3, 300000, 23);
  CHECK(e.mean ==
        Catch::Approx(kd_constant_quad_d3()).margin(4.0 * e.std_error));
}

TEST_CASE("S^2 eigenspace expectation approaches its parabolic limit") {
  CHECK(s2_harmonic_expectation(200) / (200.0 * 200.0) ==
        Catch::Approx(s2_asymptotic()).epsilon(0.01));
  CHECK_THROWS_AS(s2_harmonic_expectation(1), std::invalid_argument);
}

TEST_CASE("signed determinant integral returns the Euler characteristic") {
  for (int n : {2, 3, 7, 25})
    CHECK(gauss_bonnet_check(n) == Catch::Approx(2.0).margin(1e-8));
}

TEST_CASE("growth exponent") {
  CHECK(varpi(2, 5, 7.0) == 1.0);
  CHECK(varpi(5, 2, 3.0) == 1.0);
  CHECK(varpi(4, 5, 2.0) == Catch::Approx(0.8));
  for (int spec = 0; spec < 3; ++spec) {
    const int d1[3] = {4, 5, 6}, d2[3] = {5, 4, 3};
    CHECK(varpi(d1[spec], d2[spec], 1.0) == Catch::Approx(1.0));
    double prev = 1.0;
    for (double r = 1.5; r < 40.0; r *= 1.7) {
      const double v = varpi(d1[spec], d2[spec], r);
      CHECK(v < prev);
      prev = v;
    }
    CHECK(varpi(d1[spec], d2[spec], 1e6) ==
          Catch::Approx((d1[spec] - 3.0) / (d1[spec] - 1.0)).margin(1e-5));
  }
  CHECK_THROWS_AS(varpi(4, 5, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(varpi(1, 5, 2.0), std::invalid_argument);
}
