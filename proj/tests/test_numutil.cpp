#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "kacrice/linalg.hpp"
#include "kacrice/montecarlo.hpp"
#include "kacrice/quadrature.hpp"
#include "kacrice/rng.hpp"
#include "kacrice/roots.hpp"

using namespace kacrice;

TEST_CASE("rng streams are reproducible and distinct") {
  RngStream a(42, 7), b(42, 7), c(42, 8), d(43, 7);
  bool same = true, diff1 = false, diff2 = false;
  for (int i = 0; i < 100; ++i) {
    const std::uint64_t va = a.next_u64();
    same = same && (va == b.next_u64());
    diff1 = diff1 || (va != c.next_u64());
    diff2 = diff2 || (va != d.next_u64());
  }
  CHECK(same);
  CHECK(diff1);
  CHECK(diff2);
}

TEST_CASE("uniform draws lie in the open unit interval") {
  RngStream s(1, 0);
  for (int i = 0; i < 10000; ++i) {
    const double u = s.uniform();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
  }
}

TEST_CASE("inverse normal CDF inverts the exact CDF") {
  auto cdf = [](double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); };
  CHECK(RngStream::normal_icdf(0.5) == Catch::Approx(0.0).margin(1e-14));
  for (double p : {1e-10, 1e-6, 0.02, 0.3, 0.5, 0.77, 0.999, 1 - 1e-9}) {
    const double x = RngStream::normal_icdf(p);
    CHECK(cdf(x) == Catch::Approx(p).epsilon(1e-10));
    CHECK(RngStream::normal_icdf(1.0 - p) ==
          Catch::Approx(-x).margin(1e-9 * (1.0 + std::abs(x))));
  }
}

TEST_CASE("normal draws have the right first moments") {
  RngStream s(5, 1);
  const int n = 200000;
  double m = 0.0, m2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = s.normal();
    m += x;
    m2 += x * x;
  }
  m /= n;
  m2 /= n;
  CHECK(m == Catch::Approx(0.0).margin(4.0 / std::sqrt(double(n))));
  CHECK(m2 == Catch::Approx(1.0).margin(6.0 / std::sqrt(double(n))));
}

TEST_CASE("mc_mean is exact on a deterministic integrand") {
  const std::uint64_t n = 10000;
  McEstimate e = mc_mean([](std::uint64_t i) { return double(i); }, n);
  CHECK(e.mean == Catch::Approx(0.5 * (n - 1)).epsilon(1e-13));
  CHECK(e.n_samples == n);
  CHECK(e.ci95_halfwidth() == Catch::Approx(1.96 * e.std_error));
}

TEST_CASE("mc_mean is bitwise deterministic across thread counts") {
  auto f = [](std::uint64_t i) {
    RngStream s(99, i);
    return s.normal() * s.normal();
  };
  McEstimate e1 = mc_mean(f, 50000, 1);
  McEstimate e4 = mc_mean(f, 50000, 4);
  McEstimate e7 = mc_mean(f, 50000, 7);
  CHECK(e1.mean == e4.mean);
  CHECK(e1.std_error == e4.std_error);
  CHECK(e1.mean == e7.mean);
  CHECK(e1.std_error == e7.std_error);
}

TEST_CASE("mc_mean standard error matches the known variance") {
  auto f = [](std::uint64_t i) {
    RngStream s(3, i);
    return s.uniform();
  };
  const std::uint64_t n = 100000;
  McEstimate e = mc_mean(f, n);
  CHECK(e.mean == Catch::Approx(0.5).margin(4.0 * e.std_error));
  CHECK(e.variance == Catch::Approx(1.0 / 12.0).epsilon(0.05));
  CHECK(e.std_error ==
        Catch::Approx(std::sqrt(e.variance / double(n))).epsilon(1e-12));
}

TEST_CASE("adaptive quadrature on smooth integrands") {
  QuadResult q = adaptive_quad([](double x) { return x * x; }, 0.0, 1.0);
  CHECK(q.value == Catch::Approx(1.0 / 3.0).epsilon(1e-14));
  q = adaptive_quad([](double x) { return std::sin(x); }, 0.0, M_PI);
  CHECK(q.value == Catch::Approx(2.0).epsilon(1e-13));
  CHECK(std::abs(q.value - 2.0) <= std::max(q.error, 1e-13));
}

TEST_CASE("adaptive quadrature handles an integrable endpoint singularity") {
  QuadResult q = adaptive_quad([](double x) { return 1.0 / std::sqrt(x); },
                               0.0, 1.0, 1e-9, 1e-9, 1000000);
  CHECK(q.value == Catch::Approx(2.0).epsilon(1e-7));
}

TEST_CASE("quadrature failure carries its best estimate") {
  // Oscillation far beyond the allotted budget.
  auto f = [](double x) { return std::sin(1e6 * x); };
  try {
    adaptive_quad(f, 0.0, 1.0, 1e-14, 1e-14, 500);
    FAIL("expected QuadratureError");
  } catch (const QuadratureError& e) {
    CHECK(e.best_estimate.n_evals <= 1000);
    CHECK(std::isfinite(e.best_estimate.value));
  }
}

TEST_CASE("chunked quadrature over long ranges") {
  QuadResult q = chunked_quad([](double x) { return std::exp(-x); }, 0.0, 60.0,
                              5.0, 1e-12);
  CHECK(q.value == Catch::Approx(1.0).epsilon(1e-10));
  q = chunked_quad([](double x) { return std::cos(x); }, 0.0, 200.0 * M_PI,
                   10.0, 1e-10);
  CHECK(q.value == Catch::Approx(0.0).margin(1e-7));
}

TEST_CASE("bracketed roots of sine") {
  auto f = [](double x) { return std::sin(x); };
  std::vector<double> r = bracketed_roots(f, 0.5, 10.0, 400);
  REQUIRE(r.size() == 3);
  CHECK(r[0] == Catch::Approx(M_PI).margin(1e-10));
  CHECK(r[1] == Catch::Approx(2.0 * M_PI).margin(1e-10));
  CHECK(r[2] == Catch::Approx(3.0 * M_PI).margin(1e-10));
}

TEST_CASE("bracketed roots records exact grid zeros once") {
  auto f = [](double x) { return x - 1.0; };
  std::vector<double> r = bracketed_roots(f, 0.0, 2.0, 2);
  REQUIRE(r.size() == 1);
  CHECK(r[0] == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("cholesky of a known SPD matrix") {
  Matrix m(2);
  m(0, 0) = 4.0;
  m(0, 1) = m(1, 0) = 2.0;
  m(1, 1) = 3.0;
  Matrix l = cholesky(m);
  CHECK(l(0, 0) == Catch::Approx(2.0));
  CHECK(l(1, 0) == Catch::Approx(1.0));
  CHECK(l(0, 1) == 0.0);
  CHECK(l(1, 1) == Catch::Approx(std::sqrt(2.0)));
}

TEST_CASE("cholesky reports the failing pivot") {
  Matrix m(2);
  m(0, 0) = 1.0;
  m(0, 1) = m(1, 0) = 2.0;
  m(1, 1) = 1.0;  // not positive definite
  try {
    cholesky(m);
    FAIL("expected DecompositionError");
  } catch (const DecompositionError& e) {
    CHECK(std::string(e.what()).find("pivot 1") != std::string::npos);
  }
}

TEST_CASE("LU determinant on reference matrices") {
  Matrix m = Matrix::identity(3);
  CHECK(det_lu(m) == Catch::Approx(1.0));
  Matrix a(3);
  double vals[3][3] = {{2, 1, 1}, {1, 3, 2}, {1, 0, 0}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a(i, j) = vals[i][j];
  CHECK(det_lu(a) == Catch::Approx(-1.0).epsilon(1e-13));
  Matrix s(2);
  s(0, 0) = 1.0;
  s(0, 1) = 2.0;
  s(1, 0) = 2.0;
  s(1, 1) = 4.0;
  CHECK(det_lu(s) == 0.0);
}

TEST_CASE("lower triangular apply") {
  Matrix l(2);
  l(0, 0) = 2.0;
  l(1, 0) = 1.0;
  l(1, 1) = 3.0;
  std::vector<double> y = lower_apply(l, {1.0, 2.0});
  CHECK(y[0] == Catch::Approx(2.0));
  CHECK(y[1] == Catch::Approx(7.0));
}
