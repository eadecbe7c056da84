#ifndef KACRICE_SPECFUN_HPP
#define KACRICE_SPECFUN_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace kacrice {

inline double gamma_fn(double x) {
  if (x <= 0.0 && x == std::floor(x))
    throw std::invalid_argument("gamma_fn: nonpositive integer argument");
  return std::tgamma(x);
}

// Surface area of the unit n-sphere S^n in R^{n+1}.
inline double sphere_area(int n) {
  if (n < 0) throw std::invalid_argument("sphere_area: n must be >= 0");
  return 2.0 * std::pow(M_PI, 0.5 * (n + 1)) / gamma_fn(0.5 * (n + 1));
}

// Falling factorial [x]_k = x (x-1) ... (x-k+1); [x]_0 = 1.
inline double falling_factorial(double x, int k) {
  if (k < 0) throw std::invalid_argument("falling_factorial: k must be >= 0");
  double p = 1.0;
  for (int i = 0; i < k; ++i) p *= x - i;
  return p;
}

inline double binomial(double n, int k) {
  if (k < 0) return 0.0;
  return falling_factorial(n, k) / std::tgamma(k + 1.0);
}

// Sum of p-th powers 1^p + ... + n^p (compensated accumulation).
inline double power_sum(int p, std::uint64_t n) {
  if (p < 0) throw std::invalid_argument("power_sum: p must be >= 0");
  double s = 0.0, c = 0.0;
  for (std::uint64_t m = 1; m <= n; ++m) {
    double x = std::pow(static_cast<double>(m), p);
    double y = x - c;
    double t = s + y;
    c = (t - s) - y;
    s = t;
  }
  return s;
}

inline double binomial_int(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Bernoulli numbers B_k (convention B_1 = -1/2), by the defining recurrence.
inline double bernoulli_number(int k) {
  if (k < 0) throw std::invalid_argument("bernoulli_number: k must be >= 0");
  static thread_local std::vector<double> cache{1.0};
  while (static_cast<int>(cache.size()) <= k) {
    const int m = static_cast<int>(cache.size());
    double s = 0.0;
    for (int j = 0; j < m; ++j) s += binomial_int(m + 1, j) * cache[j];
    cache.push_back(-s / binomial_int(m + 1, m));
  }
  return cache[k];
}

// Bernoulli polynomial B_n(x) = sum_k binom(n,k) B_k x^{n-k}.
inline double bernoulli_poly(int n, double x) {
  if (n < 0) throw std::invalid_argument("bernoulli_poly: n must be >= 0");
  double s = 0.0;
  for (int k = n; k >= 0; --k)
    s += binomial_int(n, k) * bernoulli_number(k) * std::pow(x, n - k);
  return s;
}

// Faulhaber form of the power sum: sum_{n=1}^{nu} n^d via Bernoulli
// polynomials, (B_{d+1}(nu+1) - B_{d+1}(1)) / (d+1).  Evaluating the lower
// end at 1 rather than 0 keeps the d = 0 case correct (B_1(1) != B_1(0)).
inline double bernoulli_power_sum(int d, std::uint64_t nu) {
  if (d < 0) throw std::invalid_argument("bernoulli_power_sum: d must be >= 0");
  return (bernoulli_poly(d + 1, static_cast<double>(nu) + 1.0) -
          bernoulli_poly(d + 1, 1.0)) /
         (d + 1.0);
}

// Gegenbauer-type Legendre polynomial P_{n,d}(t) via the three-term
// recurrence (n+d-2) P_{n+1} = (2n+d-2) t P_n - n P_{n-1}, P_0 = 1, P_1 = t.
inline double legendre_pnd(int n, int d, double t) {
  if (n < 0 || d < 2) throw std::invalid_argument("legendre_pnd: bad n or d");
  if (n == 0) return 1.0;
  double pm1 = 1.0, p = t;
  for (int k = 1; k < n; ++k) {
    double pn = ((2.0 * k + d - 2.0) * t * p - k * pm1) / (k + d - 2.0);
    pm1 = p;
    p = pn;
  }
  return p;
}

// Monomial coefficients of P_{n,d} (index = power of t).
inline std::vector<double> legendre_pnd_coeffs(int n, int d) {
  if (n < 0 || d < 2) throw std::invalid_argument("legendre_pnd_coeffs: bad n or d");
  std::vector<double> pm1{1.0};
  if (n == 0) return pm1;
  std::vector<double> p{0.0, 1.0};
  for (int k = 1; k < n; ++k) {
    std::vector<double> pn(p.size() + 1, 0.0);
    const double a = (2.0 * k + d - 2.0) / (k + d - 2.0);
    const double b = static_cast<double>(k) / (k + d - 2.0);
    for (std::size_t j = 0; j < p.size(); ++j) pn[j + 1] += a * p[j];
    for (std::size_t j = 0; j < pm1.size(); ++j) pn[j] -= b * pm1[j];
    pm1 = std::move(p);
    p = std::move(pn);
  }
  return p;
}

// j-th derivative of P_{n,d} at t = 1:
//   P_{n,d}^{(j)}(1) = 2^{-j} binom(n+j, j) [n + (d-3)/2]_j.
inline double legendre_deriv_at_one(int n, int d, int j) {
  if (j < 0) throw std::invalid_argument("legendre_deriv_at_one: j must be >= 0");
  if (j > n) return 0.0;
  return std::pow(0.5, j) * binomial(n + j, j) *
         falling_factorial(n + 0.5 * (d - 3.0), j);
}

// Normalizing constant C_{n,j,d} for the weighted associated polynomial:
// makes \int_{-1}^{1} (C P^{(j)}_{n,d})^2 (1-t^2)^{j+(d-3)/2} dt = 1.
inline double cnjd(int n, int j, int d) {
  if (d < 3 || n < 0 || j < 0 || j > n)
    throw std::invalid_argument("cnjd: bad arguments");
  const double lead = falling_factorial(n + d - 3.0, d - 3) /
                      gamma_fn(0.5 * (d - 1.0));
  const double inner = (2.0 * n + d - 2.0) /
                       (std::pow(2.0, d - 2) *
                        falling_factorial(n + d + j - 3.0, 2 * j + d - 3));
  return lead * std::sqrt(inner);
}

// Dimension M(n,d) of degree-n spherical harmonics on S^{d-1}.
inline double dim_harmonic(int n, int d) {
  if (n < 0 || d < 2) throw std::invalid_argument("dim_harmonic: bad n or d");
  if (n == 0) return 1.0;
  return (2.0 * n + d - 2.0) / (n + d - 2.0) * binomial(n + d - 2.0, d - 2);
}

// Dimension of the space spanned by harmonics of degree <= nu on S^{d-1}.
inline double dim_poly_space(int nu, int d) {
  double s = 0.0;
  for (int n = 0; n <= nu; ++n) s += dim_harmonic(n, d);
  return s;
}

// Factor converting an integral of a degree-ldeg homogeneous function over
// the unit sphere of an N-dimensional space into a Gaussian integral:
// \int_{S} f dS = sphere_gauss_factor(N, ldeg) \int e^{-|x|^2} f dV.
inline double sphere_gauss_factor(int N, int ldeg) {
  return 2.0 / gamma_fn(0.5 * (N + ldeg));
}

}  // namespace kacrice

#endif  // KACRICE_SPECFUN_HPP
