#ifndef KACRICE_SPHERE_HPP
#define KACRICE_SPHERE_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "kacrice/linalg.hpp"
#include "kacrice/montecarlo.hpp"
#include "kacrice/quadrature.hpp"
#include "kacrice/rng.hpp"
#include "kacrice/specfun.hpp"

namespace kacrice {

struct SphereSums {
  int nu = 0;
  int d = 0;
  double r = 0.0;       // adjoint-length sum
  double r0 = 0.0;      // pure-second-derivative coefficient
  double r_beta = 0.0;  // harmonic-Hessian coefficient (same for every beta)
  int ell = 0;          // binom(d, 2)
};

namespace detail {

// C_{1,0,d-1}^2 = (d-1)(d-3)! / (2^{d-3} Gamma((d-2)/2)^2), valid for d >= 3.
inline double c10_sq(int d) {
  return (d - 1.0) * gamma_fn(d - 2.0) /
         (std::pow(2.0, d - 3) * std::pow(gamma_fn(0.5 * (d - 2.0)), 2));
}

}  // namespace detail

inline SphereSums sphere_sums(int nu, int d) {
  if (nu < 2 || d < 3)
    throw std::invalid_argument("sphere_sums: need nu >= 2, d >= 3");
  SphereSums s;
  s.nu = nu;
  s.d = d;
  s.ell = d * (d - 1) / 2;
  const double rfac = detail::c10_sq(d) / sphere_area(d - 3);
  for (int n = 1; n <= nu; ++n) {
    const double t = cnjd(n, 1, d) * legendre_deriv_at_one(n, d, 1);
    s.r += rfac * t * t;
  }
  for (int n = 0; n <= nu; ++n) {
    const double t =
        cnjd(n, 0, d) * (n + 1.0) * (n + 0.5 * (d - 3.0));
    s.r0 += t * t / (4.0 * sphere_area(d - 2));
  }
  for (int n = 2; n <= nu; ++n) {
    const double t = cnjd(n, 2, d) * legendre_deriv_at_one(n, d, 2);
    s.r_beta += t * t;
  }
  return s;
}

// Limit constants: r / nu^{d+1}, r0 / nu^{d+3}, r_beta / nu^{d+3}.
inline double asy_r_constant(int d) {
  return detail::c10_sq(d) /
         (std::pow(2.0, d - 1) * std::pow(gamma_fn(0.5 * (d - 1.0)), 2) *
          sphere_area(d - 3) * (d + 1.0));
}
inline double asy_r0_constant(int d) {
  return 1.0 /
         (std::pow(2.0, d - 1) * std::pow(gamma_fn(0.5 * (d - 1.0)), 2) *
          sphere_area(d - 2) * (d + 3.0));
}
inline double asy_rbeta_constant(int d) {
  return 1.0 / (std::pow(2.0, d + 3) * (d + 3.0) *
                std::pow(gamma_fn(0.5 * (d - 1.0)), 2));
}

// Hessians at the origin of the orthonormal degree-2 harmonic basis on
// R^{dp} (dp = d-1): C1 (dp x_i^2 - r^2) for i < dp-1 and C2 x_i x_j for
// i < j, with C1, C2 solved from the classical sphere moments.
inline std::vector<Matrix> harmonic_hessians(int d) {
  if (d < 3) throw std::invalid_argument("harmonic_hessians: d >= 3");
  const int dp = d - 1;
  // Monomial moments over S^{dp-1}: Int x_1^{2h1} x_2^{2h2} dS.
  auto moment = [&](int h1, int h2) {
    double num = 2.0 * gamma_fn(h1 + 0.5) * gamma_fn(h2 + 0.5) *
                 std::pow(gamma_fn(0.5), dp - 2);
    return num / gamma_fn(h1 + h2 + 0.5 * dp);
  };
  const double c2 = 1.0 / std::sqrt(moment(1, 1));
  // Int (dp x_1^2 - r^2)^2 dS = dp^2 m4 - 2 dp m2 + sigma  (r = 1 on S).
  const double m4 = moment(2, 0), m2 = moment(1, 0);
  const double quad = dp * dp * m4 - 2.0 * dp * m2 + sphere_area(dp - 1);
  const double c1 = 1.0 / std::sqrt(quad);
  std::vector<Matrix> hs;
  for (int i = 0; i + 1 < dp; ++i) {
    Matrix h(dp);
    for (int k = 0; k < dp; ++k) h(k, k) = -2.0 * c1;
    h(i, i) += 2.0 * dp * c1;
    hs.push_back(h);
  }
  for (int i = 0; i < dp; ++i)
    for (int j = i + 1; j < dp; ++j) {
      Matrix h(dp);
      h(i, j) = c2;
      h(j, i) = c2;
      hs.push_back(h);
    }
  return hs;
}

namespace detail {

// Gaussian-converted sphere integral of |det A(u)| with
// A(u) = sqrt(r0) u_0 I + sum_beta sqrt(r_beta) u_beta H_beta.
inline McEstimate det_sphere_integral(int d, double r0, double r_beta,
                                      std::uint64_t n_samples,
                                      std::uint64_t seed) {
  const int ell = d * (d - 1) / 2;
  const auto hs = harmonic_hessians(d);
  const double conv =
      sphere_gauss_factor(ell, d - 1) * std::pow(M_PI, 0.5 * ell);
  const double s0 = std::sqrt(r0), sb = std::sqrt(r_beta);
  McEstimate est = mc_mean(
      [&](std::uint64_t i) {
        RngStream stream(seed, i);
        std::vector<double> z = stream.normal_draw(ell);
        // e^{-|u|^2} weight corresponds to u ~ N(0, 1/2).
        for (auto& v : z) v /= std::sqrt(2.0);
        Matrix A(d - 1);
        for (int k = 0; k < d - 1; ++k) A(k, k) = s0 * z[0];
        for (int b = 0; b + 1 < ell; ++b)
          for (std::size_t p = 0; p < A.a.size(); ++p)
            A.a[p] += sb * z[b + 1] * hs[b].a[p];
        return std::abs(det_lu(A));
      },
      n_samples);
  est.mean *= conv;
  est.std_error *= conv;
  est.variance *= conv * conv;
  return est;
}

// Closed form of Int_0^1 |c x^2 - q| dx for c >= q >= 0.
inline double abs_parabola_integral(double c, double q) {
  const double x0 = std::sqrt(q / c);
  return 2.0 * (q * x0 - c * x0 * x0 * x0 / 3.0) + c / 3.0 - q;
}

// Int_{R^3} e^{-|u|^2} |p u_0^2 - q (u_1^2 + u_2^2)| dV, reduced over S^2.
inline double abs_quad_gauss3(double p, double q) {
  return 4.0 * M_PI * 0.5 * gamma_fn(2.5) * abs_parabola_integral(p + q, q);
}

}  // namespace detail

// mu(S^{d-1}, V_nu) = Gamma((ell+d)/2) / ((pi r)^{(d-1)/2} Gamma(d/2)) * I_nu.
inline McEstimate expectation_sphere(int nu, int d, std::uint64_t n_samples,
                                     std::uint64_t seed) {
  SphereSums s = sphere_sums(nu, d);
  const double pref = gamma_fn(0.5 * (s.ell + d)) /
                      (std::pow(M_PI * s.r, 0.5 * (d - 1)) * gamma_fn(0.5 * d));
  McEstimate est = detail::det_sphere_integral(d, s.r0, s.r_beta, n_samples, seed);
  est.mean *= pref;
  est.std_error *= pref;
  est.variance *= pref * pref;
  return est;
}

// Exact d = 3 path: det A = r0 u0^2 - (4/pi) r_beta (u1^2 + u2^2).
inline double expectation_sphere_quad(int nu) {
  SphereSums s = sphere_sums(nu, 3);
  const double I3 = sphere_gauss_factor(3, 2) *
                    detail::abs_quad_gauss3(s.r0, 4.0 / M_PI * s.r_beta);
  return gamma_fn(3.0) / (M_PI * s.r * gamma_fn(1.5)) * I3;
}

// K_d = 2 Gamma((ell+d)/2) / ((pi rbar)^{(d-1)/2} Gamma(d/2) (d-1)!)
//       * Int_S |det A_inf(u)| dS, with the limit constants rbar, rbar0,
//       rbar_beta of the asymptotic sums.
inline McEstimate kd_constant(int d, std::uint64_t n_samples,
                              std::uint64_t seed) {
  const int ell = d * (d - 1) / 2;
  const double rbar = asy_r_constant(d);
  const double pref =
      2.0 * gamma_fn(0.5 * (ell + d)) /
      (std::pow(M_PI * rbar, 0.5 * (d - 1)) * gamma_fn(0.5 * d) *
       gamma_fn(static_cast<double>(d)));
  McEstimate est = detail::det_sphere_integral(
      d, asy_r0_constant(d), asy_rbeta_constant(d), n_samples, seed);
  est.mean *= pref;
  est.std_error *= pref;
  est.variance *= pref * pref;
  return est;
}

inline double kd_constant_quad_d3() {
  const double rbar = asy_r_constant(3);
  const double I = sphere_gauss_factor(3, 2) *
                   detail::abs_quad_gauss3(asy_r0_constant(3),
                                           4.0 / M_PI * asy_rbeta_constant(3));
  // d = 3: ell = 3, so 2 Gamma(3) / (pi rbar Gamma(3/2) 2!) = 2 / (pi rbar
  // Gamma(3/2)).
  return 2.0 / (M_PI * rbar * gamma_fn(1.5)) * I;
}

// mu(Y_n) for the degree-n spherical-harmonic eigenspace on S^2.
inline double s2_harmonic_expectation(int n) {
  if (n < 2) throw std::invalid_argument("s2_harmonic_expectation: n >= 2");
  const double a = cnjd(n, 2, 3) * legendre_deriv_at_one(n, 3, 2);
  const double b = n * (n + 1.0) * std::sqrt(n + 0.5) / (4.0 * std::sqrt(2.0));
  const double I3 = detail::abs_quad_gauss3(b * b, a * a);
  return 4.0 * M_PI * std::pow(M_PI, -2.5) *
         (4.0 * M_PI / (n * (n + 1.0) * (n + 0.5))) * (4.0 / M_PI) * I3;
}

inline double s2_asymptotic() { return 2.0 / std::sqrt(3.0); }

// Signed analogue of the S^2 integral: evaluates to beta(n) - alpha(n) = 2,
// the Euler characteristic of S^2, for every n.
inline double gauss_bonnet_check(int n) {
  if (n < 2) throw std::invalid_argument("gauss_bonnet_check: n >= 2");
  const double beta = n * (n + 1.0);
  const double alpha = (n + 2.0) * (n - 1.0);
  auto g = [&](double x) { return (2.0 * beta + alpha) * x * x - alpha; };
  // Tolerances scale with the coefficient size: the integrand is O(n^2)
  // while the signed integral cancels down to O(1).
  const double tol = 1e-13 * (2.0 * beta + alpha);
  QuadResult q = adaptive_quad(g, 0.0, 1.0, tol, tol);
  return std::pow(M_PI, -1.5) * 4.0 * M_PI * 0.5 * gamma_fn(2.5) * q.value;
}

// Growth exponent for products of spheres.
inline double varpi(int d1, int d2, double r) {
  if (d1 < 2 || d2 < 2) throw std::invalid_argument("varpi: d1, d2 >= 2");
  if (r < 1.0) throw std::invalid_argument("varpi: r >= 1");
  if ((d1 - 2) * (d2 - 2) == 0) return 1.0;
  return ((d1 - 3.0) * r + d2 + 1.0) / ((d1 - 1.0) * r + d2 - 1.0);
}

}  // namespace kacrice

#endif  // KACRICE_SPHERE_HPP
