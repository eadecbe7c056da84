#ifndef KACRICE_SYMGAUSS_HPP
#define KACRICE_SYMGAUSS_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "kacrice/linalg.hpp"
#include "kacrice/montecarlo.hpp"
#include "kacrice/quadrature.hpp"
#include "kacrice/rng.hpp"
#include "kacrice/specfun.hpp"

namespace kacrice {

// Coordinate ordering on Sym_L in the H_ij basis: the L diagonal slots
// (0,0)..(L-1,L-1) first, then the off-diagonal pairs (i,j), i<j, in
// lexicographic order.  Every covariance matrix over Sym_L coordinates in
// this library uses this ordering.
inline std::vector<std::pair<int, int>> sym_coord_pairs(int L) {
  std::vector<std::pair<int, int>> idx;
  for (int i = 0; i < L; ++i) idx.emplace_back(i, i);
  for (int i = 0; i < L; ++i)
    for (int j = i + 1; j < L; ++j) idx.emplace_back(i, j);
  return idx;
}

// O(N)-invariant metric |A|^2_{a,b} = beta (tr A)^2 + alpha tr A^2 on Sym_N.
struct InvariantMetric {
  int N;
  double a, b;

  InvariantMetric(int N_, double a_, double b_) : N(N_), a(a_), b(b_) {
    if (N_ < 1 || a_ <= 0.0 || b_ <= 0.0)
      throw std::invalid_argument("InvariantMetric: need N >= 1, a,b > 0");
  }

  int D() const { return N * (N + 1) / 2; }
  double R2() const {
    return 4.0 * gamma_fn(0.5 * (N + 4.0)) / std::pow(M_PI, 0.5 * N);
  }
  double alpha() const { return 1.0 / (b * b * R2()); }
  double beta() const {
    return (1.0 / N) * (1.0 / (N * a * a) - 1.0 / (b * b * R2()));
  }
  double c_n() const {
    return 1.0 / (a * std::sqrt(static_cast<double>(N)) *
                  std::pow(b * std::sqrt(R2()), D() - 1));
  }
  bool positive_definite() const { return alpha() > 0.0 && alpha() + N * beta() > 0.0; }
};

// Z_N = (2 pi)^{-(D_N - N)/2} prod_{j=0}^{N-1} Gamma(1 + j/2) / Gamma(3/2).
inline double z_const(int N) {
  if (N < 1) throw std::invalid_argument("z_const: N must be >= 1");
  const int D = N * (N + 1) / 2;
  double p = 1.0;
  for (int j = 0; j < N; ++j) p *= gamma_fn(1.0 + 0.5 * j) / gamma_fn(1.5);
  return std::pow(2.0 * M_PI, -0.5 * (D - N)) * p;
}

// Selberg value of the Weyl-normalization integral
//   (2 pi)^{-(D_N-N)/2} Int_{R^N} |Delta(x)| e^{-|x|^2/2} (2 pi)^{-N/2} dV
//     = (2 pi)^{-(D_N-N)/2} prod_{j=1}^{N} Gamma(1 + j/2) / Gamma(3/2).
// This is the constant the eigenvalue reduction actually requires; it agrees
// with z_const for N = 2 but not for general N (the product there starts at
// j = 0).  Validated against the N = 1 closed form and an N = 2 matrix-space
// Monte Carlo dual path.
inline double z_weyl(int N) {
  if (N < 1) throw std::invalid_argument("z_weyl: N must be >= 1");
  const int D = N * (N + 1) / 2;
  double p = 1.0;
  for (int j = 1; j <= N; ++j) p *= gamma_fn(1.0 + 0.5 * j) / gamma_fn(1.5);
  return std::pow(2.0 * M_PI, -0.5 * (D - N)) * p;
}

// E[|det X|] for X = sum x_ij H_ij with coordinates drawn from N(0, C);
// C is over Sym_L coordinates in the sym_coord_pairs ordering.
inline McEstimate det_abs_expectation(const Matrix& C, std::uint64_t n_samples,
                                      std::uint64_t seed) {
  const int D = static_cast<int>(C.n);
  const int L = static_cast<int>((std::sqrt(8.0 * D + 1.0) - 1.0) / 2.0 + 0.5);
  if (L * (L + 1) / 2 != D)
    throw std::invalid_argument("det_abs_expectation: size is not L(L+1)/2");
  const Matrix chol = cholesky(C);
  const auto idx = sym_coord_pairs(L);
  return mc_mean(
      [&](std::uint64_t i) {
        RngStream stream(seed, i);
        std::vector<double> z = stream.normal_draw(D);
        std::vector<double> x = lower_apply(chol, z);
        Matrix X(L);
        for (int k = 0; k < D; ++k) {
          auto [r, c] = idx[k];
          X(r, c) = x[k];
          X(c, r) = x[k];
        }
        return std::abs(det_lu(X));
      },
      n_samples);
}

// I(a,b) = sqrt(2 pi (a^2 - b^2)) (Int_0^{2 pi} 2 c^{3/2} (c+2)^{-1/2} dtheta
//          - 2 pi a + 2 pi),  c(theta) = a - b cos(2 theta).
inline double iab(double a, double b, double tol = 1e-10) {
  if (!(a > b && b >= 0.0))
    throw std::invalid_argument("iab: need a > b >= 0");
  auto g = [&](double theta) {
    const double c = a - b * std::cos(2.0 * theta);
    return 2.0 * std::pow(c, 1.5) / std::sqrt(c + 2.0);
  };
  QuadResult q = adaptive_quad(g, 0.0, 2.0 * M_PI, tol, tol);
  return std::sqrt(2.0 * M_PI * (a * a - b * b)) *
         (q.value - 2.0 * M_PI * a + 2.0 * M_PI);
}

// The 3-D Gaussian integral the 1-D reduction evaluates:
//   Int e^{-(a x^2 + a y^2 - 2 b x y)/(2(a^2-b^2)) - z^2/2}
//       |(x^2 + y^2)/2 - z^2| dV
// = (2 pi)^{3/2} sqrt(a^2-b^2) E[|(x^2+y^2)/2 - z^2|],
// (x,y) ~ N(0, [[a,b],[b,a]]), z ~ N(0,1).  (Rotating to u = (x+y)/sqrt2,
// v = (x-y)/sqrt2 and rescaling to unit Gaussians turns the integrand into
// |c(theta) s - 2 w^2| with c = a - b cos 2theta, which is what the
// quadrature form integrates in closed form over the radial variable.)
inline McEstimate iab_mc(double a, double b, std::uint64_t n_samples,
                         std::uint64_t seed) {
  if (!(a > b && b >= 0.0))
    throw std::invalid_argument("iab_mc: need a > b >= 0");
  Matrix S(2);
  S(0, 0) = S(1, 1) = a;
  S(0, 1) = S(1, 0) = b;
  const Matrix chol = cholesky(S);
  const double pref = std::pow(2.0 * M_PI, 1.5) * std::sqrt(a * a - b * b);
  McEstimate est = mc_mean(
      [&](std::uint64_t i) {
        RngStream stream(seed, i);
        std::vector<double> g = stream.normal_draw(3);
        std::vector<double> xy = lower_apply(chol, {g[0], g[1]});
        return std::abs(0.5 * (xy[0] * xy[0] + xy[1] * xy[1]) - g[2] * g[2]);
      },
      n_samples);
  est.mean *= pref;
  est.std_error *= pref;
  est.variance *= pref * pref;
  return est;
}

// Int_{R^N} e^{-|x|^2/2 - (beta/2 alpha)(sum x_i)^2} (prod |x_i| if flag)
// |Delta(x)| dV, by importance sampling from the standard normal.
inline McEstimate eigen_reduced_integral(int N, double alpha, double beta,
                                         bool include_abs_det,
                                         std::uint64_t n_samples,
                                         std::uint64_t seed) {
  if (!(alpha > 0.0) || !(alpha + N * beta > 0.0))
    throw std::invalid_argument(
        "eigen_reduced_integral: divergent (need alpha > 0, alpha + N beta > 0)");
  const double pref = std::pow(2.0 * M_PI, 0.5 * N);
  McEstimate est = mc_mean(
      [&](std::uint64_t i) {
        RngStream stream(seed, i);
        std::vector<double> x = stream.normal_draw(N);
        double sum = 0.0;
        for (double v : x) sum += v;
        double w = std::exp(-0.5 * beta / alpha * sum * sum);
        if (include_abs_det)
          for (double v : x) w *= std::abs(v);
        for (int i1 = 0; i1 < N; ++i1)
          for (int j1 = i1 + 1; j1 < N; ++j1) w *= std::abs(x[i1] - x[j1]);
        return w;
      },
      n_samples);
  est.mean *= pref;
  est.std_error *= pref;
  est.variance *= pref * pref;
  return est;
}

// Gaussian-metric integral Int_{Sym_N} e^{-|A|^2_{a,b}} |det A| dV_{a,b},
// assembled from the eigenvalue reduction with the corrected prefactor
// C_N(a,b) / (z_weyl(N) (2 alpha)^{(D_N + N)/2}).
inline McEstimate det_abs_gauss_metric(const InvariantMetric& m,
                                       std::uint64_t n_samples,
                                       std::uint64_t seed) {
  const double alpha = m.alpha();
  const double beta = m.beta();
  McEstimate est = eigen_reduced_integral(m.N, alpha, beta, true, n_samples, seed);
  const double pref =
      m.c_n() / (z_weyl(m.N) * std::pow(2.0 * alpha, 0.5 * (m.D() + m.N)));
  est.mean *= pref;
  est.std_error *= pref;
  est.variance *= pref * pref;
  return est;
}

}  // namespace kacrice

#endif  // KACRICE_SYMGAUSS_HPP
