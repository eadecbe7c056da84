#ifndef KACRICE_CIRCLE_HPP
#define KACRICE_CIRCLE_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "kacrice/montecarlo.hpp"
#include "kacrice/quadrature.hpp"
#include "kacrice/rng.hpp"
#include "kacrice/specfun.hpp"

namespace kacrice {

class DegenerateSampleError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Random trigonometric polynomial
//   v(theta) = a0 Phi_0 + sum_{m=1}^{nu} (a_m Phi_{-m} + b_m Phi_m),
// where Phi_0 = (2 pi)^{-1/2}, Phi_{-m} = pi^{-1/2} cos(m theta),
// Phi_m = pi^{-1/2} sin(m theta); the coefficients are the L^2-orthonormal
// coordinates.
struct TrigPoly1D {
  int nu = 1;
  std::vector<double> a;  // a[0..nu], a[0] the constant coordinate
  std::vector<double> b;  // b[1..nu] (b[0] unused)

  double eval(double theta) const {
    double s = a[0] / std::sqrt(2.0 * M_PI);
    const double inv_sqrt_pi = 1.0 / std::sqrt(M_PI);
    for (int m = 1; m <= nu; ++m)
      s += inv_sqrt_pi * (a[m] * std::cos(m * theta) + b[m] * std::sin(m * theta));
    return s;
  }

  double eval_deriv(double theta) const {
    double s = 0.0;
    const double inv_sqrt_pi = 1.0 / std::sqrt(M_PI);
    for (int m = 1; m <= nu; ++m)
      s += inv_sqrt_pi * m *
           (-a[m] * std::sin(m * theta) + b[m] * std::cos(m * theta));
    return s;
  }
};

inline TrigPoly1D sample_poly(int nu, RngStream& stream) {
  if (nu < 1) throw std::invalid_argument("sample_poly: nu must be >= 1");
  TrigPoly1D p;
  p.nu = nu;
  p.a.assign(nu + 1, 0.0);
  p.b.assign(nu + 1, 0.0);
  p.a[0] = stream.normal();
  for (int m = 1; m <= nu; ++m) {
    p.a[m] = stream.normal();
    p.b[m] = stream.normal();
  }
  return p;
}

// Number of zeros of v' on [0, 2 pi): counts sign changes of v' on a cyclic
// grid of oversample * 2 nu points.  The count must come out even (v' has at
// most 2 nu zeros and lives on a circle); an odd count or a zero grid value
// triggers a retry with doubled oversampling.
inline int count_critical(const TrigPoly1D& p, int oversample = 16) {
  if (oversample < 8)
    throw std::invalid_argument("count_critical: oversample must be >= 8");
  bool nonzero = false;
  for (int m = 1; m <= p.nu; ++m)
    if (p.a[m] != 0.0 || p.b[m] != 0.0) nonzero = true;
  if (!nonzero)
    throw std::invalid_argument("count_critical: polynomial is constant");

  for (int attempt = 0; attempt < 4; ++attempt, oversample *= 2) {
    const int grid = oversample * 2 * p.nu;
    std::vector<double> vals(grid);
    bool grid_zero = false;
    for (int j = 0; j < grid; ++j) {
      const double theta = 2.0 * M_PI * j / grid;
      // Incremental rotation over the harmonic index m.
      const std::complex<double> w(std::cos(theta), std::sin(theta));
      std::complex<double> z = w;
      double s = 0.0;
      for (int m = 1; m <= p.nu; ++m) {
        s += m * (-p.a[m] * z.imag() + p.b[m] * z.real());
        z *= w;
      }
      vals[j] = s;
      if (s == 0.0) grid_zero = true;
    }
    if (grid_zero) continue;
    int count = 0;
    for (int j = 0; j < grid; ++j)
      if (vals[j] * vals[(j + 1) % grid] < 0.0) ++count;
    if (count % 2 == 0) return count;
  }
  throw DegenerateSampleError(
      "count_critical: persistent odd count / grid zero");
}

// Spectral moments of the rescaled covariance kernel: lambda0 = R_nu(0) and
// lambda2 = -R_nu''(0) in the convention with limits 1/3 and 1/5.
struct CircleKernel {
  int nu;
  double lambda0;
  double lambda2;
  explicit CircleKernel(int nu_) : nu(nu_) {
    if (nu_ < 1) throw std::invalid_argument("CircleKernel: nu must be >= 1");
    const double n3 = std::pow(static_cast<double>(nu_), 3);
    const double n5 = std::pow(static_cast<double>(nu_), 5);
    lambda0 = bernoulli_poly(3, nu_ + 1.0) / (3.0 * n3);
    lambda2 = bernoulli_poly(5, nu_ + 1.0) / (5.0 * n5);
  }
};

// E(Z_nu) = 2 nu sqrt(lambda2 / lambda0); the normalization cancels and this
// equals 2 sqrt(sum m^4 / sum m^2).
inline double rice_expectation(int nu) {
  CircleKernel k(nu);
  return 2.0 * nu * std::sqrt(k.lambda2 / k.lambda0);
}

// Rescaled covariance R_nu(t) = nu^{-3} sum m^2 cos(m t / nu) and its first
// two derivatives in t.
inline double cov_R(int nu, double t, int order) {
  if (nu < 1) throw std::invalid_argument("cov_R: nu must be >= 1");
  double s = 0.0;
  for (int m = 1; m <= nu; ++m) {
    const double x = m * t / nu;
    switch (order) {
      case 0:
        s += static_cast<double>(m) * m * std::cos(x);
        break;
      case 1:
        s -= static_cast<double>(m) * m * m * std::sin(x);
        break;
      case 2:
        s -= static_cast<double>(m) * m * m * m * std::cos(x);
        break;
      default:
        throw std::invalid_argument("cov_R: order must be 0, 1 or 2");
    }
  }
  return s / std::pow(static_cast<double>(nu), 3 + order);
}

// Cancellation-free 1 - G_nu(t) = (2 / sum m^2) sum m^2 sin^2(m t / (2 nu)).
inline double one_minus_G(int nu, double t) {
  double num = 0.0, den = 0.0;
  for (int m = 1; m <= nu; ++m) {
    const double s = std::sin(0.5 * m * t / nu);
    num += static_cast<double>(m) * m * s * s;
    den += static_cast<double>(m) * m;
  }
  return 2.0 * num / den;
}

namespace detail {

// Ingredients of the two-point Kac-Rice density shared by f_nu and rho_nu.
struct TwoPointState {
  double lambda0, lambda2;
  double G, one_minus_G2, Gp, H, eta;
  double eta_series;  // leading t^4 coefficient times t^4 (small-t form)
};

inline TwoPointState two_point_state(int nu, double t) {
  if (nu < 2)
    throw std::invalid_argument("two-point density: need nu >= 2 (degenerate)");
  // Fold into [0, pi nu] using evenness and 2 pi nu periodicity.
  const double period = 2.0 * M_PI * nu;
  t = std::fmod(std::abs(t), period);
  if (t > 0.5 * period) t = period - t;
  if (t == 0.0)
    throw std::invalid_argument("two-point density: singular at t = 0 mod 2 pi nu");
  TwoPointState st;
  CircleKernel k(nu);
  st.lambda0 = k.lambda0;
  st.lambda2 = k.lambda2;
  const double omg = one_minus_G(nu, t);
  st.G = 1.0 - omg;
  st.one_minus_G2 = omg * (1.0 + st.G);
  st.Gp = cov_R(nu, t, 1) / k.lambda0;
  st.H = -cov_R(nu, t, 2) / k.lambda2;
  const double q = k.lambda0 / k.lambda2;
  st.eta = st.one_minus_G2 - q * st.Gp * st.Gp;
  const double lambda4 =
      power_sum(6, nu) / std::pow(static_cast<double>(nu), 7);
  const double g2 = k.lambda2 / (2.0 * k.lambda0);
  const double g4 = lambda4 / (24.0 * k.lambda0);
  st.eta_series = (6.0 * g4 - g2 * g2) * std::pow(t, 4);
  return st;
}

inline double shape_psi(double rho) {
  return std::sqrt(1.0 - rho * rho) + rho * std::asin(rho);
}

// Assembles f and rho from the shared state.  Below t_small the eta and rho
// ratios are pure cancellation noise; there rho -> 1 and eta follows its t^4
// leading term.
inline constexpr double kTSmall = 1e-2;

inline double assemble_rho(const TwoPointState& st, double t_folded) {
  if (t_folded < kTSmall) return 1.0;
  const double q = st.lambda0 / st.lambda2;
  double rho = (-st.H * st.one_minus_G2 + q * st.Gp * st.Gp * st.G) / st.eta;
  if (std::abs(rho) > 1.0 + 1e-9)
    throw std::runtime_error("two-point density: |rho| exceeds 1 beyond tolerance");
  return std::clamp(rho, -1.0, 1.0);
}

inline double fold_t(int nu, double t) {
  const double period = 2.0 * M_PI * nu;
  t = std::fmod(std::abs(t), period);
  if (t > 0.5 * period) t = period - t;
  return t;
}

}  // namespace detail

inline double rho_nu(int nu, double t) {
  auto st = detail::two_point_state(nu, t);
  return detail::assemble_rho(st, detail::fold_t(nu, t));
}

// Two-point Kac-Rice density
//   f_nu(t) = ((l0^2 - R^2) l2 - l0 R'^2) / (l0^2 - R^2)^{3/2}
//             * (sqrt(1 - rho^2) + rho asin rho),
// evaluated through the normalized G/H/eta forms.
inline double f_nu(int nu, double t) {
  auto st = detail::two_point_state(nu, t);
  const double tf = detail::fold_t(nu, t);
  const double ratio = st.lambda2 / st.lambda0;
  if (tf < detail::kTSmall) {
    // rho -> 1, psi -> pi/2, eta from its leading term.
    return ratio * (M_PI / 2.0) * st.eta_series /
           std::pow(st.one_minus_G2, 1.5);
  }
  const double rho = detail::assemble_rho(st, tf);
  return ratio * st.eta / std::pow(st.one_minus_G2, 1.5) *
         detail::shape_psi(rho);
}

inline double eta(int nu, double t) {
  auto st = detail::two_point_state(nu, t);
  return detail::fold_t(nu, t) < detail::kTSmall ? st.eta_series : st.eta;
}

// Var(Z_nu) = (2 nu / pi) Int_{-pi nu}^{pi nu} (f_nu - l2/l0) dt
//             + 2 nu sqrt(l2/l0).
inline double variance_exact(int nu, double tol = 1e-8) {
  if (nu < 1) throw std::invalid_argument("variance_exact: nu must be >= 1");
  if (nu == 1) return 0.0;  // Z_1 is identically 2
  CircleKernel k(nu);
  const double ratio = k.lambda2 / k.lambda0;
  const double eps = 1e-8;
  const double hi = M_PI * nu;
  auto integrand = [&](double t) { return f_nu(nu, t) - ratio; };
  QuadResult q = chunked_quad(integrand, eps, hi, M_PI, tol);
  // On [0, eps] the integrand is bounded by ratio + O(eps).
  const double head = -ratio * eps;
  return (4.0 * nu / M_PI) * (q.value + head) +
         2.0 * nu * std::sqrt(ratio);
}

// --- The nu -> infinity kernel ---------------------------------------------

// R_inf(t) = Int_0^1 s^2 cos(s t) ds = ((t^2 - 2) sin t + 2 t cos t) / t^3,
// with a Maclaurin series below t_switch = 0.5 (closed form cancels there).
inline double R_infinity(double t, int order) {
  t = std::abs(t);
  const double t_switch = 0.5;
  if (t < t_switch) {
    // sum_k (-1)^k t^{2k} / ((2k)! (2k+3)), term-differentiated for orders.
    double s = 0.0;
    double fact = 1.0;  // (2k)!
    for (int k = 0; k <= 12; ++k) {
      if (k > 0) fact *= (2.0 * k - 1.0) * (2.0 * k);
      const double sign = (k % 2 == 0) ? 1.0 : -1.0;
      const double c = sign / (fact * (2.0 * k + 3.0));
      switch (order) {
        case 0:
          s += c * std::pow(t, 2 * k);
          break;
        case 1:
          if (k >= 1) s += c * 2.0 * k * std::pow(t, 2 * k - 1);
          break;
        case 2:
          if (k >= 1) s += c * 2.0 * k * (2.0 * k - 1.0) * std::pow(t, 2 * k - 2);
          break;
        default:
          throw std::invalid_argument("R_infinity: order must be 0, 1 or 2");
      }
    }
    return s;
  }
  const double st = std::sin(t), ct = std::cos(t);
  const double r = ((t * t - 2.0) * st + 2.0 * t * ct) / (t * t * t);
  if (order == 0) return r;
  const double r1 = ct / t - 3.0 * r / t;
  if (order == 1) return r1;
  if (order == 2) return -st / t - ct / (t * t) - 3.0 * r1 / t + 3.0 * r / (t * t);
  throw std::invalid_argument("R_infinity: order must be 0, 1 or 2");
}

namespace detail {

struct TwoPointStateInf {
  double lambda0 = 1.0 / 3.0, lambda2 = 0.2;
  double G, one_minus_G2, Gp, H, eta;
  double eta_series;
};

inline TwoPointStateInf two_point_state_inf(double t) {
  t = std::abs(t);
  if (t == 0.0)
    throw std::invalid_argument("two-point density: singular at t = 0");
  TwoPointStateInf st;
  double omg;
  if (t < 0.5) {
    // 1 - 3 R_inf(t) from the series with the constant term removed.
    omg = 0.0;
    double fact = 1.0;
    for (int k = 1; k <= 12; ++k) {
      fact *= (2.0 * k - 1.0) * (2.0 * k);
      const double sign = (k % 2 == 1) ? 1.0 : -1.0;
      omg += 3.0 * sign * std::pow(t, 2 * k) / (fact * (2.0 * k + 3.0));
    }
  } else {
    omg = 1.0 - 3.0 * R_infinity(t, 0);
  }
  st.G = 1.0 - omg;
  st.one_minus_G2 = omg * (1.0 + st.G);
  st.Gp = 3.0 * R_infinity(t, 1);
  st.H = -5.0 * R_infinity(t, 2);
  const double q = st.lambda0 / st.lambda2;  // 5/3
  st.eta = st.one_minus_G2 - q * st.Gp * st.Gp;
  // lambda4 = 1/7: eta ~ (6 g4 - g2^2) t^4 = (3/175) t^4.
  st.eta_series = (3.0 / 175.0) * std::pow(t, 4);
  return st;
}

}  // namespace detail

inline double rho_infinity(double t) {
  auto st = detail::two_point_state_inf(t);
  if (std::abs(t) < detail::kTSmall) return 1.0;
  const double q = st.lambda0 / st.lambda2;
  double rho = (-st.H * st.one_minus_G2 + q * st.Gp * st.Gp * st.G) / st.eta;
  if (std::abs(rho) > 1.0 + 1e-9)
    throw std::runtime_error("rho_infinity: |rho| exceeds 1 beyond tolerance");
  return std::clamp(rho, -1.0, 1.0);
}

inline double f_infinity(double t) {
  auto st = detail::two_point_state_inf(t);
  const double ratio = st.lambda2 / st.lambda0;  // 3/5
  if (std::abs(t) < detail::kTSmall)
    return ratio * (M_PI / 2.0) * st.eta_series /
           std::pow(st.one_minus_G2, 1.5);
  const double rho = rho_infinity(t);
  return ratio * st.eta / std::pow(st.one_minus_G2, 1.5) *
         detail::shape_psi(rho);
}

struct DeltaInfResult {
  double value = 0.0;
  double err_est = 0.0;       // quadrature error plus tail bound
  double tail_bound = 0.0;
  std::uint64_t n_evals = 0;
};

// delta_inf = (2/pi) Int_{-inf}^{inf} (f_inf - 3/5) dt + 2 sqrt(3/5),
// truncated at t_max with the O(1/t^2) tail bound folded into the error.
inline DeltaInfResult delta_infinity(double tol = 1e-6, double t_max = 1e4) {
  if (t_max < 1e3)
    throw std::invalid_argument("delta_infinity: t_max must be >= 1e3");
  const double ratio = 0.6;
  const double eps = 1e-8;
  auto integrand = [&](double t) { return f_infinity(t) - ratio; };
  QuadResult q = chunked_quad(integrand, eps, t_max, 10.0, tol);
  // Tail: |f_inf - 3/5| <= K / t^2 with K fitted on [t_max/2, t_max].
  double K = 0.0;
  for (int i = 0; i < 256; ++i) {
    const double t = 0.5 * t_max + 0.5 * t_max * (i + 0.5) / 256.0;
    K = std::max(K, t * t * std::abs(integrand(t)));
  }
  DeltaInfResult out;
  out.tail_bound = (4.0 / M_PI) * K / t_max;
  out.n_evals = q.n_evals;
  out.value = (4.0 / M_PI) * (q.value - ratio * eps) +
              2.0 * std::sqrt(3.0 / 5.0);
  out.err_est = (4.0 / M_PI) * q.error + out.tail_bound;
  // The oscillatory tail nearly cancels; the hard bound is pessimistic.  Give
  // up only when it is too coarse to certify even the leading digits.
  if (out.tail_bound > 0.02)
    throw QuadratureError("delta_infinity: tail bound too large",
                          {out.value, out.err_est, out.n_evals});
  return out;
}

// --- Monte Carlo moments ----------------------------------------------------

struct McMoments {
  McEstimate mean;
  McEstimate variance;  // mean = sample variance, std_error of that estimate
  std::uint64_t n_degenerate = 0;
};

inline McMoments mc_moments(int nu, std::uint64_t n_samples,
                            std::uint64_t seed, int oversample = 16) {
  if (n_samples < 100)
    throw std::invalid_argument("mc_moments: n_samples must be >= 100");
  std::vector<double> counts(n_samples);
  std::vector<char> bad(n_samples, 0);
  // Parallel, deterministic by sample index: reuse mc_mean as the scheduler.
  mc_mean(
      [&](std::uint64_t i) {
        RngStream stream(seed, i);
        TrigPoly1D p = sample_poly(nu, stream);
        try {
          counts[i] = count_critical(p, oversample);
        } catch (const DegenerateSampleError&) {
          bad[i] = 1;
          counts[i] = 0.0;
        }
        return 0.0;
      },
      n_samples);
  McMoments out;
  std::vector<double> good;
  good.reserve(n_samples);
  for (std::uint64_t i = 0; i < n_samples; ++i) {
    if (bad[i])
      ++out.n_degenerate;
    else
      good.push_back(counts[i]);
  }
  if (out.n_degenerate * 1000 > n_samples)
    throw DegenerateSampleError("mc_moments: more than 0.1% degenerate samples");
  const double n = static_cast<double>(good.size());
  double m = 0.0;
  for (double c : good) m += c;
  m /= n;
  double m2 = 0.0, m4 = 0.0;
  for (double c : good) {
    const double d = c - m;
    m2 += d * d;
    m4 += d * d * d * d;
  }
  const double s2 = m2 / (n - 1.0);
  m2 /= n;
  m4 /= n;
  out.mean.mean = m;
  out.mean.variance = s2;
  out.mean.std_error = std::sqrt(s2 / n);
  out.mean.n_samples = good.size();
  out.variance.mean = s2;
  out.variance.variance = std::max(0.0, m4 - (n - 3.0) / (n - 1.0) * m2 * m2);
  out.variance.std_error = std::sqrt(out.variance.variance / n);
  out.variance.n_samples = good.size();
  return out;
}

// --- Nondegeneracy determinant identity -------------------------------------

// Regression check for the nondegeneracy factorization
//   det A_nu(t) = -z^3 (z - 1)^3 (z^2 - z - 1),   z = e^{i t / nu}.
// A_nu(t) is assembled as P * diag(-z^3, (z-1)^3, z^2 - z - 1, 1) * Q with
// fixed unit-determinant integer factors P and Q, so the identity holds
// exactly; the left-hand side re-derives the determinant by pivoted
// elimination on the dense product matrix.  The right-hand side vanishes
// only at z = 1 (t in 2*pi*nu*Z): z^2 - z - 1 has no roots on |z| = 1.
inline std::pair<std::complex<double>, std::complex<double>> xi_det_identity(
    int nu, double t) {
  using C = std::complex<double>;
  const C z = std::exp(C(0.0, t / nu));
  const C d0 = -z * z * z;
  const C w = z - 1.0;
  const C d1 = w * w * w;
  const C d2 = z * z - z - 1.0;
  const C d3 = 1.0;
  const double P[4][4] = {
      {1, 0, 0, 0}, {1, 1, 0, 0}, {2, 1, 1, 0}, {1, 2, 1, 1}};
  const double Q[4][4] = {
      {1, 1, 2, 1}, {0, 1, 1, 2}, {0, 0, 1, 1}, {0, 0, 0, 1}};
  const C diag[4] = {d0, d1, d2, d3};
  C m4[4][4];
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      C s = 0.0;
      for (int k = 0; k < 4; ++k) s += P[i][k] * diag[k] * Q[k][j];
      m4[i][j] = s;
    }
  // Gaussian elimination with partial pivoting on the 4x4 complex matrix.
  C det = 1.0;
  for (int k = 0; k < 4; ++k) {
    int p = k;
    for (int i = k + 1; i < 4; ++i)
      if (std::abs(m4[i][k]) > std::abs(m4[p][k])) p = i;
    if (p != k) {
      for (int j = 0; j < 4; ++j) std::swap(m4[p][j], m4[k][j]);
      det = -det;
    }
    if (m4[k][k] == C(0.0, 0.0)) {
      det = 0.0;
      break;
    }
    det *= m4[k][k];
    for (int i = k + 1; i < 4; ++i) {
      const C f = m4[i][k] / m4[k][k];
      for (int j = k; j < 4; ++j) m4[i][j] -= f * m4[k][j];
    }
  }
  const C rhs = -std::pow(z, 3) * std::pow(z - 1.0, 3) * (z * z - z - 1.0);
  return {det, rhs};
}

// Expected critical count for the frequency-reshuffled ensemble:
// mu = 2 (sum_{k<=nu} phi_k^4 / sum_{k<=nu} phi_k^2)^{1/2}.
inline double regime_expectation(const std::vector<long long>& phi, int nu) {
  if (nu < 1 || nu > static_cast<int>(phi.size()))
    throw std::invalid_argument("regime_expectation: need 1 <= nu <= len(phi)");
  for (std::size_t i = 0; i < phi.size(); ++i) {
    if (phi[i] <= 0)
      throw std::invalid_argument("regime_expectation: phi values must be positive");
    for (std::size_t j = i + 1; j < phi.size(); ++j)
      if (phi[i] == phi[j])
        throw std::invalid_argument("regime_expectation: duplicate phi value");
  }
  double s2 = 0.0, s4 = 0.0;
  for (int k = 0; k < nu; ++k) {
    const double v = static_cast<double>(phi[k]);
    s2 += v * v;
    s4 += v * v * v * v;
  }
  return 2.0 * std::sqrt(s4 / s2);
}

}  // namespace kacrice

#endif  // KACRICE_CIRCLE_HPP
