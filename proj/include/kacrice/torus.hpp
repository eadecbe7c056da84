#ifndef KACRICE_TORUS_HPP
#define KACRICE_TORUS_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "kacrice/circle.hpp"
#include "kacrice/linalg.hpp"
#include "kacrice/montecarlo.hpp"
#include "kacrice/rng.hpp"
#include "kacrice/symgauss.hpp"

namespace kacrice {

// Symmetric set of frequency vectors in the lexicographically positive cone:
// the first nonzero coordinate of every vector is positive, and permuting
// coordinates maps each vector into the set up to a global sign.
struct MonomialSet {
  int L = 1;
  std::vector<std::vector<long long>> vectors;
};

namespace detail {

inline bool lex_positive(const std::vector<long long>& m) {
  for (long long v : m) {
    if (v > 0) return true;
    if (v < 0) return false;
  }
  return false;  // zero vector is excluded
}

inline std::vector<long long> negate(const std::vector<long long>& m) {
  std::vector<long long> r(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) r[i] = -m[i];
  return r;
}

}  // namespace detail

inline void validate_monomial_set(const MonomialSet& ms) {
  if (ms.L < 1) throw std::invalid_argument("MonomialSet: L must be >= 1");
  if (ms.vectors.empty())
    throw std::invalid_argument("MonomialSet: empty set");
  for (const auto& m : ms.vectors) {
    if (static_cast<int>(m.size()) != ms.L)
      throw std::invalid_argument("MonomialSet: vector of wrong dimension");
    if (!detail::lex_positive(m))
      throw std::invalid_argument(
          "MonomialSet: vector not lexicographically positive");
  }
  auto sorted = ms.vectors;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw std::invalid_argument("MonomialSet: duplicate vector");
  auto contains = [&](const std::vector<long long>& v) {
    return std::binary_search(sorted.begin(), sorted.end(), v);
  };
  std::vector<int> perm(ms.L);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    for (const auto& m : ms.vectors) {
      std::vector<long long> pm(ms.L);
      for (int i = 0; i < ms.L; ++i) pm[i] = m[perm[i]];
      if (!contains(pm) && !contains(detail::negate(pm))) {
        std::string s = "MonomialSet: symmetry violated by (";
        for (int i = 0; i < ms.L; ++i)
          s += std::to_string(m[i]) + (i + 1 < ms.L ? "," : ")");
        throw std::invalid_argument(s);
      }
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
}

struct TorusCovariance {
  int L = 1;
  double a = 0.0;  // (2/(2 pi)^L) sum m_j^2, identical for every j
  double b = 0.0;  // (2/(2 pi)^L) sum m_j m_k, identical for every j != k
  Matrix C;        // fourth moments in the sym_coord_pairs ordering
  bool condition_sharp = false;  // C nonsingular
};

inline TorusCovariance build_covariance(const MonomialSet& ms) {
  validate_monomial_set(ms);
  const int L = ms.L;
  const double norm = 2.0 / std::pow(2.0 * M_PI, L);
  TorusCovariance tc;
  tc.L = L;
  // Second moments; symmetry forces them equal across axes/pairs.
  std::vector<double> diag(L, 0.0);
  for (const auto& m : ms.vectors)
    for (int j = 0; j < L; ++j) diag[j] += static_cast<double>(m[j]) * m[j];
  for (int j = 1; j < L; ++j)
    if (diag[j] != diag[0])
      throw std::invalid_argument("build_covariance: asymmetric second moments");
  tc.a = norm * diag[0];
  if (L > 1) {
    double cross0 = 0.0;
    for (const auto& m : ms.vectors)
      cross0 += static_cast<double>(m[0]) * m[1];
    for (int j = 0; j < L; ++j)
      for (int k = 0; k < L; ++k) {
        if (j == k) continue;
        double c = 0.0;
        for (const auto& m : ms.vectors)
          c += static_cast<double>(m[j]) * m[k];
        if (c != cross0)
          throw std::invalid_argument(
              "build_covariance: asymmetric cross moments");
      }
    tc.b = norm * cross0;
  }
  const auto idx = sym_coord_pairs(L);
  const int D = static_cast<int>(idx.size());
  tc.C = Matrix(D);
  for (int p = 0; p < D; ++p)
    for (int q = p; q < D; ++q) {
      double s = 0.0;
      for (const auto& m : ms.vectors)
        s += static_cast<double>(m[idx[p].first]) * m[idx[p].second] *
             m[idx[q].first] * m[idx[q].second];
      tc.C(p, q) = norm * s;
      tc.C(q, p) = norm * s;
    }
  try {
    (void)cholesky(tc.C);
    tc.condition_sharp = true;
  } catch (const DecompositionError&) {
    tc.condition_sharp = false;
  }
  return tc;
}

// Delta_L(a,b) = det G_L(a,b) = (a-b)^{L-1} (a + (L-1) b).
inline double jacobian_delta(int L, double a, double b) {
  return std::pow(a - b, L - 1) * (a + (L - 1) * b);
}

// Block covariance G_L(a,b) (+) identity on the off-diagonal coordinates.
inline Matrix block_covariance(int L, double a, double b) {
  const int D = L * (L + 1) / 2;
  Matrix C(D);
  for (int i = 0; i < L; ++i)
    for (int j = 0; j < L; ++j) C(i, j) = (i == j) ? a : b;
  for (int k = L; k < D; ++k) C(k, k) = 1.0;
  return C;
}

// Expected number of critical points:
//   mu(M) = (2 pi)^{L/2} Delta_L(a,b)^{-1/2} E_{X ~ N(0,C)} |det X|.
inline McEstimate expectation(const MonomialSet& ms, std::uint64_t n_samples,
                              std::uint64_t seed) {
  TorusCovariance tc = build_covariance(ms);
  const double delta = jacobian_delta(tc.L, tc.a, tc.b);
  if (!(delta > 0.0))
    throw std::invalid_argument("expectation: sample space is not ample");
  if (!tc.condition_sharp)
    throw std::invalid_argument("expectation: covariance is rank deficient");
  const double pref = std::pow(2.0 * M_PI, 0.5 * tc.L) / std::sqrt(delta);
  McEstimate est = det_abs_expectation(tc.C, n_samples, seed);
  est.mean *= pref;
  est.std_error *= pref;
  est.variance *= pref * pref;
  return est;
}

// Deterministic L = 1 value: mu = 2 sqrt(c / a) with c the single fourth
// moment; reduces to the Kac-Rice circle expectation for M = {1..nu}.
inline double expectation_exact_1d(const MonomialSet& ms) {
  TorusCovariance tc = build_covariance(ms);
  if (tc.L != 1)
    throw std::invalid_argument("expectation_exact_1d: requires L = 1");
  return 2.0 * std::sqrt(tc.C(0, 0) / tc.a);
}

// Lexicographically positive half of the cube {|m_j| <= nu}.
inline MonomialSet cube_set(int L, int nu) {
  if (L < 1 || nu < 1) throw std::invalid_argument("cube_set: bad L or nu");
  MonomialSet ms;
  ms.L = L;
  std::vector<long long> m(L, -nu);
  for (;;) {
    if (detail::lex_positive(m)) ms.vectors.push_back(m);
    int j = L - 1;
    while (j >= 0 && m[j] == nu) m[j--] = -nu;
    if (j < 0) break;
    ++m[j];
  }
  std::sort(ms.vectors.begin(), ms.vectors.end());
  return ms;
}

// Reference limit constants for mu(cube set) / dim V:
// (pi/6)^{L^2/2} <|det X|> with <|det X|> taken from the one-dimensional
// reduction (iab for L = 2).  L = 1 and L = 2 use deterministic reductions
// (L = 1 collapses to sqrt(3/5) exactly, L = 2 to ~0.4717); larger L falls
// back to Monte Carlo with the same prefactor convention.
inline McEstimate cube_asymptotic_constant(int L, std::uint64_t n_samples = 0,
                                           std::uint64_t seed = 0) {
  if (L < 1) throw std::invalid_argument("cube_asymptotic_constant: L >= 1");
  McEstimate est;
  if (L == 1) {
    // (pi/6)^{1/2} * sqrt(2 * (9/5) / pi) = sqrt(3/5) exactly.
    est.mean = std::sqrt(3.0 / 5.0);
    est.n_samples = 1;
    return est;
  }
  if (L == 2) {
    auto g = [](double theta) {
      const double c = 9.0 / 5.0 - std::cos(2.0 * theta);
      return 2.0 * std::pow(c, 1.5) / std::sqrt(c + 2.0);
    };
    QuadResult q = adaptive_quad(g, 0.0, 2.0 * M_PI, 1e-12, 1e-12);
    const double det_mean = q.value / (2.0 * M_PI) - 9.0 / 5.0 + 1.0;
    est.mean = (M_PI / 6.0) * (M_PI / 6.0) * det_mean;
    est.n_samples = 1;
    return est;
  }
  if (n_samples == 0)
    throw std::invalid_argument(
        "cube_asymptotic_constant: n_samples required for L >= 3");
  est = det_abs_expectation(block_covariance(L, 9.0 / 5.0, 1.0), n_samples, seed);
  const double pref = std::pow(M_PI / 6.0, 0.5 * L * L);
  est.mean *= pref;
  est.std_error *= pref;
  est.variance *= pref * pref;
  return est;
}

// --- Brute-force verification on T^2 ----------------------------------------

struct T2CountResult {
  McEstimate counts;
  std::uint64_t n_discarded = 0;  // samples failing the Euler check
};

namespace detail {

struct T2Sample {
  const MonomialSet* ms;
  std::vector<double> ca, cb;  // coefficients per monomial

  void grad_hess(double t0, double t1, double g[2], double h[3]) const {
    g[0] = g[1] = h[0] = h[1] = h[2] = 0.0;
    for (std::size_t k = 0; k < ms->vectors.size(); ++k) {
      const auto& m = ms->vectors[k];
      const double phase = m[0] * t0 + m[1] * t1;
      const double c = std::cos(phase), s = std::sin(phase);
      const double d = -ca[k] * s + cb[k] * c;   // derivative factor
      const double dd = -(ca[k] * c + cb[k] * s);  // second-derivative factor
      g[0] += m[0] * d;
      g[1] += m[1] * d;
      h[0] += static_cast<double>(m[0]) * m[0] * dd;
      h[1] += static_cast<double>(m[0]) * m[1] * dd;
      h[2] += static_cast<double>(m[1]) * m[1] * dd;
    }
  }
};

inline double wrap_2pi(double x) {
  x = std::fmod(x, 2.0 * M_PI);
  return x < 0.0 ? x + 2.0 * M_PI : x;
}

inline double torus_dist(double a0, double a1, double b0, double b1) {
  auto d1 = [](double u, double v) {
    double d = std::abs(u - v);
    return std::min(d, 2.0 * M_PI - d);
  };
  return std::hypot(d1(a0, b0), d1(a1, b1));
}

// Newton search for all critical points of one sample; returns the signed
// Hessian indices, or an empty list when the Euler-characteristic check fails.
inline bool t2_critical_points(const T2Sample& smp, int grid,
                               std::vector<std::array<double, 3>>& found) {
  found.clear();
  for (int gi = 0; gi < grid; ++gi) {
    for (int gj = 0; gj < grid; ++gj) {
      double t0 = 2.0 * M_PI * (gi + 0.5) / grid;
      double t1 = 2.0 * M_PI * (gj + 0.5) / grid;
      double g[2], h[3];
      smp.grad_hess(t0, t1, g, h);
      double gn = std::hypot(g[0], g[1]);
      bool converged = false;
      for (int it = 0; it < 50; ++it) {
        const double det = h[0] * h[2] - h[1] * h[1];
        if (det == 0.0) break;
        double s0 = -(h[2] * g[0] - h[1] * g[1]) / det;
        double s1 = -(-h[1] * g[0] + h[0] * g[1]) / det;
        double damp = 1.0;
        double n0 = t0, n1 = t1, ngn = gn;
        for (int half = 0; half < 8; ++half) {
          n0 = wrap_2pi(t0 + damp * s0);
          n1 = wrap_2pi(t1 + damp * s1);
          double ng[2], nh[3];
          smp.grad_hess(n0, n1, ng, nh);
          ngn = std::hypot(ng[0], ng[1]);
          if (ngn <= gn || gn < 1e-12) {
            g[0] = ng[0];
            g[1] = ng[1];
            h[0] = nh[0];
            h[1] = nh[1];
            h[2] = nh[2];
            break;
          }
          damp *= 0.5;
        }
        t0 = n0;
        t1 = n1;
        if (ngn >= gn && gn > 1e-12) break;  // damping failed to improve
        gn = ngn;
        if (gn < 1e-12) {
          converged = true;
          break;
        }
      }
      if (!converged || gn > 1e-10) continue;
      const double det = h[0] * h[2] - h[1] * h[1];
      if (std::abs(det) < 1e-8) continue;  // degenerate critical point
      bool dup = false;
      for (const auto& f : found)
        if (torus_dist(f[0], f[1], t0, t1) < 1e-6) {
          dup = true;
          break;
        }
      if (!dup) found.push_back({t0, t1, det});
    }
  }
  long long euler = 0;
  for (const auto& f : found) euler += (f[2] > 0.0) ? 1 : -1;
  return euler == 0;
}

}  // namespace detail

inline T2CountResult mc_count_critical_t2(const MonomialSet& ms,
                                          std::uint64_t n_samples, int grid,
                                          std::uint64_t seed) {
  validate_monomial_set(ms);
  if (ms.L != 2)
    throw std::invalid_argument("mc_count_critical_t2: requires L = 2");
  if (grid < 64)
    throw std::invalid_argument("mc_count_critical_t2: grid must be >= 64");
  std::vector<double> counts(n_samples);
  std::vector<char> bad(n_samples, 0);
  mc_mean(
      [&](std::uint64_t i) {
        RngStream stream(seed, i);
        detail::T2Sample smp;
        smp.ms = &ms;
        smp.ca.resize(ms.vectors.size());
        smp.cb.resize(ms.vectors.size());
        for (std::size_t k = 0; k < ms.vectors.size(); ++k) {
          smp.ca[k] = stream.normal();
          smp.cb[k] = stream.normal();
        }
        std::vector<std::array<double, 3>> found;
        if (detail::t2_critical_points(smp, grid, found))
          counts[i] = static_cast<double>(found.size());
        else
          bad[i] = 1;
        return 0.0;
      },
      n_samples);
  T2CountResult out;
  std::vector<double> good;
  good.reserve(n_samples);
  for (std::uint64_t i = 0; i < n_samples; ++i) {
    if (bad[i])
      ++out.n_discarded;
    else
      good.push_back(counts[i]);
  }
  if (out.n_discarded * 100 > n_samples)
    throw std::runtime_error(
        "mc_count_critical_t2: more than 1% of samples failed the Euler check");
  const double n = static_cast<double>(good.size());
  double m = 0.0;
  for (double c : good) m += c;
  m /= n;
  double ss = 0.0;
  for (double c : good) ss += (c - m) * (c - m);
  out.counts.mean = m;
  out.counts.variance = good.size() > 1 ? ss / (n - 1.0) : 0.0;
  out.counts.std_error = std::sqrt(out.counts.variance / n);
  out.counts.n_samples = good.size();
  return out;
}

}  // namespace kacrice

#endif  // KACRICE_TORUS_HPP
