#ifndef KACRICE_LINALG_HPP
#define KACRICE_LINALG_HPP

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace kacrice {

class DecompositionError : public std::runtime_error {
public:
  DecompositionError(const std::string& what, std::size_t pivot)
      : std::runtime_error(what + " at pivot " + std::to_string(pivot)),
        pivot_index(pivot) {}
  std::size_t pivot_index;
};

// Dense square matrix, row-major.  Sized for the small systems that appear
// here (Hessians and covariance blocks), not for large-scale work.
struct Matrix {
  std::size_t n = 0;
  std::vector<double> a;

  Matrix() = default;
  explicit Matrix(std::size_t n_) : n(n_), a(n_ * n_, 0.0) {}
  double& operator()(std::size_t i, std::size_t j) { return a[i * n + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a[i * n + j]; }

  static Matrix identity(std::size_t n_) {
    Matrix m(n_);
    for (std::size_t i = 0; i < n_; ++i) m(i, i) = 1.0;
    return m;
  }
};

// Lower-triangular Cholesky factor of a symmetric positive-definite matrix.
// Throws DecompositionError (naming the failing pivot) if a pivot is not
// strictly positive.
inline Matrix cholesky(const Matrix& m) {
  const std::size_t n = m.n;
  Matrix l(n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = m(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > 0.0))
      throw DecompositionError("cholesky: matrix not positive definite", j);
    l(j, j) = std::sqrt(d);
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = m(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / l(j, j);
    }
  }
  return l;
}

// Determinant via LU with partial pivoting.  Singular input returns 0.
inline double det_lu(Matrix m) {
  const std::size_t n = m.n;
  double det = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(m(i, k)) > std::abs(m(p, k))) p = i;
    if (m(p, k) == 0.0) return 0.0;
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(p, j), m(k, j));
      det = -det;
    }
    det *= m(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = m(i, k) / m(k, k);
      for (std::size_t j = k + 1; j < n; ++j) m(i, j) -= f * m(k, j);
    }
  }
  return det;
}

// y = L z for a lower-triangular L (maps iid standard normals to N(0, LL^T)).
inline std::vector<double> lower_apply(const Matrix& l,
                                       const std::vector<double>& z) {
  if (z.size() != l.n) throw std::invalid_argument("lower_apply: size mismatch");
  std::vector<double> y(l.n, 0.0);
  for (std::size_t i = 0; i < l.n; ++i)
    for (std::size_t j = 0; j <= i; ++j) y[i] += l(i, j) * z[j];
  return y;
}

}  // namespace kacrice

#endif  // KACRICE_LINALG_HPP
