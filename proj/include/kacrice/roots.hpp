#ifndef KACRICE_ROOTS_HPP
#define KACRICE_ROOTS_HPP

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace kacrice {

// All simple roots of h on [a, b): samples a uniform grid, brackets sign
// changes, and bisects each bracket to width <= tol (at most 80 halvings).
// Roots landing exactly on grid points are recorded directly.
inline std::vector<double> bracketed_roots(
    const std::function<double(double)>& h, double a, double b,
    std::size_t n_grid, double tol = 1e-12) {
  if (!(a < b)) throw std::invalid_argument("bracketed_roots: need a < b");
  if (n_grid < 2) throw std::invalid_argument("bracketed_roots: grid too small");
  std::vector<double> roots;
  const double dx = (b - a) / static_cast<double>(n_grid);
  double x0 = a, h0 = h(a);
  for (std::size_t k = 1; k <= n_grid; ++k) {
    const double x1 = a + dx * static_cast<double>(k);
    const double h1 = h(x1);
    if (h0 == 0.0) {
      roots.push_back(x0);
    } else if (h0 * h1 < 0.0) {
      double lo = x0, hi = x1, flo = h0;
      for (int it = 0; it < 80 && hi - lo > tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = h(mid);
        if (fm == 0.0) {
          lo = hi = mid;
          break;
        }
        if (flo * fm < 0.0) {
          hi = mid;
        } else {
          lo = mid;
          flo = fm;
        }
      }
      roots.push_back(0.5 * (lo + hi));
    }
    x0 = x1;
    h0 = h1;
  }
  return roots;
}

}  // namespace kacrice

#endif  // KACRICE_ROOTS_HPP
