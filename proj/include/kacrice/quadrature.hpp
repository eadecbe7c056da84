#ifndef KACRICE_QUADRATURE_HPP
#define KACRICE_QUADRATURE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

namespace kacrice {

struct QuadResult {
  double value = 0.0;
  double error = 0.0;       // accumulated error estimate
  std::uint64_t n_evals = 0;
};

class QuadratureError : public std::runtime_error {
public:
  QuadratureError(const std::string& what, QuadResult best)
      : std::runtime_error(what), best_estimate(best) {}
  QuadResult best_estimate;
};

namespace detail {

// 15-point Kronrod nodes/weights with the embedded 7-point Gauss rule.
inline constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.0};
inline constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
inline constexpr double kWg[4] = {0.129484966168870, 0.279705391489277,
                                  0.381830050505119, 0.417959183673469};

struct GkPanel {
  double a, b, value, err;
};

inline GkPanel gk15(const std::function<double(double)>& f, double a,
                    double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double resg = fc * kWg[3];
  double resk = fc * kWgk[7];
  double resabs = std::abs(fc) * kWgk[7];
  double fv[15];
  fv[7] = fc;
  for (int j = 0; j < 7; ++j) {
    const double x = h * kXgk[j];
    const double f1 = f(c - x);
    const double f2 = f(c + x);
    fv[j] = f1;
    fv[14 - j] = f2;
    resk += kWgk[j] * (f1 + f2);
    resabs += kWgk[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
  }
  const double mean = 0.5 * resk;
  double resasc = kWgk[7] * std::abs(fc - mean);
  for (int j = 0; j < 7; ++j)
    resasc += kWgk[j] *
              (std::abs(fv[j] - mean) + std::abs(fv[14 - j] - mean));
  resasc *= std::abs(h);
  resabs *= std::abs(h);
  double err = std::abs((resk - resg) * h);
  if (resasc != 0.0 && err != 0.0)
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  const double round = 50.0 * std::numeric_limits<double>::epsilon() * resabs;
  err = std::max(err, round);
  return {a, b, resk * h, err};
}

}  // namespace detail

// Adaptive Gauss-Kronrod integration of f over [a, b]: repeatedly bisects the
// panel with the largest error estimate until the accumulated estimate meets
// max(abs_tol, rel_tol * |value|), or the evaluation budget is exhausted.
inline QuadResult adaptive_quad(const std::function<double(double)>& f,
                                double a, double b, double abs_tol = 1e-10,
                                double rel_tol = 1e-10,
                                std::uint64_t max_evals = 1000000) {
  if (!(a < b)) throw std::invalid_argument("adaptive_quad: need a < b");
  auto cmp = [](const detail::GkPanel& p, const detail::GkPanel& q) {
    return p.err < q.err;
  };
  std::priority_queue<detail::GkPanel, std::vector<detail::GkPanel>,
                      decltype(cmp)>
      heap(cmp);
  QuadResult res;
  auto push = [&](double lo, double hi) {
    heap.push(detail::gk15(f, lo, hi));
    res.n_evals += 15;
  };
  push(a, b);
  double total = heap.top().value, total_err = heap.top().err;
  std::uint64_t since_resum = 0;
  while (total_err > std::max(abs_tol, rel_tol * std::abs(total))) {
    if (res.n_evals + 30 > max_evals) {
      res.value = total;
      res.error = total_err;
      throw QuadratureError("adaptive_quad: evaluation budget exhausted", res);
    }
    detail::GkPanel worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {
      // Interval no longer splittable in double precision; accept as is.
      break;
    }
    heap.pop();
    detail::GkPanel left = detail::gk15(f, worst.a, mid);
    detail::GkPanel right = detail::gk15(f, mid, worst.b);
    res.n_evals += 30;
    total += left.value + right.value - worst.value;
    total_err += left.err + right.err - worst.err;
    heap.push(left);
    heap.push(right);
    // The incremental estimates drift through cancellation; refresh them
    // from the panel list every so often.
    if (++since_resum >= 512) {
      since_resum = 0;
      std::vector<detail::GkPanel> panels;
      panels.reserve(heap.size());
      while (!heap.empty()) {
        panels.push_back(heap.top());
        heap.pop();
      }
      total = 0.0;
      total_err = 0.0;
      for (const auto& p : panels) {
        total += p.value;
        total_err += p.err;
        heap.push(p);
      }
    }
  }
  {
    // Final clean accumulation over all panels.
    total = 0.0;
    total_err = 0.0;
    while (!heap.empty()) {
      total += heap.top().value;
      total_err += heap.top().err;
      heap.pop();
    }
  }
  res.value = total;
  res.error = total_err;
  return res;
}

// Integrates f over [a, b] in fixed-width chunks, each with a proportional
// share of the tolerance.  Suited to long oscillatory ranges where a single
// global heap would waste the budget.
inline QuadResult chunked_quad(const std::function<double(double)>& f,
                               double a, double b, double chunk,
                               double abs_tol = 1e-9,
                               std::uint64_t max_evals = 1000000) {
  const std::uint64_t n_chunks =
      std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil((b - a) / chunk)));
  QuadResult total;
  const double tol = abs_tol / static_cast<double>(n_chunks);
  for (std::uint64_t k = 0; k < n_chunks; ++k) {
    const double lo = a + (b - a) * static_cast<double>(k) / n_chunks;
    const double hi = a + (b - a) * static_cast<double>(k + 1) / n_chunks;
    QuadResult r = adaptive_quad(f, lo, hi, tol, 0.0,
                                 max_evals - total.n_evals);
    total.value += r.value;
    total.error += r.error;
    total.n_evals += r.n_evals;
  }
  return total;
}

}  // namespace kacrice

#endif  // KACRICE_QUADRATURE_HPP
