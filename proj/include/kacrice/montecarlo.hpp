#ifndef KACRICE_MONTECARLO_HPP
#define KACRICE_MONTECARLO_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <thread>
#include <vector>

namespace kacrice {

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;  // standard error of the mean
  double variance = 0.0;   // sample variance of the draws
  std::uint64_t n_samples = 0;
  double ci95_halfwidth() const { return 1.96 * std_error; }
};

namespace detail {

struct KahanSum {
  double s = 0.0, c = 0.0;
  void add(double x) {
    double y = x - c;
    double t = s + y;
    c = (t - s) - y;
    s = t;
  }
  double value() const { return s; }
};

}  // namespace detail

// Mean / standard error of f(0..n-1).  Work is split into fixed-size blocks;
// block partial sums are combined in block order with compensated addition, so
// the result is bitwise identical for any worker count (including 1).
inline McEstimate mc_mean(const std::function<double(std::uint64_t)>& f,
                          std::uint64_t n, unsigned n_threads = 0) {
  if (n == 0) throw std::invalid_argument("mc_mean: n must be positive");
  constexpr std::uint64_t kBlock = 4096;
  const std::uint64_t n_blocks = (n + kBlock - 1) / kBlock;
  std::vector<double> block_sum(n_blocks), block_sum_sq(n_blocks);

  auto run_block = [&](std::uint64_t b) {
    detail::KahanSum s, s2;
    const std::uint64_t lo = b * kBlock;
    const std::uint64_t hi = std::min(n, lo + kBlock);
    for (std::uint64_t i = lo; i < hi; ++i) {
      const double x = f(i);
      s.add(x);
      s2.add(x * x);
    }
    block_sum[b] = s.value();
    block_sum_sq[b] = s2.value();
  };

  if (n_threads == 0) n_threads = std::thread::hardware_concurrency();
  if (n_threads <= 1 || n_blocks == 1) {
    for (std::uint64_t b = 0; b < n_blocks; ++b) run_block(b);
  } else {
    std::vector<std::thread> pool;
    std::uint64_t per = (n_blocks + n_threads - 1) / n_threads;
    for (unsigned t = 0; t < n_threads; ++t) {
      std::uint64_t lo = t * per, hi = std::min<std::uint64_t>(n_blocks, lo + per);
      if (lo >= hi) break;
      pool.emplace_back([&, lo, hi] {
        for (std::uint64_t b = lo; b < hi; ++b) run_block(b);
      });
    }
    for (auto& th : pool) th.join();
  }

  detail::KahanSum s, s2;
  for (std::uint64_t b = 0; b < n_blocks; ++b) {
    s.add(block_sum[b]);
    s2.add(block_sum_sq[b]);
  }
  McEstimate est;
  est.n_samples = n;
  est.mean = s.value() / static_cast<double>(n);
  if (n > 1) {
    double ss = s2.value() - static_cast<double>(n) * est.mean * est.mean;
    est.variance = std::max(0.0, ss / static_cast<double>(n - 1));
    est.std_error = std::sqrt(est.variance / static_cast<double>(n));
  }
  return est;
}

}  // namespace kacrice

#endif  // KACRICE_MONTECARLO_HPP
