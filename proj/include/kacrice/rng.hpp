#ifndef KACRICE_RNG_HPP
#define KACRICE_RNG_HPP

#include <cmath>
#include <cstdint>
#include <vector>

namespace kacrice {

// Counter-based random stream.  Every draw is a pure function of
// (seed, stream_id, draw index), so parallel and serial consumers see
// identical values and distinct stream_ids give independent substreams.
class RngStream {
public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id)
      : base_(derive_base(seed, stream_id)), counter_(0) {}

  std::uint64_t seed_base() const { return base_; }

  // Next raw 64-bit word (SplitMix64 output function in counter mode).
  std::uint64_t next_u64() { return finalize(base_ + (counter_++) * kGolden); }

  // Uniform draw in the open interval (0, 1).
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53 + 0x1.0p-54;
  }

  // Standard normal via the inverse CDF (Acklam's rational approximation,
  // relative error below 1.2e-9).  One uniform per draw keeps the counter
  // contract trivial.
  double normal() { return normal_icdf(uniform()); }

  std::vector<double> normal_draw(std::size_t k) {
    std::vector<double> out(k);
    for (auto& x : out) x = normal();
    return out;
  }

  static double normal_icdf(double p);

private:
  static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

  static std::uint64_t finalize(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  static std::uint64_t derive_base(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t s = finalize(seed + kGolden);
    return finalize(s ^ (stream * 0xD1342543DE82EF95ull + kGolden));
  }

  std::uint64_t base_;
  std::uint64_t counter_;
};

inline double RngStream::normal_icdf(double p) {
  // Acklam's inverse normal CDF approximation.
  static const double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                              -2.759285104469687e+02, 1.383577518672690e+02,
                              -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                              -1.556989798598866e+02, 6.680131188771972e+01,
                              -1.328068155288572e+01};
  static const double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                              -2.400758277161838e+00, -2.549732539343734e+00,
                              4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                              2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  double q, r, x;
  if (p < plow) {
    q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - plow) {
    q = p - 0.5;
    r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
        q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
          c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  // One Halley step against the exact CDF tightens the tails.
  const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
  const double u = e * std::sqrt(2.0 * M_PI) * std::exp(x * x / 2.0);
  return x - u / (1.0 + x * u / 2.0);
}

}  // namespace kacrice

#endif  // KACRICE_RNG_HPP
