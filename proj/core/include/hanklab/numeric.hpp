#pragma once

#include <cmath>
#include <cstdint>
#include <span>

namespace hanklab {

/// Neumaier-compensated accumulator. Summation order is the call order, so
/// results are reproducible bit-for-bit for a fixed sequence of additions.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) {
      compensation_ += (sum_ - t) + x;
    } else {
      compensation_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  CompensatedSum& operator+=(double x) noexcept {
    add(x);
    return *this;
  }
  [[nodiscard]] double value() const noexcept { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

inline double compensated_sum(std::span<const double> xs) noexcept {
  CompensatedSum acc;
  for (double x : xs) acc.add(x);
  return acc.value();
}

/// x^k for integer k >= 0 by repeated squaring.
inline double int_pow(double x, int k) noexcept {
  double result = 1.0;
  while (k > 0) {
    if (k & 1) result *= x;
    x *= x;
    k >>= 1;
  }
  return result;
}

/// E[Z^k] for a standard normal Z: (k-1)!! for even k, zero for odd k.
inline double gaussian_moment(int k) noexcept {
  if (k < 0 || (k & 1)) return 0.0;
  double result = 1.0;
  for (int j = k - 1; j > 1; j -= 2) result *= j;
  return result;
}

/// k! as a double; exact for k <= 22.
inline double factorial(int k) noexcept {
  double result = 1.0;
  for (int j = 2; j <= k; ++j) result *= j;
  return result;
}

inline double binomial(int n, int k) noexcept {
  if (k < 0 || k > n) return 0.0;
  if (k > n - k) k = n - k;
  double result = 1.0;
  for (int j = 1; j <= k; ++j) result = result * (n - k + j) / j;
  return result;
}

}  // namespace hanklab
