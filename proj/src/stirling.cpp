#include "scntm/stirling.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace scntm {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// log(exp(a) + exp(b)) without leaving log space.
double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  if (a < b) std::swap(a, b);
  return a + std::log1p(std::exp(b - a));
}
}  // namespace

double log_pochhammer(double x, std::int64_t n) {
  if (x <= 0.0) throw std::invalid_argument("log_pochhammer: x must be > 0");
  if (n < 0) throw std::invalid_argument("log_pochhammer: n must be >= 0");
  if (n == 0) return 0.0;
  return std::lgamma(x + static_cast<double>(n)) - std::lgamma(x);
}

double log_pochhammer_stride(double x, double y, std::int64_t n) {
  if (x <= 0.0 || y < 0.0)
    throw std::invalid_argument("log_pochhammer_stride: need x > 0, y >= 0");
  if (n < 0) throw std::invalid_argument("log_pochhammer_stride: n >= 0");
  if (n == 0) return 0.0;
  if (y == 0.0) return static_cast<double>(n) * std::log(x);
  return static_cast<double>(n) * std::log(y) +
         std::lgamma(x / y + static_cast<double>(n)) - std::lgamma(x / y);
}

double log_binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return kNegInf;
  return std::lgamma(static_cast<double>(n) + 1.0) -
         std::lgamma(static_cast<double>(k) + 1.0) -
         std::lgamma(static_cast<double>(n - k) + 1.0);
}

StirlingCache::StirlingCache(double discount, int initial_capacity)
    : discount_(discount) {
  if (discount < 0.0 || discount >= 1.0)
    throw std::invalid_argument("StirlingCache: discount must be in [0, 1)");
  grow(initial_capacity);
}

double StirlingCache::log_stirling(int n, int m) {
  if (n < 0 || m < 0) throw std::invalid_argument("log_stirling: negative arg");
  if (m > n) return kNegInf;
  if (n == 0) return 0.0;  // S^0_0 = 1
  if (m == 0) return kNegInf;
  if (n > capacity_) grow(n);
  return table_[row_offset(n) + (m - 1)];
}

double StirlingCache::ratio_same(int n, int m) {
  return std::exp(log_stirling(n + 1, m) - log_stirling(n, m));
}

double StirlingCache::ratio_grow(int n, int m) {
  return std::exp(log_stirling(n + 1, m + 1) - log_stirling(n, m));
}

void StirlingCache::ensure(int n) {
  if (n > capacity_) grow(n);
}

void StirlingCache::grow(int need) {
  constexpr int kHardCap = 200000;
  if (need > kHardCap)
    throw std::runtime_error("StirlingCache: customer count exceeds hard cap");
  int target = capacity_ > 0 ? capacity_ : 1;
  while (target < need) target *= 2;
  if (target > kHardCap) target = kHardCap;
  table_.reserve(row_offset(target + 1));
  for (int n = capacity_ + 1; n <= target; ++n) {
    // row n from row n-1:  S^n_m = S^{n-1}_{m-1} + (n-1 - m a) S^{n-1}_m
    for (int m = 1; m <= n; ++m) {
      double below = (m == 1) ? (n == 1 ? 0.0 : kNegInf)  // S^{n-1}_0
                              : table_[row_offset(n - 1) + (m - 2)];
      double same = (m <= n - 1) ? table_[row_offset(n - 1) + (m - 1)] : kNegInf;
      double entry;
      if (same == kNegInf) {
        entry = below;  // diagonal: S^n_n = S^{n-1}_{n-1}
      } else {
        double coef = static_cast<double>(n - 1) - m * discount_;
        entry = coef > 0.0 ? log_add(below, std::log(coef) + same) : below;
      }
      table_.push_back(entry);
    }
  }
  capacity_ = target;
}

}  // namespace scntm
