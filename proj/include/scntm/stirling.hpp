#pragma once

#include <cstdint>
#include <vector>

namespace scntm {

// Rising factorial (x)_n = x (x+1) ... (x+n-1), in log space. Requires x > 0.
double log_pochhammer(double x, std::int64_t n);

// Strided rising factorial (x|y)_n = x (x+y) (x+2y) ... (x+(n-1)y), in log
// space. Requires x > 0 and y >= 0.
double log_pochhammer_stride(double x, double y, std::int64_t n);

// log of the binomial coefficient C(n, k); -inf outside 0 <= k <= n.
double log_binomial(std::int64_t n, std::int64_t k);

// Triangular table of log generalised Stirling numbers log S^n_{m,a} for one
// fixed discount a, built with the recurrence
//
//   S^{n+1}_m = S^n_{m-1} + (n - m a) S^n_m,     S^0_0 = 1.
//
// Every PYP likelihood ratio in the sampler reduces to ratios of adjacent
// entries, so those are exposed directly. The table only ever grows; existing
// entries are never rewritten, so concurrent readers are safe as long as no
// thread is growing the table. Each sampling chain owns its own caches.
class StirlingCache {
 public:
  explicit StirlingCache(double discount, int initial_capacity = 64);

  double discount() const { return discount_; }
  int capacity() const { return capacity_; }

  // log S^n_{m,a}. Impossible configurations (m > n, or m == 0 with n > 0)
  // return -inf. Grows the table when n exceeds the current capacity.
  double log_stirling(int n, int m);

  // S^{n+1}_m / S^n_m, the no-new-table ratio. Requires 1 <= m <= n.
  double ratio_same(int n, int m);

  // S^{n+1}_{m+1} / S^n_m, the new-table ratio. Requires 0 <= m <= n.
  double ratio_grow(int n, int m);

  void ensure(int n);

 private:
  void grow(int need);
  static std::size_t row_offset(int n) {
    // row n >= 1 stores m = 1..n
    return static_cast<std::size_t>(n - 1) * n / 2;
  }

  double discount_;
  int capacity_ = 0;
  std::vector<double> table_;
};

}  // namespace scntm
