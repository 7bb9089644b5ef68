#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "scntm/stirling.hpp"
#include "support/oracles.hpp"

using namespace scntm;

TEST_CASE("stirling base cases") {
  StirlingCache cache(0.5);
  CHECK(cache.log_stirling(0, 0) == 0.0);
  CHECK(cache.log_stirling(1, 1) == doctest::Approx(0.0));
  CHECK(cache.log_stirling(1, 2) == -std::numeric_limits<double>::infinity());
  CHECK(cache.log_stirling(3, 0) == -std::numeric_limits<double>::infinity());
  CHECK(cache.log_stirling(2, 1) == doctest::Approx(std::log(0.5)));
  for (int n = 1; n <= 20; ++n)
    CHECK(cache.log_stirling(n, n) == doctest::Approx(0.0));
}

TEST_CASE("stirling matches CRP seating enumeration") {
  for (double alpha : {0.0, 0.01, 0.5, 0.7}) {
    StirlingCache cache(alpha);
    for (int n = 1; n <= 8; ++n) {
      for (int m = 1; m <= n; ++m) {
        double expect = oracle::stirling_bruteforce(n, m, alpha);
        double got = std::exp(cache.log_stirling(n, m));
        CHECK(std::abs(got - expect) <= 1e-8 * std::abs(expect));
      }
    }
  }
}

TEST_CASE("stirling table grows without mutating existing entries") {
  StirlingCache cache(0.3, 4);
  double a = cache.log_stirling(4, 2);
  double before_cap = cache.capacity();
  cache.log_stirling(300, 150);
  CHECK(cache.capacity() >= 300);
  CHECK(cache.capacity() > before_cap);
  CHECK(cache.log_stirling(4, 2) == a);
}

TEST_CASE("ratio accessors agree with log table") {
  StirlingCache cache(0.7);
  for (int n = 1; n <= 40; ++n) {
    for (int m = 1; m <= n; ++m) {
      CHECK(cache.ratio_same(n, m) ==
            doctest::Approx(std::exp(cache.log_stirling(n + 1, m) -
                                     cache.log_stirling(n, m))));
      CHECK(cache.ratio_grow(n, m) ==
            doctest::Approx(std::exp(cache.log_stirling(n + 1, m + 1) -
                                     cache.log_stirling(n, m))));
    }
  }
  CHECK(cache.ratio_grow(0, 0) == doctest::Approx(1.0));
}

TEST_CASE("pochhammer values") {
  CHECK(log_pochhammer(2.0, 3) == doctest::Approx(std::log(24.0)));
  CHECK(log_pochhammer_stride(1.0, 0.5, 3) == doctest::Approx(std::log(3.0)));
  CHECK(log_pochhammer(7.3, 0) == 0.0);
  CHECK(log_pochhammer_stride(7.3, 0.2, 0) == 0.0);
  CHECK(log_pochhammer_stride(2.0, 0.0, 4) == doctest::Approx(std::log(16.0)));
  CHECK_THROWS(log_pochhammer(-1.0, 2));
}

TEST_CASE("pochhammer stride ratio identity (b|a)_{T+1}/(b|a)_T = b + T a") {
  for (double beta : {0.1, 1.0, 5.7}) {
    for (double alpha : {0.0, 0.01, 0.7}) {
      for (std::int64_t T : {0, 1, 2, 17, 400}) {
        double lhs = std::exp(log_pochhammer_stride(beta, alpha, T + 1) -
                              log_pochhammer_stride(beta, alpha, T));
        double rhs = beta + static_cast<double>(T) * alpha;
        CHECK(std::abs(lhs - rhs) <= 1e-10 * rhs);
      }
    }
  }
}

TEST_CASE("pochhammer matches direct products") {
  for (double x : {0.2, 1.5, 3.0}) {
    for (int n = 0; n <= 12; ++n) {
      CHECK(log_pochhammer(x, n) ==
            doctest::Approx(std::log(oracle::pochhammer_direct(x, n))));
      CHECK(log_pochhammer_stride(x, 0.7, n) ==
            doctest::Approx(
                std::log(oracle::pochhammer_stride_direct(x, 0.7, n))));
    }
  }
}
