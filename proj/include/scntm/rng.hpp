#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>

namespace scntm {

using Rng = std::mt19937_64;

inline double uniform01(Rng& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

// Index draw proportional to non-negative weights.
inline int sample_discrete(std::span<const double> weights, Rng& rng) {
  double total = 0.0;
  for (double w : weights) total += w;
  if (!(total > 0.0))
    throw std::runtime_error("sample_discrete: all weights are zero");
  double r = uniform01(rng) * total;
  double acc = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    acc += weights[i];
    if (r < acc) return static_cast<int>(i);
  }
  return static_cast<int>(weights.size() - 1);
}

inline double draw_gamma(double shape, double rate, Rng& rng) {
  std::gamma_distribution<double> g(shape, 1.0 / rate);
  double x = g(rng);
  // guard against underflow to zero for tiny shapes
  return x > 0.0 ? x : 1e-300;
}

inline double draw_beta(double a, double b, Rng& rng) {
  double x = draw_gamma(a, 1.0, rng);
  double y = draw_gamma(b, 1.0, rng);
  return x / (x + y);
}

}  // namespace scntm
