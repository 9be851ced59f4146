#pragma once

// Closed forms of the benchmark costs and the weighted-Lipschitz sampler.
// Shared by the library and the build-time constants generator, so this
// header depends on nothing but the standard library.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <vector>

namespace swarmlimit::formulas {

inline double norm(std::span<const double> x)
{
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

inline double ackley(std::span<const double> x, std::span<const double> shift)
{
  const double d = static_cast<double>(x.size());
  double sq = 0.0;
  double cos_sum = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double u = x[k] - shift[k];
    sq += u * u;
    cos_sum += std::cos(2.0 * std::numbers::pi * u);
  }
  // Grouped so that the value at the minimizer is exactly zero.
  return 20.0 * (1.0 - std::exp(-0.2 / std::sqrt(d) * std::sqrt(sq)))
         + (std::numbers::e - std::exp(cos_sum / d));
}

inline double sphere(std::span<const double> x, std::span<const double> shift)
{
  double sq = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double u = x[k] - shift[k];
    sq += u * u;
  }
  return sq;
}

inline double rastrigin_term(double u)
{
  return u * u - 10.0 * std::cos(2.0 * std::numbers::pi * u) + 10.0;
}

inline double rastrigin(std::span<const double> x, std::span<const double> shift)
{
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) s += rastrigin_term(x[k] - shift[k]);
  return s;
}

inline double unit_uniform(std::mt19937_64& gen)
{
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

template <class Eval>
double weighted_lipschitz_sample_max(const Eval& eval, std::span<const double> lower,
                                     std::span<const double> upper, std::size_t pairs,
                                     std::uint64_t seed)
{
  const std::size_t d = lower.size();
  std::mt19937_64 gen(seed);
  std::vector<double> x(d), y(d);
  double best = 0.0;
  for (std::size_t p = 0; p < pairs; ++p) {
    for (std::size_t k = 0; k < d; ++k) {
      x[k] = lower[k] + (upper[k] - lower[k]) * unit_uniform(gen);
      y[k] = lower[k] + (upper[k] - lower[k]) * unit_uniform(gen);
    }
    double diff_sq = 0.0;
    for (std::size_t k = 0; k < d; ++k) diff_sq += (x[k] - y[k]) * (x[k] - y[k]);
    const double denom = (norm(x) + norm(y)) * std::sqrt(diff_sq);
    if (denom == 0.0) continue;
    const double ratio = std::abs(eval(std::span<const double>(x)) - eval(std::span<const double>(y))) / denom;
    if (ratio > best) best = ratio;
  }
  return best;
}

/// Sample size and seed used for the tabulated Ackley constants.
inline constexpr std::size_t kLipschitzPairs = std::size_t{1} << 20;
inline constexpr std::uint64_t kLipschitzSeed = 0x5eed'ac41'e000'0001ULL;
/// Dimensions covered by the generated table.
inline constexpr std::size_t kTabulatedMaxDim = 8;

}  // namespace swarmlimit::formulas
