#pragma once

#include <cstddef>
#include <span>

#include "swarmlimit/cloud.hpp"

namespace swarmlimit {

struct Moments
{
  double m2 = 0.0;  ///< (1/N) sum |x_i|^2
  double m4 = 0.0;  ///< (1/N) sum |x_i|^4
  friend bool operator==(const Moments&, const Moments&) = default;
};

Moments empirical_moments(const SampleCloud& a);

/// Exact W2 between two equal-size 1-D clouds via sorted (monotone) coupling.
double wasserstein2_1d(const SampleCloud& a, const SampleCloud& b);

/// (1/N) sum_i |a_i - b_i|^2 for index-matched clouds from coupled runs.
double paired_msq_gap(const SampleCloud& a, const SampleCloud& b);

/// Paired gap of the joint (X, Y) state: (1/N) sum_i |x_i - x'_i|^2 + |y_i - y'_i|^2.
double paired_msq_gap(const SampleCloud& ax, const SampleCloud& ay, const SampleCloud& bx,
                      const SampleCloud& by);

/// Additive smoothing applied to every histogram bin before renormalizing.
inline constexpr double kKlSmoothing = 1e-10;

/// sum_k p_k ln(p_k / q_k) after smoothing both mass vectors with
/// kKlSmoothing and renormalizing. Vectors must have equal length.
double kl_from_masses(std::span<const double> p, std::span<const double> q);

/// KL(a || b) of two 1-D clouds binned on shared equal-width bins spanning
/// the union range. Returns 0 when every point of both clouds coincides.
double kl_histogram(const SampleCloud& a, const SampleCloud& b, std::size_t bins);

/// ceil(sqrt(N)), the default bin count.
std::size_t default_bins(std::size_t n);

}  // namespace swarmlimit
