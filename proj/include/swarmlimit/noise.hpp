#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <variant>

#include "swarmlimit/cloud.hpp"

namespace swarmlimit {

namespace philox {

using Counter = std::array<std::uint32_t, 4>;
using Key = std::array<std::uint32_t, 2>;

/// Philox4x32 with 10 rounds (Salmon et al., SC'11).
Counter philox4x32_10(Counter ctr, Key key);

}  // namespace philox

std::uint64_t splitmix64(std::uint64_t x);

/// Independent seed for stream `stream` of a base seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

struct TapeLayout
{
  std::size_t replicates = 1;
  std::size_t particles = 1;
  std::size_t steps = 1;
  std::size_t dim = 1;
  std::size_t channels = 1;  ///< 1, or 2 for the memory schemes
};

/// Index-addressed standard normal increments. theta(r, i, n, k, ch) is a
/// pure function of the seed and the index tuple; nothing is stored.
class NoiseTape
{
 public:
  NoiseTape(std::uint64_t seed, TapeLayout layout);

  /// Channels are numbered from 1. Throws std::out_of_range outside the layout.
  double theta(std::size_t r, std::size_t i, std::size_t n, std::size_t k, std::size_t ch = 1) const;

  std::uint64_t seed() const { return seed_; }
  const TapeLayout& layout() const { return layout_; }

 private:
  std::uint64_t seed_;
  TapeLayout layout_;
};

/// One variate consumed by a step, for coupling audits.
struct NoiseDraw
{
  std::size_t r, i, n, k, ch;
  double value;
  friend bool operator==(const NoiseDraw&, const NoiseDraw&) = default;
};

struct Gaussian
{
  double mean = 0.0;
  double var = 1.0;
  friend bool operator==(const Gaussian&, const Gaussian&) = default;
};
struct Uniform
{
  double a = -3.0;
  double b = 3.0;
  friend bool operator==(const Uniform&, const Uniform&) = default;
};
/// Every particle at the same point (a delta measure).
struct Dirac
{
  double value = 0.0;
  friend bool operator==(const Dirac&, const Dirac&) = default;
};

using InitialDistribution = std::variant<Gaussian, Uniform, Dirac>;

/// N i.i.d. points in R^d, each coordinate drawn from `dist`.
/// Throws std::invalid_argument on var <= 0 or a >= b.
Cloud initial_positions(std::uint64_t seed, std::size_t count, std::size_t dim,
                        const InitialDistribution& dist);

}  // namespace swarmlimit
