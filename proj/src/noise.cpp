#include "swarmlimit/noise.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <type_traits>

namespace swarmlimit {

namespace philox {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53;
constexpr std::uint32_t kMul1 = 0xCD9E8D57;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo)
{
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

}  // namespace

Counter philox4x32_10(Counter ctr, Key key)
{
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

}  // namespace philox

namespace {

constexpr std::uint64_t kInitDomain = 0x696e'6974'706f'7331ULL;  // "initpos1"

philox::Key key_of(std::uint64_t seed)
{
  return {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
}

std::uint64_t join(std::uint32_t hi, std::uint32_t lo)
{
  return (static_cast<std::uint64_t>(hi) << 32) | lo;
}

// (0, 1]
double open_unit(std::uint64_t bits)
{
  return static_cast<double>((bits >> 11) + 1) * 0x1.0p-53;
}

// [0, 1)
double closed_unit(std::uint64_t bits)
{
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

double box_muller(const philox::Counter& w)
{
  const double u1 = open_unit(join(w[0], w[1]));
  const double u2 = closed_unit(join(w[2], w[3]));
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

void check_index(std::size_t value, std::size_t bound, const char* what)
{
  if (value >= bound)
    throw std::out_of_range(std::string("noise tape ") + what + " index " + std::to_string(value)
                            + " outside layout bound " + std::to_string(bound));
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t x)
{
  x += 0x9E37'79B9'7F4A'7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58'476D'1CE4'E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D0'49BB'1331'11EBULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream)
{
  return splitmix64(seed ^ splitmix64(stream + 1));
}

NoiseTape::NoiseTape(std::uint64_t seed, TapeLayout layout) : seed_(seed), layout_(layout)
{
  constexpr std::size_t word = std::numeric_limits<std::uint32_t>::max();
  if (layout.replicates == 0 || layout.particles == 0 || layout.steps == 0 || layout.dim == 0)
    throw std::invalid_argument("noise tape layout extents must be positive");
  if (layout.channels != 1 && layout.channels != 2)
    throw std::invalid_argument("noise tape supports 1 or 2 channels");
  if (layout.particles > word || layout.steps > word || layout.dim > word
      || layout.replicates > word / 2)
    throw std::invalid_argument("noise tape layout exceeds the 32-bit counter range");
}

double NoiseTape::theta(std::size_t r, std::size_t i, std::size_t n, std::size_t k, std::size_t ch) const
{
  check_index(r, layout_.replicates, "replicate");
  check_index(i, layout_.particles, "particle");
  check_index(n, layout_.steps, "step");
  check_index(k, layout_.dim, "dimension");
  if (ch < 1 || ch > layout_.channels)
    throw std::out_of_range("noise tape channel " + std::to_string(ch) + " outside 1.."
                            + std::to_string(layout_.channels));

  const philox::Counter ctr = {static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(n),
                               static_cast<std::uint32_t>(k),
                               static_cast<std::uint32_t>((r << 1) | (ch - 1))};
  return box_muller(philox::philox4x32_10(ctr, key_of(seed_)));
}

Cloud initial_positions(std::uint64_t seed, std::size_t count, std::size_t dim,
                        const InitialDistribution& dist)
{
  if (count == 0) throw std::invalid_argument("initial cloud needs at least one particle");
  if (const auto* g = std::get_if<Gaussian>(&dist); g && !(g->var > 0.0))
    throw std::invalid_argument("gaussian variance must be positive");
  if (const auto* u = std::get_if<Uniform>(&dist); u && !(u->a < u->b))
    throw std::invalid_argument("uniform bounds need a < b");

  Cloud cloud(count, dim);
  const philox::Key key = key_of(splitmix64(seed ^ kInitDomain));
  for (std::size_t i = 0; i < count; ++i) {
    auto x = cloud.point(i);
    for (std::size_t k = 0; k < dim; ++k) {
      const philox::Counter w = philox::philox4x32_10(
          {static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(k),
           static_cast<std::uint32_t>(static_cast<std::uint64_t>(i) >> 32), 0u},
          key);
      x[k] = std::visit(
          [&](const auto& d) -> double {
            using D = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<D, Gaussian>) return d.mean + std::sqrt(d.var) * box_muller(w);
            else if constexpr (std::is_same_v<D, Uniform>) return d.a + (d.b - d.a) * closed_unit(join(w[0], w[1]));
            else return d.value;
          },
          dist);
    }
  }
  return cloud;
}

}  // namespace swarmlimit
