#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "swarmlimit/dynamics.hpp"
#include "swarmlimit/experiments.hpp"
#include "swarmlimit/noise.hpp"

namespace swarmlimit {

/// Malformed or incomplete configuration (CLI exit code 2).
class ConfigError : public std::runtime_error
{
 public:
  using std::runtime_error::runtime_error;
};

/// Unreadable input or unwritable output (CLI exit code 4).
class IoError : public std::runtime_error
{
 public:
  using std::runtime_error::runtime_error;
};

/// Flat key = value experiment description.
///
///   scheme = pso            # pso | cbo | pso_mem | cbo_mem
///   objective = ackley
///   dim = 1
///   shift = 0               # comma list, defaults to the origin
///   N = 1000
///   dt = 0.01
///   T = 1
///   m = 0.1
///   lambda = 1
///   sigma = 0.57735026918962584
///   alpha = 30
///   init = gaussian 0 1     # gaussian <mean> <var> | uniform <a> <b> | dirac <x>
///   seed = 42
///
/// Optional: lambda1 lambda2 sigma1 sigma2 nu beta (required by the memory
/// schemes), replicates, out_path, m_ladder, snapshot_times, alphas,
/// workers, bins. Unknown or repeated keys are errors.
struct RunConfig
{
  Scheme scheme = Scheme::pso;
  std::string objective;
  std::size_t dim = 1;
  std::vector<double> shift;
  std::size_t N = 1;
  double dt = 0.01;
  double T = 1.0;
  double m = 0.1;
  double lambda = 1.0;
  double sigma = 0.0;
  double alpha = 30.0;
  std::optional<double> lambda1, lambda2, sigma1, sigma2, nu, beta;
  InitialDistribution init = Gaussian{};
  std::uint64_t seed = 0;
  std::size_t replicates = 20;
  std::string out_path;
  std::vector<double> m_ladder;
  std::vector<double> snapshot_times;
  std::vector<double> alphas;
  int workers = 1;
  std::size_t bins = 0;

  /// Model parameters; memory constants are included when all six are set.
  /// Throws ConfigError naming the first missing memory key when `need_memory`.
  Params params(bool need_memory) const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

/// Canonical text form; parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& cfg);

/// Comma-separated reals, e.g. "0.2,0.1,0.05".
std::vector<double> parse_real_list(std::string_view text);

/// Round-trippable rendering with 17 significant digits.
std::string format_real(double v);

}  // namespace swarmlimit
