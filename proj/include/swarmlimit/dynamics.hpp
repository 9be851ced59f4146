#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "swarmlimit/cloud.hpp"
#include "swarmlimit/metrics.hpp"
#include "swarmlimit/noise.hpp"
#include "swarmlimit/objectives.hpp"

namespace swarmlimit {

enum class Scheme { pso, cbo, pso_mem, cbo_mem };

Scheme parse_scheme(std::string_view name);
std::string_view to_string(Scheme scheme);
bool has_velocity(Scheme scheme);
bool has_memory(Scheme scheme);

/// Constants of the local-best (memory) variants.
struct MemoryParams
{
  double lambda1 = 1.0;
  double lambda2 = 1.0;
  double sigma1 = 0.0;
  double sigma2 = 0.0;
  double nu = 0.5;
  double beta = 30.0;

  friend bool operator==(const MemoryParams&, const MemoryParams&) = default;
};

struct Params
{
  double m = 0.1;       ///< inertia weight in (0, 1]
  double lambda = 1.0;  ///< drift toward the consensus point
  double sigma = 0.0;   ///< multiplicative noise strength
  double alpha = 30.0;
  double dt = 0.01;
  double T = 1.0;
  std::size_t N = 1;
  std::size_t d = 1;
  std::optional<MemoryParams> memory;

  /// Friction; tied to the inertia so that the m -> 0 limit is first order.
  double gamma() const { return 1.0 - m; }

  /// floor(T / dt), tolerant to the representation error of dt.
  std::size_t steps() const;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;

  friend bool operator==(const Params&, const Params&) = default;
};

/// Positions, and velocities / local bests where the scheme has them.
struct SwarmState
{
  double t = 0.0;
  Cloud x;
  std::optional<Cloud> v;
  std::optional<Cloud> y;

  std::size_t size() const { return x.size(); }
  std::size_t dim() const { return x.dim(); }
};

/// State at t = 0 for `scheme`: zero velocities unless given, local bests
/// starting at the positions.
SwarmState initial_state(Scheme scheme, Cloud x0, std::optional<Cloud> v0 = std::nullopt);

/// Raised when a step produces NaN or Inf; carries the step index.
class NumericalAbort : public std::runtime_error
{
 public:
  NumericalAbort(std::size_t step, const std::string& what);
  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

struct StepOptions
{
  int workers = 1;
  /// When set, every consumed variate is appended here (forces a serial sweep).
  std::vector<NoiseDraw>* draws = nullptr;
};

/// Semi-implicit inertial step: velocity first, then X_{n+1} = X_n + dt V_{n+1}.
SwarmState pso_step(SwarmState state, const Params& p, const Objective& obj, const NoiseTape& tape,
                    std::size_t r, std::size_t n, const StepOptions& opts = {});

/// Euler-Maruyama step of the first-order consensus dynamics; consumes the
/// same tape entries (r, i, n, k, 1) as pso_step.
SwarmState cbo_step(SwarmState state, const Params& p, const Objective& obj, const NoiseTape& tape,
                    std::size_t r, std::size_t n, const StepOptions& opts = {});

/// Inertial step with local bests Y and the regularized global best over Y.
/// Channel 1 drives the Y - X term, channel 2 the global-best term.
SwarmState pso_memory_step(SwarmState state, const Params& p, const Objective& obj,
                           const NoiseTape& tape, std::size_t r, std::size_t n,
                           const StepOptions& opts = {});

SwarmState cbo_memory_step(SwarmState state, const Params& p, const Objective& obj,
                           const NoiseTape& tape, std::size_t r, std::size_t n,
                           const StepOptions& opts = {});

SwarmState step(Scheme scheme, SwarmState state, const Params& p, const Objective& obj,
                const NoiseTape& tape, std::size_t r, std::size_t n, const StepOptions& opts = {});

/// S^beta(x, y) = tanh(beta (E(x) - E(y))), written with the costs.
double memory_switch(double beta, double cost_x, double cost_y);

struct Snapshot
{
  std::size_t step = 0;
  double t = 0.0;
  Cloud x;
  std::optional<Cloud> y;
};

struct RunOptions
{
  std::vector<double> snapshot_times;  ///< rounded to the nearest step
  bool snapshot_every_step = false;
  int workers = 1;
};

/// Per-step trajectory summary of one run. Index j of every series refers
/// to time j * dt, j = 0 .. steps.
struct RunRecord
{
  Scheme scheme = Scheme::cbo;
  std::size_t steps = 0;
  double dt = 0.0;
  std::vector<double> times;
  std::vector<double> consensus;  ///< (steps + 1) x d, over X (plain) or Y (memory)
  std::vector<Moments> x_moments;
  std::vector<Moments> v_moments;  ///< empty for first-order schemes
  std::vector<Moments> y_moments;  ///< empty without memory
  std::vector<Snapshot> snapshots;
  SwarmState final_state;

  std::span<const double> consensus_at(std::size_t j) const
  {
    const std::size_t d = final_state.dim();
    return {consensus.data() + j * d, d};
  }
};

/// Iterates `scheme` for p.steps() steps from `init`. Throws NumericalAbort
/// with the failing step on non-finite state.
RunRecord run(Scheme scheme, const Params& p, const Objective& obj, const NoiseTape& tape,
              std::size_t r, const SwarmState& init, const RunOptions& opts = {});

/// Tape layout large enough for `replicates` runs of `scheme` under `p`.
TapeLayout tape_layout(Scheme scheme, const Params& p, std::size_t replicates);

}  // namespace swarmlimit
