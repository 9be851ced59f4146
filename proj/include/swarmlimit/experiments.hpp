#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "swarmlimit/cloud.hpp"
#include "swarmlimit/dynamics.hpp"
#include "swarmlimit/noise.hpp"
#include "swarmlimit/objectives.hpp"

namespace swarmlimit {

enum class SchemePair { plain, memory };

/// Inertial scheme and its first-order limit for a pair.
Scheme inertial_scheme(SchemePair pair);
Scheme limit_scheme(SchemePair pair);

struct LimitStudyConfig
{
  std::vector<double> m_ladder;  ///< strictly decreasing, each in (0, 1]
  std::size_t replicates = 20;
  Params base;  ///< everything but m
  SchemePair pair = SchemePair::plain;
  InitialDistribution init = Gaussian{0.0, 1.0};
  /// Initial velocities; zero when unset.
  std::optional<InitialDistribution> init_velocity;
  std::size_t bins = 0;  ///< KL bins; 0 selects ceil(sqrt(N))
  int workers = 1;

  void validate() const;
};

/// Results for one inertia value.
struct LadderRow
{
  double m = 0.0;
  std::vector<double> sup_gap;  ///< per replicate: sup over the step grid of the paired gap
  double mean_gap = 0.0;
  double stderr_gap = 0.0;  ///< 0 for a single replicate
  /// Replicate-averaged W2 / KL of the position marginals per step; empty when d > 1.
  std::vector<double> w2;
  std::vector<double> kl;
};

struct StudyResult
{
  std::vector<LadderRow> rows;
  std::vector<double> times;
  double slope = 0.0;      ///< least squares of ln(mean_gap) against ln(m)
  double intercept = 0.0;
  std::size_t bins = 0;
  std::uint64_t seed = 0;
};

/// Coupled PSO(m) / CBO runs over the ladder. Replicate r starts both systems
/// from initial_positions(derive_seed(seed, r), ...) and drives them with
/// tape index r of NoiseTape(seed, ...). Throws RunFailure on aborts.
StudyResult zero_inertia_study(const LimitStudyConfig& cfg, const Objective& obj, std::uint64_t seed);

/// Least-squares slope and intercept of ln(y) against ln(x). NaN when fewer
/// than two points or any y <= 0.
std::pair<double, double> loglog_fit(const std::vector<double>& x, const std::vector<double>& y);

/// A NumericalAbort tagged with the study cell that produced it.
class RunFailure : public NumericalAbort
{
 public:
  RunFailure(const NumericalAbort& cause, double m, std::size_t replicate);
  double m() const { return m_; }
  std::size_t replicate() const { return replicate_; }

 private:
  double m_;
  std::size_t replicate_;
};

struct CompareRow
{
  double t = 0.0;
  double w2 = 0.0;
  double kl = 0.0;
  double m = 0.0;
  std::uint64_t seed = 0;
  std::size_t bins = 0;
};

struct CompareOptions
{
  InitialDistribution init = Gaussian{0.0, 1.0};
  SchemePair pair = SchemePair::plain;
  std::size_t bins = 0;
  int workers = 1;
};

/// Single coupled PSO(p.m) / CBO run (replicate 0); W2 and KL between the
/// position clouds at each snapshot time (every step when empty). d = 1 only.
std::vector<CompareRow> compare_distributions(const Params& p, const Objective& obj, std::uint64_t seed,
                                              const std::vector<double>& snapshot_times,
                                              const CompareOptions& opts = {});

double time_mean_w2(const std::vector<CompareRow>& rows);
double time_mean_kl(const std::vector<CompareRow>& rows);

struct OptimizeResult
{
  std::vector<double> consensus;  ///< consensus point at T
  double mean_speed = 0.0;        ///< (1/N) sum |V_i|; 0 for first-order schemes
};

OptimizeResult optimize(Scheme scheme, Params p, const Objective& obj, std::uint64_t seed, double T,
                        const InitialDistribution& init = Gaussian{0.0, 1.0}, int workers = 1);

struct LaplaceRow
{
  double alpha = 0.0;
  double value = 0.0;
  double gap = 0.0;  ///< value - min_i E(x_i)
};

/// Requires strictly increasing positive alphas.
std::vector<LaplaceRow> laplace_sweep(const Cloud& measure, const Objective& obj,
                                      const std::vector<double>& alphas);

}  // namespace swarmlimit
