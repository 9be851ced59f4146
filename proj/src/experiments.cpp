#include "swarmlimit/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <stdexcept>
#include <string>
#include <tuple>

#include "swarmlimit/consensus.hpp"
#include "swarmlimit/metrics.hpp"

namespace swarmlimit {

namespace {

constexpr std::uint64_t kVelocityStream = std::uint64_t{1} << 40;

Cloud initial_cloud(std::uint64_t seed, std::size_t r, const Params& p, const InitialDistribution& init)
{
  return initial_positions(derive_seed(seed, r), p.N, p.d, init);
}

std::optional<Cloud> initial_velocity(std::uint64_t seed, std::size_t r, const Params& p,
                                      const std::optional<InitialDistribution>& init)
{
  if (!init) return std::nullopt;
  return initial_positions(derive_seed(seed, kVelocityStream + r), p.N, p.d, *init);
}

double snapshot_gap(SchemePair pair, const Snapshot& a, const Snapshot& b)
{
  if (pair == SchemePair::memory) return paired_msq_gap(a.x, *a.y, b.x, *b.y);
  return paired_msq_gap(a.x, b.x);
}

struct ReplicateOutcome
{
  std::vector<double> sup_gap;             // per ladder entry
  std::vector<std::vector<double>> w2, kl;  // per ladder entry, per step
};

ReplicateOutcome run_replicate(const LimitStudyConfig& cfg, const Objective& obj, const NoiseTape& tape,
                               std::uint64_t seed, std::size_t r, std::size_t bins)
{
  const Params& base = cfg.base;
  const Cloud x0 = initial_cloud(seed, r, base, cfg.init);
  const auto v0 = initial_velocity(seed, r, base, cfg.init_velocity);
  RunOptions opts;
  opts.snapshot_every_step = true;

  RunRecord limit;
  try {
    limit = run(limit_scheme(cfg.pair), base, obj, tape, r, initial_state(limit_scheme(cfg.pair), x0), opts);
  } catch (const NumericalAbort& e) {
    throw RunFailure(e, 0.0, r);
  }

  ReplicateOutcome out;
  const bool one_d = base.d == 1;
  for (double m : cfg.m_ladder) {
    Params p = base;
    p.m = m;
    RunRecord inertial;
    try {
      inertial = run(inertial_scheme(cfg.pair), p, obj, tape, r,
                     initial_state(inertial_scheme(cfg.pair), x0, v0), opts);
    } catch (const NumericalAbort& e) {
      throw RunFailure(e, m, r);
    }
    double sup = 0.0;
    std::vector<double> w2, kl;
    for (std::size_t j = 0; j < limit.snapshots.size(); ++j) {
      const auto& a = inertial.snapshots[j];
      const auto& b = limit.snapshots[j];
      sup = std::max(sup, snapshot_gap(cfg.pair, a, b));
      if (one_d) {
        w2.push_back(wasserstein2_1d(a.x, b.x));
        kl.push_back(kl_histogram(a.x, b.x, bins));
      }
    }
    out.sup_gap.push_back(sup);
    out.w2.push_back(std::move(w2));
    out.kl.push_back(std::move(kl));
  }
  return out;
}

}  // namespace

Scheme inertial_scheme(SchemePair pair)
{
  return pair == SchemePair::memory ? Scheme::pso_mem : Scheme::pso;
}

Scheme limit_scheme(SchemePair pair)
{
  return pair == SchemePair::memory ? Scheme::cbo_mem : Scheme::cbo;
}

void LimitStudyConfig::validate() const
{
  if (m_ladder.empty()) throw std::invalid_argument("m ladder is empty");
  for (std::size_t j = 0; j < m_ladder.size(); ++j) {
    if (!(m_ladder[j] > 0.0 && m_ladder[j] <= 1.0))
      throw std::invalid_argument("m ladder entries must lie in (0, 1]");
    if (j > 0 && !(m_ladder[j] < m_ladder[j - 1]))
      throw std::invalid_argument("m ladder must be strictly decreasing");
  }
  if (replicates < 1) throw std::invalid_argument("at least one replicate required");
  Params p = base;
  p.m = m_ladder.front();
  p.validate();
  if (pair == SchemePair::memory && !base.memory)
    throw std::invalid_argument("memory study needs memory parameters");
}

RunFailure::RunFailure(const NumericalAbort& cause, double m, std::size_t replicate)
    : NumericalAbort(cause.step(), std::string(cause.what()) + " (m=" + std::to_string(m)
                                       + ", replicate=" + std::to_string(replicate) + ")"),
      m_(m),
      replicate_(replicate)
{
}

std::pair<double, double> loglog_fit(const std::vector<double>& x, const std::vector<double>& y)
{
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  if (x.size() != y.size() || x.size() < 2) return {nan, nan};
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (!(x[j] > 0.0) || !(y[j] > 0.0)) return {nan, nan};
    const double lx = std::log(x[j]);
    const double ly = std::log(y[j]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double n = static_cast<double>(x.size());
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return {slope, (sy - slope * sx) / n};
}

StudyResult zero_inertia_study(const LimitStudyConfig& cfg, const Objective& obj, std::uint64_t seed)
{
  cfg.validate();
  const Params& base = cfg.base;
  const NoiseTape tape(seed, tape_layout(inertial_scheme(cfg.pair), base, cfg.replicates));
  const std::size_t bins = cfg.bins ? cfg.bins : default_bins(base.N);
  const std::size_t R = cfg.replicates;

  std::vector<ReplicateOutcome> outcomes(R);
  std::vector<std::exception_ptr> errors(R);
  const auto body = [&](std::size_t r) {
    try {
      outcomes[r] = run_replicate(cfg, obj, tape, seed, r, bins);
    } catch (...) {
      errors[r] = std::current_exception();
    }
  };
  const auto count = static_cast<std::ptrdiff_t>(R);
  if (cfg.workers > 1) {
#pragma omp parallel for schedule(dynamic, 1) num_threads(cfg.workers)
    for (std::ptrdiff_t r = 0; r < count; ++r) body(static_cast<std::size_t>(r));
  } else {
    for (std::ptrdiff_t r = 0; r < count; ++r) body(static_cast<std::size_t>(r));
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  StudyResult res;
  res.bins = bins;
  res.seed = seed;
  for (std::size_t j = 0; j <= base.steps(); ++j) res.times.push_back(static_cast<double>(j) * base.dt);

  std::vector<double> means;
  for (std::size_t l = 0; l < cfg.m_ladder.size(); ++l) {
    LadderRow row;
    row.m = cfg.m_ladder[l];
    for (std::size_t r = 0; r < R; ++r) row.sup_gap.push_back(outcomes[r].sup_gap[l]);
    for (double g : row.sup_gap) row.mean_gap += g;
    row.mean_gap /= static_cast<double>(R);
    if (R > 1) {
      double ss = 0.0;
      for (double g : row.sup_gap) ss += (g - row.mean_gap) * (g - row.mean_gap);
      row.stderr_gap = std::sqrt(ss / static_cast<double>(R - 1) / static_cast<double>(R));
    }
    if (base.d == 1) {
      const std::size_t steps = outcomes[0].w2[l].size();
      row.w2.assign(steps, 0.0);
      row.kl.assign(steps, 0.0);
      for (std::size_t r = 0; r < R; ++r)
        for (std::size_t j = 0; j < steps; ++j) {
          row.w2[j] += outcomes[r].w2[l][j] / static_cast<double>(R);
          row.kl[j] += outcomes[r].kl[l][j] / static_cast<double>(R);
        }
    }
    means.push_back(row.mean_gap);
    res.rows.push_back(std::move(row));
  }
  std::tie(res.slope, res.intercept) = loglog_fit(cfg.m_ladder, means);
  return res;
}

std::vector<CompareRow> compare_distributions(const Params& p, const Objective& obj, std::uint64_t seed,
                                              const std::vector<double>& snapshot_times,
                                              const CompareOptions& opts)
{
  p.validate();
  if (p.d != 1) throw std::invalid_argument("distribution comparison requires d = 1");
  if (opts.pair == SchemePair::memory && !p.memory)
    throw std::invalid_argument("memory comparison needs memory parameters");

  const Scheme fast = inertial_scheme(opts.pair);
  const Scheme slow = limit_scheme(opts.pair);
  const NoiseTape tape(seed, tape_layout(fast, p, 1));
  const Cloud x0 = initial_cloud(seed, 0, p, opts.init);
  const std::size_t bins = opts.bins ? opts.bins : default_bins(p.N);

  RunOptions ro;
  ro.workers = opts.workers;
  if (snapshot_times.empty()) ro.snapshot_every_step = true;
  else ro.snapshot_times = snapshot_times;

  const RunRecord a = run(fast, p, obj, tape, 0, initial_state(fast, x0), ro);
  const RunRecord b = run(slow, p, obj, tape, 0, initial_state(slow, x0), ro);

  std::vector<CompareRow> rows;
  for (std::size_t j = 0; j < a.snapshots.size(); ++j) {
    const auto& sa = a.snapshots[j];
    const auto& sb = b.snapshots[j];
    rows.push_back({sa.t, wasserstein2_1d(sa.x, sb.x), kl_histogram(sa.x, sb.x, bins), p.m, seed, bins});
  }
  return rows;
}

double time_mean_w2(const std::vector<CompareRow>& rows)
{
  if (rows.empty()) return 0.0;
  double s = 0.0;
  for (const auto& r : rows) s += r.w2;
  return s / static_cast<double>(rows.size());
}

double time_mean_kl(const std::vector<CompareRow>& rows)
{
  if (rows.empty()) return 0.0;
  double s = 0.0;
  for (const auto& r : rows) s += r.kl;
  return s / static_cast<double>(rows.size());
}

OptimizeResult optimize(Scheme scheme, Params p, const Objective& obj, std::uint64_t seed, double T,
                        const InitialDistribution& init, int workers)
{
  p.T = T;
  p.validate();
  const NoiseTape tape(seed, tape_layout(scheme, p, 1));
  RunOptions ro;
  ro.workers = workers;
  const RunRecord rec = run(scheme, p, obj, tape, 0, initial_state(scheme, initial_cloud(seed, 0, p, init)), ro);

  OptimizeResult out;
  const auto c = rec.consensus_at(rec.steps);
  out.consensus.assign(c.begin(), c.end());
  if (const auto& v = rec.final_state.v) {
    double s = 0.0;
    for (std::size_t i = 0; i < v->size(); ++i) {
      double sq = 0.0;
      for (double c_k : v->point(i)) sq += c_k * c_k;
      s += std::sqrt(sq);
    }
    out.mean_speed = s / static_cast<double>(v->size());
  }
  return out;
}

std::vector<LaplaceRow> laplace_sweep(const Cloud& measure, const Objective& obj,
                                      const std::vector<double>& alphas)
{
  for (std::size_t j = 0; j < alphas.size(); ++j) {
    if (!(alphas[j] > 0.0)) throw std::invalid_argument("alphas must be positive");
    if (j > 0 && !(alphas[j] > alphas[j - 1])) throw std::invalid_argument("alphas must increase");
  }
  const auto costs = evaluate_costs(measure, obj);
  const double best = *std::min_element(costs.begin(), costs.end());
  std::vector<LaplaceRow> rows;
  for (double a : alphas) {
    const double v = laplace_value(costs, a);
    rows.push_back({a, v, v - best});
  }
  return rows;
}

}  // namespace swarmlimit
