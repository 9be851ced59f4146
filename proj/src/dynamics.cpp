#include "swarmlimit/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <utility>

#include "swarmlimit/consensus.hpp"

namespace swarmlimit {

namespace {

template <class Body>
void for_each_particle(std::size_t count, int workers, Body&& body)
{
  const auto n = static_cast<std::ptrdiff_t>(count);
  if (workers > 1) {
#pragma omp parallel for schedule(static) num_threads(workers)
    for (std::ptrdiff_t i = 0; i < n; ++i) body(static_cast<std::size_t>(i));
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i) body(static_cast<std::size_t>(i));
  }
}

int sweep_workers(const StepOptions& opts)
{
  return opts.draws ? 1 : opts.workers;
}

std::vector<double> costs_of(const Cloud& cloud, const Objective& obj, int workers)
{
  if (cloud.dim() != obj.dim()) throw std::invalid_argument("state and objective dimensions differ");
  std::vector<double> costs(cloud.size());
  for_each_particle(cloud.size(), workers, [&](std::size_t i) { costs[i] = obj(cloud.point(i)); });
  return costs;
}

// Checked once per step so that theta() cannot throw inside a parallel sweep.
void check_tape(const NoiseTape& tape, const SwarmState& s, std::size_t r, std::size_t n,
                std::size_t channels)
{
  const auto& l = tape.layout();
  if (r >= l.replicates || n >= l.steps || s.size() > l.particles || s.dim() > l.dim
      || channels > l.channels)
    throw std::out_of_range("swarm step (replicate " + std::to_string(r) + ", step "
                            + std::to_string(n) + ") lies outside the noise tape layout");
}

double draw(const NoiseTape& tape, const StepOptions& opts, std::size_t r, std::size_t i,
            std::size_t n, std::size_t k, std::size_t ch)
{
  const double v = tape.theta(r, i, n, k, ch);
  if (opts.draws) opts.draws->push_back({r, i, n, k, ch, v});
  return v;
}

bool all_finite(const Cloud& c)
{
  return std::all_of(c.coords().begin(), c.coords().end(), [](double v) { return std::isfinite(v); });
}

void check_finite(const SwarmState& s, std::size_t step)
{
  const char* bad = !all_finite(s.x)             ? "positions"
                    : (s.v && !all_finite(*s.v)) ? "velocities"
                    : (s.y && !all_finite(*s.y)) ? "local bests"
                                                 : nullptr;
  if (bad)
    throw NumericalAbort(step, std::string("non-finite ") + bad + " at step " + std::to_string(step));
}

void require_shape(const SwarmState& s, bool velocity, bool memory, const char* step_name)
{
  if (s.x.empty()) throw std::invalid_argument(std::string(step_name) + ": empty swarm");
  if (s.v.has_value() != velocity)
    throw std::invalid_argument(std::string(step_name) + (velocity ? ": state needs velocities"
                                                                   : ": state must not carry velocities"));
  if (s.y.has_value() != memory)
    throw std::invalid_argument(std::string(step_name) + (memory ? ": state needs local bests"
                                                                 : ": state must not carry local bests"));
  if (velocity && (s.v->size() != s.x.size() || s.v->dim() != s.x.dim()))
    throw std::invalid_argument(std::string(step_name) + ": velocity shape mismatch");
  if (memory && (s.y->size() != s.x.size() || s.y->dim() != s.x.dim()))
    throw std::invalid_argument(std::string(step_name) + ": local-best shape mismatch");
}

const MemoryParams& require_memory(const Params& p, const char* step_name)
{
  if (!p.memory) throw std::invalid_argument(std::string(step_name) + ": memory parameters missing");
  return *p.memory;
}

// Each advance_* returns the consensus point it used (the one of time n).

std::vector<double> advance_pso(SwarmState& s, const Params& p, const Objective& obj,
                                const NoiseTape& tape, std::size_t r, std::size_t n,
                                const StepOptions& opts)
{
  require_shape(s, true, false, "pso_step");
  check_tape(tape, s, r, n, 1);
  const int workers = sweep_workers(opts);
  const auto xa = consensus_point(s.x, costs_of(s.x, obj, workers), p.alpha);

  const double denom = p.m + p.gamma() * p.dt;
  const double keep = p.m / denom;
  const double drift = p.lambda * p.dt / denom;
  const double noise = p.sigma * std::sqrt(p.dt) / denom;
  const std::size_t d = s.dim();
  auto& v = *s.v;
  for_each_particle(s.size(), workers, [&](std::size_t i) {
    auto xi = s.x.point(i);
    auto vi = v.point(i);
    for (std::size_t k = 0; k < d; ++k) {
      const double gap = xa[k] - xi[k];
      vi[k] = keep * vi[k] + drift * gap + noise * gap * draw(tape, opts, r, i, n, k, 1);
      xi[k] += p.dt * vi[k];
    }
  });
  s.t = static_cast<double>(n + 1) * p.dt;
  check_finite(s, n + 1);
  return xa;
}

std::vector<double> advance_cbo(SwarmState& s, const Params& p, const Objective& obj,
                                const NoiseTape& tape, std::size_t r, std::size_t n,
                                const StepOptions& opts)
{
  require_shape(s, false, false, "cbo_step");
  check_tape(tape, s, r, n, 1);
  const int workers = sweep_workers(opts);
  const auto xa = consensus_point(s.x, costs_of(s.x, obj, workers), p.alpha);

  const double drift = p.dt * p.lambda;
  const double noise = std::sqrt(p.dt) * p.sigma;
  const std::size_t d = s.dim();
  for_each_particle(s.size(), workers, [&](std::size_t i) {
    auto xi = s.x.point(i);
    for (std::size_t k = 0; k < d; ++k) {
      const double gap = xa[k] - xi[k];
      xi[k] += drift * gap + noise * gap * draw(tape, opts, r, i, n, k, 1);
    }
  });
  s.t = static_cast<double>(n + 1) * p.dt;
  check_finite(s, n + 1);
  return xa;
}

// Y_{n+1} = Y_n + nu dt (X_{n+1} - Y_n) S^beta(X_{n+1}, Y_n), with E(Y_n) given.
void relax_local_bests(SwarmState& s, const MemoryParams& mem, const Objective& obj, double dt,
                       std::span<const double> cost_y, int workers)
{
  const std::size_t d = s.dim();
  auto& y = *s.y;
  for_each_particle(s.size(), workers, [&](std::size_t i) {
    const auto xi = std::as_const(s.x).point(i);
    const double gate = memory_switch(mem.beta, obj(xi), cost_y[i]);
    auto yi = y.point(i);
    for (std::size_t k = 0; k < d; ++k) yi[k] += mem.nu * dt * (xi[k] - yi[k]) * gate;
  });
}

std::vector<double> advance_pso_memory(SwarmState& s, const Params& p, const Objective& obj,
                                       const NoiseTape& tape, std::size_t r, std::size_t n,
                                       const StepOptions& opts)
{
  require_shape(s, true, true, "pso_memory_step");
  const auto& mem = require_memory(p, "pso_memory_step");
  check_tape(tape, s, r, n, 2);
  const int workers = sweep_workers(opts);
  const auto cost_y = costs_of(*s.y, obj, workers);
  const auto ya = consensus_point(*s.y, cost_y, p.alpha);

  const double denom = p.m + p.gamma() * p.dt;
  const double keep = p.m / denom;
  const double drift1 = mem.lambda1 * p.dt / denom;
  const double drift2 = mem.lambda2 * p.dt / denom;
  const double noise1 = mem.sigma1 * std::sqrt(p.dt) / denom;
  const double noise2 = mem.sigma2 * std::sqrt(p.dt) / denom;
  const std::size_t d = s.dim();
  auto& v = *s.v;
  const auto& y = *s.y;
  for_each_particle(s.size(), workers, [&](std::size_t i) {
    auto xi = s.x.point(i);
    auto vi = v.point(i);
    const auto yi = y.point(i);
    for (std::size_t k = 0; k < d; ++k) {
      const double local = yi[k] - xi[k];
      const double global = ya[k] - xi[k];
      const double th1 = draw(tape, opts, r, i, n, k, 1);
      const double th2 = draw(tape, opts, r, i, n, k, 2);
      vi[k] = keep * vi[k] + drift1 * local + drift2 * global + noise1 * local * th1
              + noise2 * global * th2;
      xi[k] += p.dt * vi[k];
    }
  });
  relax_local_bests(s, mem, obj, p.dt, cost_y, workers);
  s.t = static_cast<double>(n + 1) * p.dt;
  check_finite(s, n + 1);
  return ya;
}

std::vector<double> advance_cbo_memory(SwarmState& s, const Params& p, const Objective& obj,
                                       const NoiseTape& tape, std::size_t r, std::size_t n,
                                       const StepOptions& opts)
{
  require_shape(s, false, true, "cbo_memory_step");
  const auto& mem = require_memory(p, "cbo_memory_step");
  check_tape(tape, s, r, n, 2);
  const int workers = sweep_workers(opts);
  const auto cost_y = costs_of(*s.y, obj, workers);
  const auto ya = consensus_point(*s.y, cost_y, p.alpha);

  const double sqdt = std::sqrt(p.dt);
  const std::size_t d = s.dim();
  const auto& y = *s.y;
  for_each_particle(s.size(), workers, [&](std::size_t i) {
    auto xi = s.x.point(i);
    const auto yi = y.point(i);
    for (std::size_t k = 0; k < d; ++k) {
      const double local = yi[k] - xi[k];
      const double global = ya[k] - xi[k];
      const double th1 = draw(tape, opts, r, i, n, k, 1);
      const double th2 = draw(tape, opts, r, i, n, k, 2);
      xi[k] += mem.lambda1 * p.dt * local + mem.lambda2 * p.dt * global
               + mem.sigma1 * sqdt * local * th1 + mem.sigma2 * sqdt * global * th2;
    }
  });
  relax_local_bests(s, mem, obj, p.dt, cost_y, workers);
  s.t = static_cast<double>(n + 1) * p.dt;
  check_finite(s, n + 1);
  return ya;
}

std::vector<double> advance(Scheme scheme, SwarmState& s, const Params& p, const Objective& obj,
                            const NoiseTape& tape, std::size_t r, std::size_t n,
                            const StepOptions& opts)
{
  switch (scheme) {
    case Scheme::pso: return advance_pso(s, p, obj, tape, r, n, opts);
    case Scheme::cbo: return advance_cbo(s, p, obj, tape, r, n, opts);
    case Scheme::pso_mem: return advance_pso_memory(s, p, obj, tape, r, n, opts);
    case Scheme::cbo_mem: return advance_cbo_memory(s, p, obj, tape, r, n, opts);
  }
  throw std::logic_error("unhandled scheme");
}

std::vector<double> current_consensus(Scheme scheme, const SwarmState& s, const Params& p,
                                      const Objective& obj, int workers)
{
  const Cloud& cloud = has_memory(scheme) ? *s.y : s.x;
  return consensus_point(cloud, costs_of(cloud, obj, workers), p.alpha);
}

}  // namespace

Scheme parse_scheme(std::string_view name)
{
  if (name == "pso") return Scheme::pso;
  if (name == "cbo") return Scheme::cbo;
  if (name == "pso_mem") return Scheme::pso_mem;
  if (name == "cbo_mem") return Scheme::cbo_mem;
  throw std::invalid_argument("unknown scheme '" + std::string(name) + "'");
}

std::string_view to_string(Scheme scheme)
{
  switch (scheme) {
    case Scheme::pso: return "pso";
    case Scheme::cbo: return "cbo";
    case Scheme::pso_mem: return "pso_mem";
    case Scheme::cbo_mem: return "cbo_mem";
  }
  return "?";
}

bool has_velocity(Scheme scheme) { return scheme == Scheme::pso || scheme == Scheme::pso_mem; }
bool has_memory(Scheme scheme) { return scheme == Scheme::pso_mem || scheme == Scheme::cbo_mem; }

std::size_t Params::steps() const
{
  const double ratio = T / dt;
  double whole = std::floor(ratio);
  if (ratio - whole > 1.0 - 1e-9) whole += 1.0;
  return static_cast<std::size_t>(whole);
}

void Params::validate() const
{
  const auto fail = [](const std::string& msg) { throw std::invalid_argument(msg); };
  if (!(m > 0.0 && m <= 1.0)) fail("m must lie in (0, 1]");
  if (!(lambda >= 0.0)) fail("lambda must be nonnegative");
  if (!(sigma >= 0.0)) fail("sigma must be nonnegative");
  if (!(alpha >= 0.0)) fail("alpha must be nonnegative");
  if (!(dt > 0.0) || !std::isfinite(dt)) fail("dt must be positive");
  if (!(T > 0.0) || !std::isfinite(T) || steps() < 1) fail("T must be at least dt");
  if (N < 1) fail("N must be at least 1");
  if (d < 1) fail("d must be at least 1");
  if (memory) {
    const auto& mp = *memory;
    if (!(mp.lambda1 >= 0.0)) fail("lambda1 must be nonnegative");
    if (!(mp.lambda2 >= 0.0)) fail("lambda2 must be nonnegative");
    if (!(mp.sigma1 >= 0.0)) fail("sigma1 must be nonnegative");
    if (!(mp.sigma2 >= 0.0)) fail("sigma2 must be nonnegative");
    if (!(mp.nu >= 0.0)) fail("nu must be nonnegative");
    if (!(mp.beta >= 0.0)) fail("beta must be nonnegative");
  }
}

SwarmState initial_state(Scheme scheme, Cloud x0, std::optional<Cloud> v0)
{
  SwarmState s;
  if (has_velocity(scheme)) {
    if (v0 && (v0->size() != x0.size() || v0->dim() != x0.dim()))
      throw std::invalid_argument("initial velocity shape mismatch");
    s.v = v0 ? std::move(*v0) : Cloud(x0.size(), x0.dim());
  }
  if (has_memory(scheme)) s.y = x0;
  s.x = std::move(x0);
  return s;
}

NumericalAbort::NumericalAbort(std::size_t step, const std::string& what)
    : std::runtime_error(what), step_(step)
{
}

SwarmState pso_step(SwarmState state, const Params& p, const Objective& obj, const NoiseTape& tape,
                    std::size_t r, std::size_t n, const StepOptions& opts)
{
  advance_pso(state, p, obj, tape, r, n, opts);
  return state;
}

SwarmState cbo_step(SwarmState state, const Params& p, const Objective& obj, const NoiseTape& tape,
                    std::size_t r, std::size_t n, const StepOptions& opts)
{
  advance_cbo(state, p, obj, tape, r, n, opts);
  return state;
}

SwarmState pso_memory_step(SwarmState state, const Params& p, const Objective& obj,
                           const NoiseTape& tape, std::size_t r, std::size_t n,
                           const StepOptions& opts)
{
  advance_pso_memory(state, p, obj, tape, r, n, opts);
  return state;
}

SwarmState cbo_memory_step(SwarmState state, const Params& p, const Objective& obj,
                           const NoiseTape& tape, std::size_t r, std::size_t n,
                           const StepOptions& opts)
{
  advance_cbo_memory(state, p, obj, tape, r, n, opts);
  return state;
}

SwarmState step(Scheme scheme, SwarmState state, const Params& p, const Objective& obj,
                const NoiseTape& tape, std::size_t r, std::size_t n, const StepOptions& opts)
{
  advance(scheme, state, p, obj, tape, r, n, opts);
  return state;
}

double memory_switch(double beta, double cost_x, double cost_y)
{
  return std::tanh(beta * (cost_x - cost_y));
}

TapeLayout tape_layout(Scheme scheme, const Params& p, std::size_t replicates)
{
  return {replicates, p.N, std::max<std::size_t>(p.steps(), 1), p.d, has_memory(scheme) ? 2u : 1u};
}

RunRecord run(Scheme scheme, const Params& p, const Objective& obj, const NoiseTape& tape,
              std::size_t r, const SwarmState& init, const RunOptions& opts)
{
  p.validate();
  if (has_memory(scheme)) require_memory(p, "run");
  if (init.size() != p.N || init.dim() != p.d)
    throw std::invalid_argument("initial state does not match N x d of the parameters");
  require_shape(init, has_velocity(scheme), has_memory(scheme), "run");
  check_finite(init, 0);

  RunRecord rec;
  rec.scheme = scheme;
  rec.steps = p.steps();
  rec.dt = p.dt;

  std::set<std::size_t> snap_steps;
  for (double t : opts.snapshot_times) {
    const double j = std::round(t / p.dt);
    if (!(j >= 0.0) || j > static_cast<double>(rec.steps))
      throw std::invalid_argument("snapshot time " + std::to_string(t) + " outside [0, T]");
    snap_steps.insert(static_cast<std::size_t>(j));
  }

  const auto record = [&](const SwarmState& s, std::size_t j) {
    rec.times.push_back(static_cast<double>(j) * p.dt);
    rec.x_moments.push_back(empirical_moments(s.x));
    if (s.v) rec.v_moments.push_back(empirical_moments(*s.v));
    if (s.y) rec.y_moments.push_back(empirical_moments(*s.y));
    if (opts.snapshot_every_step || snap_steps.count(j))
      rec.snapshots.push_back({j, static_cast<double>(j) * p.dt, s.x, s.y});
  };

  const std::size_t d = p.d;
  rec.consensus.reserve((rec.steps + 1) * d);
  SwarmState s = init;
  s.t = 0.0;
  record(s, 0);
  const StepOptions step_opts{opts.workers, nullptr};
  for (std::size_t n = 0; n < rec.steps; ++n) {
    const auto c = advance(scheme, s, p, obj, tape, r, n, step_opts);
    rec.consensus.insert(rec.consensus.end(), c.begin(), c.end());
    record(s, n + 1);
  }
  const auto last = current_consensus(scheme, s, p, obj, opts.workers);
  rec.consensus.insert(rec.consensus.end(), last.begin(), last.end());
  rec.final_state = std::move(s);
  return rec;
}

}  // namespace swarmlimit
