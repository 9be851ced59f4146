#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "helpers.hpp"
#include "oracle.hpp"
#include "swarmlimit/consensus.hpp"
#include "swarmlimit/dynamics.hpp"

using namespace swarmlimit;
using testing::line;

namespace {

const double kSigma = 1.0 / std::sqrt(3.0);

Params reference(double m, std::size_t N, std::size_t d = 1)
{
  Params p;
  p.m = m;
  p.lambda = 1.0;
  p.sigma = kSigma;
  p.alpha = 30.0;
  p.dt = 0.01;
  p.T = 1.0;
  p.N = N;
  p.d = d;
  return p;
}

Params quiet(double m, std::size_t N, double lambda, double alpha)
{
  Params p = reference(m, N);
  p.lambda = lambda;
  p.sigma = 0.0;
  p.alpha = alpha;
  return p;
}

MemoryParams memory(double l1, double l2, double s1, double s2, double nu, double beta)
{
  return MemoryParams{l1, l2, s1, s2, nu, beta};
}

NoiseTape tape_for(Scheme s, const Params& p, std::uint64_t seed = 1)
{
  return NoiseTape(seed, tape_layout(s, p, 1));
}

}  // namespace

TEST_CASE("params validation")
{
  Params p = reference(0.1, 10);
  CHECK_NOTHROW(p.validate());
  CHECK(p.gamma() == 1.0 - 0.1);
  CHECK(p.steps() == 100);
  p.m = 0.0;
  CHECK_THROWS(p.validate());
  p.m = 1.5;
  CHECK_THROWS(p.validate());
  p = reference(0.1, 10);
  p.dt = 0.0;
  CHECK_THROWS(p.validate());
  p = reference(0.1, 10);
  p.T = 0.001;
  CHECK_THROWS(p.validate());
  p = reference(0.1, 0);
  CHECK_THROWS(p.validate());
  CHECK(parse_scheme("cbo_mem") == Scheme::cbo_mem);
  CHECK_THROWS(parse_scheme("sgd"));
}

TEST_CASE("pso step on two points matches the quad oracle")
{
  const Params p = quiet(0.5, 2, 1.0, 0.0);
  const auto obj = ackley(1, {0.0});
  const auto out = pso_step(initial_state(Scheme::pso, line({0.0, 1.0})), p, obj, tape_for(Scheme::pso, p), 0, 0);
  const auto [v0, x0] = oracle::pso_step(0.0, 0.0, 0.5, 0.5, 1.0, 0.01);
  const auto [v1, x1] = oracle::pso_step(1.0, 0.0, 0.5, 0.5, 1.0, 0.01);
  CHECK(oracle::rel_err(out.v->point(0)[0], v0) <= 1e-12);
  CHECK(oracle::rel_err(out.x.point(0)[0], x0) <= 1e-12);
  CHECK(oracle::rel_err(out.v->point(1)[0], v1) <= 1e-12);
  CHECK(oracle::rel_err(out.x.point(1)[0], x1) <= 1e-12);
  CHECK(out.v->point(0)[0] == doctest::Approx(0.0099009900990099011).epsilon(1e-14));
  CHECK(out.x.point(0)[0] == doctest::Approx(0.000099009900990099011).epsilon(1e-14));
  CHECK(out.t == doctest::Approx(0.01));
}

TEST_CASE("pso singleton decays geometrically")
{
  Params p = reference(0.2, 1);
  const auto obj = ackley(1, {0.0});
  SwarmState s = initial_state(Scheme::pso, line({0.7}), line({2.0}));
  const NoiseTape tape = tape_for(Scheme::pso, p);
  const double factor = p.m / (p.m + p.gamma() * p.dt);
  double v = 2.0, x = 0.7;
  for (std::size_t n = 0; n < 10; ++n) {
    s = pso_step(std::move(s), p, obj, tape, 0, n);
    v *= factor;
    x += p.dt * v;
    CHECK(s.v->point(0)[0] == doctest::Approx(v).epsilon(1e-14));
    CHECK(s.x.point(0)[0] == doctest::Approx(x).epsilon(1e-14));
  }
}

TEST_CASE("frozen pso and cbo dynamics")
{
  const auto obj = rastrigin(1, {0.0});
  const Cloud x0 = line({-1.0, 0.2, 2.5});
  const Params p = quiet(0.3, 3, 0.0, 30.0);
  const auto a = pso_step(initial_state(Scheme::pso, x0), p, obj, tape_for(Scheme::pso, p), 0, 0);
  CHECK(a.x == x0);
  const auto b = cbo_step(initial_state(Scheme::cbo, x0), p, obj, tape_for(Scheme::cbo, p), 0, 0);
  CHECK(b.x == x0);
  CHECK(b.t == doctest::Approx(0.01));
}

TEST_CASE("cbo step on two points")
{
  const Params p = quiet(0.1, 2, 1.0, 0.0);
  const auto obj = ackley(1, {0.0});
  const auto out = cbo_step(initial_state(Scheme::cbo, line({0.0, 1.0})), p, obj, tape_for(Scheme::cbo, p), 0, 0);
  CHECK(oracle::rel_err(out.x.point(0)[0], oracle::cbo_step(0.0, 0.5, 1.0, 0.01)) <= 1e-12);
  CHECK(oracle::rel_err(out.x.point(1)[0], oracle::cbo_step(1.0, 0.5, 1.0, 0.01)) <= 1e-12);
  CHECK(out.x.point(0)[0] == doctest::Approx(0.005).epsilon(1e-14));
  CHECK(out.x.point(1)[0] == doctest::Approx(0.995).epsilon(1e-14));
}

TEST_CASE("cbo fixed point and singleton")
{
  const Params p = reference(0.1, 4, 2);
  const auto obj = ackley(2, {0.0, 0.0});
  const Cloud same(2, {0.4, 0.9, 0.4, 0.9, 0.4, 0.9, 0.4, 0.9});
  const NoiseTape tape = tape_for(Scheme::cbo, p);
  SwarmState s = initial_state(Scheme::cbo, same);
  for (std::size_t n = 0; n < 20; ++n) s = cbo_step(std::move(s), p, obj, tape, 0, n);
  CHECK(s.x == same);
}

TEST_CASE("cbo memory step on a linear cost matches the quad oracle")
{
  Params p = quiet(0.1, 1, 0.0, 30.0);
  p.memory = memory(1.0, 0.0, 0.0, 0.0, 0.5, 30.0);
  const auto obj = testing::linear_unit();
  SwarmState s = initial_state(Scheme::cbo_mem, line({0.0}));
  s.y = line({1.0});
  const auto out = cbo_memory_step(s, p, obj, tape_for(Scheme::cbo_mem, p), 0, 0);
  const auto [xn, yn] = oracle::cbo_memory_linear(0.0, 1.0, 1.0, 1.0, 0.0, 0.5, 30.0, 0.01);
  CHECK(oracle::rel_err(out.x.point(0)[0], xn) <= 1e-12);
  CHECK(oracle::rel_err(out.y->point(0)[0], yn) <= 1e-12);
  CHECK(out.x.point(0)[0] == doctest::Approx(0.01).epsilon(1e-14));
  CHECK(out.y->point(0)[0] == doctest::Approx(1.00495).epsilon(1e-9));
}

TEST_CASE("memory switch")
{
  CHECK(memory_switch(30.0, 2.0, 2.0) == 0.0);
  CHECK(memory_switch(30.0, 0.01, 1.0) == doctest::Approx(std::tanh(-29.7)));
}

TEST_CASE("memory Y is frozen when X = Y or nu = 0")
{
  const auto obj = ackley(1, {0.0});
  Params p = reference(0.1, 5);
  p.memory = memory(1.0, 1.0, kSigma, kSigma, 0.5, 30.0);
  const Cloud x0 = line({-1.0, -0.3, 0.2, 0.8, 1.7});
  const NoiseTape tape = tape_for(Scheme::pso_mem, p);

  // X_{n+1} = Y_n happens only for a frozen particle; check the zero-gap rule on S directly
  // and the nu = 0 rule on full runs.
  p.memory->nu = 0.0;
  for (Scheme s : {Scheme::pso_mem, Scheme::cbo_mem}) {
    SwarmState st = initial_state(s, x0);
    for (std::size_t n = 0; n < 20; ++n) st = step(s, std::move(st), p, obj, tape, 0, n);
    CHECK(*st.y == x0);
    CHECK(st.x != x0);
  }
}

TEST_CASE("memory fixed point")
{
  const auto obj = ackley(2, {0.0, 0.0});
  Params p = reference(0.1, 3, 2);
  p.memory = memory(1.0, 1.0, kSigma, kSigma, 0.5, 30.0);
  const Cloud same(2, {0.5, 0.5, 0.5, 0.5, 0.5, 0.5});
  const NoiseTape tape = tape_for(Scheme::pso_mem, p);
  for (Scheme s : {Scheme::pso_mem, Scheme::cbo_mem}) {
    SwarmState st = initial_state(s, same);
    for (std::size_t n = 0; n < 10; ++n) st = step(s, std::move(st), p, obj, tape, 0, n);
    CHECK(st.x == same);
    CHECK(*st.y == same);
  }
}

TEST_CASE("single-particle memory drift splits freely between channels")
{
  const auto obj = ackley(1, {0.0});
  auto run_with = [&](double l1, double l2) {
    Params p = reference(0.2, 1);
    p.memory = memory(l1, l2, 0.0, 0.0, 0.5, 30.0);
    SwarmState st = initial_state(Scheme::pso_mem, line({0.4}), line({-1.0}));
    st.y = line({1.3});
    const NoiseTape tape = tape_for(Scheme::pso_mem, p);
    for (std::size_t n = 0; n < 25; ++n) st = pso_memory_step(std::move(st), p, obj, tape, 0, n);
    return st;
  };
  const auto a = run_with(0.7, 0.3);
  const auto b = run_with(1.0, 0.0);
  const auto c = run_with(0.0, 1.0);
  CHECK(a.x.point(0)[0] == doctest::Approx(b.x.point(0)[0]).epsilon(1e-13));
  CHECK(a.x.point(0)[0] == doctest::Approx(c.x.point(0)[0]).epsilon(1e-13));
  CHECK(a.y->point(0)[0] == doctest::Approx(c.y->point(0)[0]).epsilon(1e-13));
}

TEST_CASE("cbo memory degenerates to cbo over the frozen Y cloud")
{
  const auto obj = ackley(1, {0.0});
  Params p = reference(0.1, 6);
  p.sigma = 0.0;
  p.memory = memory(0.0, 1.0, 0.0, 0.0, 0.0, 30.0);
  const Cloud x0 = line({-1.2, -0.4, 0.1, 0.6, 1.1, 2.0});
  const Cloud y0 = line({0.9, -0.2, 1.5, -1.0, 0.3, 0.05});
  SwarmState st = initial_state(Scheme::cbo_mem, x0);
  st.y = y0;
  const auto ya = consensus_point(y0, obj, p.alpha);
  const NoiseTape tape = tape_for(Scheme::cbo_mem, p);
  st = cbo_memory_step(std::move(st), p, obj, tape, 0, 0);
  for (std::size_t i = 0; i < x0.size(); ++i) {
    const double want = x0.point(i)[0] + p.dt * p.memory->lambda2 * (ya[0] - x0.point(i)[0]);
    CHECK(st.x.point(i)[0] == doctest::Approx(want).epsilon(1e-14));
  }
  CHECK(*st.y == y0);
}

TEST_CASE("pso and cbo read the same tape entries")
{
  const auto obj = ackley(1, {0.0});
  const Params p = reference(0.1, 20);
  const NoiseTape tape = tape_for(Scheme::pso, p, 5);
  const Cloud x0 = initial_positions(3, 20, 1, Gaussian{});
  std::vector<NoiseDraw> a, b;
  StepOptions oa, ob;
  oa.draws = &a;
  ob.draws = &b;
  pso_step(initial_state(Scheme::pso, x0), p, obj, tape, 0, 3, oa);
  cbo_step(initial_state(Scheme::cbo, x0), p, obj, tape, 0, 3, ob);
  REQUIRE(a.size() == 20);
  CHECK(a == b);
}

TEST_CASE("run records every step")
{
  const auto obj = ackley(1, {0.0});
  Params p = reference(0.1, 50);
  p.T = p.dt;
  const NoiseTape tape = tape_for(Scheme::pso, p);
  const auto rec = run(Scheme::pso, p, obj, tape, 0, initial_state(Scheme::pso, initial_positions(1, 50, 1, Gaussian{})));
  CHECK(rec.times.size() == 2);
  CHECK(rec.x_moments.size() == 2);
  CHECK(rec.v_moments.size() == 2);
  CHECK(rec.y_moments.empty());
  CHECK(rec.consensus.size() == 2);
}

TEST_CASE("snapshots land on requested times")
{
  const auto obj = ackley(1, {0.0});
  const Params p = reference(0.1, 30);
  const NoiseTape tape = tape_for(Scheme::cbo, p);
  RunOptions ro;
  ro.snapshot_times = {0.0, 0.25, 1.0};
  const auto rec = run(Scheme::cbo, p, obj, tape, 0, initial_state(Scheme::cbo, initial_positions(2, 30, 1, Gaussian{})), ro);
  REQUIRE(rec.snapshots.size() == 3);
  CHECK(rec.snapshots[1].step == 25);
  CHECK(rec.snapshots[2].x == rec.final_state.x);
}

TEST_CASE("cbo without noise: best-cost consensus trajectory matches a scalar oracle")
{
  // Two particles, large alpha: X^alpha sits on the better particle, which
  // then stays put while the other contracts geometrically toward it.
  const auto obj = sphere(1, {0.0});
  Params p = quiet(0.1, 2, 1.0, 1e4);
  const NoiseTape tape = tape_for(Scheme::cbo, p);
  const auto rec = run(Scheme::cbo, p, obj, tape, 0, initial_state(Scheme::cbo, line({0.5, 2.0})));
  double other = 2.0;
  for (std::size_t j = 0; j <= rec.steps; ++j) {
    CHECK(rec.consensus_at(j)[0] == doctest::Approx(0.5).epsilon(1e-12));
    if (j > 0) other += p.dt * p.lambda * (0.5 - other);
  }
  CHECK(rec.final_state.x.point(1)[0] == doctest::Approx(other).epsilon(1e-12));
}

TEST_CASE("reference configuration at N = 1e4 runs with finite moments")
{
  const auto obj = ackley(1, {0.0});
  const Params p = reference(0.1, 10000);
  for (Scheme s : {Scheme::pso, Scheme::cbo}) {
    const NoiseTape tape = tape_for(s, p, 11);
    const auto rec = run(s, p, obj, tape, 0, initial_state(s, initial_positions(4, 10000, 1, Gaussian{})));
    for (const auto& m : rec.x_moments) CHECK(std::isfinite(m.m4));
  }
}

TEST_CASE("semi-implicit pso stays finite at small inertia")
{
  const auto obj = ackley(1, {0.0});
  const Params p = reference(1e-3, 2000);
  const NoiseTape tape = tape_for(Scheme::pso, p, 3);
  const auto rec = run(Scheme::pso, p, obj, tape, 0, initial_state(Scheme::pso, initial_positions(4, 2000, 1, Gaussian{})));
  for (const auto& m : rec.v_moments) CHECK(std::isfinite(m.m4));
}

TEST_CASE("runs are bit-identical across worker counts")
{
  const auto obj = ackley(2, {0.0, 0.0});
  Params p = reference(0.05, 300, 2);
  p.memory = memory(1.0, 1.0, kSigma, kSigma, 0.5, 30.0);
  for (Scheme s : {Scheme::pso, Scheme::cbo, Scheme::pso_mem, Scheme::cbo_mem}) {
    const NoiseTape tape = tape_for(s, p, 8);
    const SwarmState init = initial_state(s, initial_positions(6, 300, 2, Uniform{}));
    RunOptions one, four;
    one.workers = 1;
    four.workers = 4;
    const auto a = run(s, p, obj, tape, 0, init, one);
    const auto b = run(s, p, obj, tape, 0, init, four);
    CHECK(a.final_state.x == b.final_state.x);
    CHECK(a.consensus == b.consensus);
  }
}

TEST_CASE("non-finite state aborts with the step index")
{
  const Objective blowup(
      "blowup", 1, [](std::span<const double> x) { return x[0] > 1.5 ? std::nan("") : 0.0; }, {0.0}, 0.0, 1.0, 1.0,
      Box::cube(1, -3, 3));
  Params p = quiet(0.1, 2, 50.0, 0.0);
  p.dt = 0.01;
  const NoiseTape tape = tape_for(Scheme::cbo, p);
  try {
    run(Scheme::cbo, p, blowup, tape, 0, initial_state(Scheme::cbo, line({0.0, 2.0})));
    FAIL("expected an abort");
  } catch (const NumericalAbort& e) {
    CHECK(e.step() <= p.steps());
  }
}

TEST_CASE("step rejects mismatched states")
{
  const auto obj = ackley(1, {0.0});
  const Params p = reference(0.1, 2);
  const NoiseTape tape = tape_for(Scheme::pso, p);
  CHECK_THROWS(pso_step(initial_state(Scheme::cbo, line({0.0, 1.0})), p, obj, tape, 0, 0));
  CHECK_THROWS(pso_memory_step(initial_state(Scheme::pso_mem, line({0.0, 1.0})), p, obj, tape, 0, 0));
}
