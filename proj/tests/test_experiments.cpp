#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <limits>

#include "swarmlimit/consensus.hpp"
#include "swarmlimit/experiments.hpp"
#include "swarmlimit/metrics.hpp"

using namespace swarmlimit;

namespace {

const double kSigma = 1.0 / std::sqrt(3.0);

Params reference(std::size_t N, std::size_t d = 1)
{
  Params p;
  p.lambda = 1.0;
  p.sigma = kSigma;
  p.alpha = 30.0;
  p.dt = 0.01;
  p.T = 1.0;
  p.N = N;
  p.d = d;
  return p;
}

LimitStudyConfig study(std::vector<double> ladder, std::size_t N, std::size_t R)
{
  LimitStudyConfig cfg;
  cfg.m_ladder = std::move(ladder);
  cfg.replicates = R;
  cfg.base = reference(N);
  return cfg;
}

}  // namespace

TEST_CASE("frozen systems give a zero gap")
{
  auto cfg = study({0.5}, 50, 3);
  cfg.base.sigma = 0.0;
  cfg.base.lambda = 0.0;
  const auto res = zero_inertia_study(cfg, ackley(1, {0.0}), 1);
  REQUIRE(res.rows.size() == 1);
  for (double g : res.rows[0].sup_gap) CHECK(g == 0.0);
  CHECK(res.rows[0].mean_gap == 0.0);
  CHECK(std::isnan(res.slope));
}

TEST_CASE("small study decreases with m and is deterministic")
{
  auto cfg = study({0.2, 0.1, 0.05}, 200, 4);
  const auto obj = ackley(1, {0.0});
  const auto a = zero_inertia_study(cfg, obj, 7);
  cfg.workers = 3;
  const auto b = zero_inertia_study(cfg, obj, 7);
  for (std::size_t j = 0; j < a.rows.size(); ++j) {
    CHECK(a.rows[j].sup_gap == b.rows[j].sup_gap);
    CHECK(a.rows[j].w2 == b.rows[j].w2);
    CHECK(a.rows[j].kl == b.rows[j].kl);
    CHECK(a.rows[j].mean_gap >= 0.0);
  }
  CHECK(a.rows[0].mean_gap > a.rows[1].mean_gap);
  CHECK(a.rows[1].mean_gap > a.rows[2].mean_gap);
  CHECK(a.slope > 0.7);
  CHECK(a.rows[0].w2.size() == a.times.size());
}

TEST_CASE("splitting a ladder reproduces the same rows")
{
  const auto obj = ackley(1, {0.0});
  const auto whole = zero_inertia_study(study({0.2, 0.1}, 100, 3), obj, 5);
  const auto first = zero_inertia_study(study({0.2}, 100, 3), obj, 5);
  const auto second = zero_inertia_study(study({0.1}, 100, 3), obj, 5);
  CHECK(whole.rows[0].sup_gap == first.rows[0].sup_gap);
  CHECK(whole.rows[1].sup_gap == second.rows[0].sup_gap);
}

TEST_CASE("memory study with Y pinned follows the plain ordering")
{
  const auto obj = ackley(1, {0.0});
  auto cfg = study({0.2, 0.1, 0.05}, 200, 4);
  cfg.pair = SchemePair::memory;
  cfg.base.memory = MemoryParams{0.5, 0.5, kSigma / std::sqrt(2.0), kSigma / std::sqrt(2.0), 0.0, 30.0};
  const auto mem = zero_inertia_study(cfg, obj, 3);
  CHECK(mem.rows[0].mean_gap > mem.rows[1].mean_gap);
  CHECK(mem.rows[1].mean_gap > mem.rows[2].mean_gap);
}

TEST_CASE("study validation")
{
  auto cfg = study({0.1, 0.2}, 10, 1);
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = study({0.1}, 10, 0);
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = study({}, 10, 1);
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = study({0.1}, 10, 1);
  cfg.pair = SchemePair::memory;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("loglog fit")
{
  const auto [s, c] = loglog_fit({1.0, 2.0, 4.0}, {3.0, 6.0, 12.0});
  CHECK(s == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(c == doctest::Approx(std::log(3.0)).epsilon(1e-14));
  CHECK(std::isnan(loglog_fit({1.0}, {1.0}).first));
  CHECK(std::isnan(loglog_fit({1.0, 2.0}, {0.0, 1.0}).first));
}

TEST_CASE("compare distributions")
{
  const auto obj = ackley(1, {0.0});
  Params p = reference(2000);
  p.m = 0.8;
  const auto big = compare_distributions(p, obj, 1, {});
  p.m = 0.001;
  const auto small = compare_distributions(p, obj, 1, {});
  CHECK(big.size() == p.steps() + 1);
  CHECK(time_mean_w2(small) < time_mean_w2(big));
  CHECK(big.front().w2 == 0.0);
  CHECK(big.front().bins == default_bins(2000));

  CompareOptions uo;
  uo.init = Uniform{-3.0, 3.0};
  p.m = 0.8;
  const double wu_big = time_mean_w2(compare_distributions(p, obj, 2, {}, uo));
  p.m = 0.001;
  const double wu_small = time_mean_w2(compare_distributions(p, obj, 2, {}, uo));
  CHECK(wu_small < wu_big);

  p.sigma = 0.0;
  p.lambda = 0.0;
  for (const auto& row : compare_distributions(p, obj, 3, {0.5, 1.0})) {
    CHECK(row.w2 == 0.0);
    CHECK(row.kl == doctest::Approx(0.0).epsilon(1e-8));
  }
  Params p2 = reference(10, 2);
  CHECK_THROWS(compare_distributions(p2, ackley(2, {0.0, 0.0}), 1, {}));
}

TEST_CASE("optimize")
{
  Params p = reference(200, 2);
  p.sigma = 0.0;
  const auto flat = constant_objective(2, 1.0);
  const auto init = initial_positions(derive_seed(4, 0), 200, 2, Gaussian{});
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < init.size(); ++i) {
    mx += init.point(i)[0];
    my += init.point(i)[1];
  }
  const auto res = optimize(Scheme::cbo, p, flat, 4, 1.0);
  CHECK(res.consensus[0] == doctest::Approx(mx / 200).epsilon(1e-10));
  CHECK(res.consensus[1] == doctest::Approx(my / 200).epsilon(1e-10));
  CHECK(res.mean_speed == 0.0);

  Params one = reference(1, 1);
  const auto single = optimize(Scheme::cbo, one, ackley(1, {0.0}), 9, 2.0);
  CHECK(single.consensus[0] == initial_positions(derive_seed(9, 0), 1, 1, Gaussian{}).point(0)[0]);
}

TEST_CASE("laplace sweep")
{
  const auto obj = ackley(1, {0.0});
  const Cloud c = initial_positions(1, 100, 1, Uniform{});
  const auto rows = laplace_sweep(c, obj, {1.0, 10.0, 100.0, 1000.0});
  for (std::size_t j = 1; j < rows.size(); ++j) CHECK(rows[j].gap <= rows[j - 1].gap);
  CHECK(rows.back().gap <= 1e-2);

  const Cloud single(1, std::vector<double>{0.4});
  for (const auto& r : laplace_sweep(single, obj, {1.0, 30.0, 500.0}))
    CHECK(r.value == doctest::Approx(obj(std::vector<double>{0.4})).epsilon(1e-15));

  CHECK_THROWS_AS(laplace_sweep(c, obj, {1.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(laplace_sweep(c, obj, {0.0, 1.0}), std::invalid_argument);
}

TEST_CASE("aborts carry the failing cell")
{
  const Objective nan_obj(
      "nan", 1, [](std::span<const double> x) { return x[0] > 50.0 ? std::numeric_limits<double>::quiet_NaN() : 0.0; },
      {0.0}, 0.0, 1.0, 1.0, Box::cube(1, -3, 3));
  auto cfg = study({0.2}, 20, 2);
  cfg.base.sigma = 50.0;
  cfg.init = Uniform{40.0, 49.0};
  try {
    zero_inertia_study(cfg, nan_obj, 1);
    FAIL("expected a failure");
  } catch (const RunFailure& e) {
    CHECK(e.replicate() < 2);
  }
}
