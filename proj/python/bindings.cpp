#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "swarmlimit/cli.hpp"
#include "swarmlimit/config.hpp"
#include "swarmlimit/consensus.hpp"
#include "swarmlimit/experiments.hpp"
#include "swarmlimit/metrics.hpp"

#include <sstream>

namespace py = pybind11;
using namespace swarmlimit;

namespace {

using Points = std::vector<std::vector<double>>;

Cloud to_cloud(const Points& pts)
{
  if (pts.empty()) throw std::invalid_argument("empty point list");
  const std::size_t d = pts.front().size();
  std::vector<double> flat;
  flat.reserve(pts.size() * d);
  for (const auto& p : pts) {
    if (p.size() != d) throw std::invalid_argument("ragged point list");
    flat.insert(flat.end(), p.begin(), p.end());
  }
  return Cloud(d, std::move(flat));
}

/// 1-D samples given as a flat list.
Cloud to_samples(const std::vector<double>& xs) { return Cloud(1, xs); }

Points to_points(const Cloud& c)
{
  Points out;
  out.reserve(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    auto p = c.point(i);
    out.emplace_back(p.begin(), p.end());
  }
  return out;
}

InitialDistribution parse_init(const std::string& spec)
{
  // Reuses the config grammar, e.g. "gaussian 0 1".
  std::string text = "objective=constant\ndim=1\nN=1\ndt=1\nT=1\nlambda=0\nsigma=0\nalpha=1\nseed=0\ninit=" + spec + "\n";
  return parse_config(text).init;
}

Params make_params(double m, double lambda, double sigma, double alpha, double dt, double T, std::size_t N,
                   std::size_t d, std::optional<MemoryParams> memory)
{
  Params p;
  p.m = m;
  p.lambda = lambda;
  p.sigma = sigma;
  p.alpha = alpha;
  p.dt = dt;
  p.T = T;
  p.N = N;
  p.d = d;
  p.memory = memory;
  p.validate();
  return p;
}

}  // namespace

PYBIND11_MODULE(_core, mod)
{
  mod.doc() = "Coupled PSO / CBO particle simulations";

  py::register_exception<NumericalAbort>(mod, "NumericalAbort", PyExc_ArithmeticError);
  py::register_exception<ConfigError>(mod, "ConfigError", PyExc_ValueError);

  py::class_<Objective>(mod, "Objective")
      .def("__call__", [](const Objective& o, const std::vector<double>& x) {
        if (x.size() != o.dim()) throw std::invalid_argument("dimension mismatch");
        return o(x);
      })
      .def_property_readonly("name", &Objective::name)
      .def_property_readonly("dim", &Objective::dim)
      .def_property_readonly("minimizer", &Objective::minimizer)
      .def_property_readonly("lower_bound", &Objective::lower_bound)
      .def_property_readonly("upper_bound", &Objective::upper_bound)
      .def_property_readonly("lipschitz_L", &Objective::lipschitz_L);

  mod.def("make_objective", &make_objective, py::arg("name"), py::arg("dim"),
          py::arg("shift") = std::vector<double>{});

  mod.def(
      "consensus_point",
      [](const Points& pts, const Objective& obj, double alpha) { return consensus_point(to_cloud(pts), obj, alpha); },
      py::arg("points"), py::arg("objective"), py::arg("alpha"));
  mod.def(
      "laplace_value",
      [](const Points& pts, const Objective& obj, double alpha) { return laplace_value(to_cloud(pts), obj, alpha); },
      py::arg("points"), py::arg("objective"), py::arg("alpha"));

  mod.def(
      "initial_positions",
      [](std::uint64_t seed, std::size_t count, std::size_t dim, const std::string& init) {
        return to_points(initial_positions(seed, count, dim, parse_init(init)));
      },
      py::arg("seed"), py::arg("count"), py::arg("dim"), py::arg("init") = "gaussian 0 1");

  mod.def(
      "wasserstein2_1d",
      [](const std::vector<double>& a, const std::vector<double>& b) {
        return wasserstein2_1d(to_samples(a), to_samples(b));
      },
      py::arg("a"), py::arg("b"));
  mod.def(
      "kl_histogram",
      [](const std::vector<double>& a, const std::vector<double>& b, std::size_t bins) {
        return kl_histogram(to_samples(a), to_samples(b), bins);
      },
      py::arg("a"), py::arg("b"), py::arg("bins"));
  mod.def(
      "paired_msq_gap", [](const Points& a, const Points& b) { return paired_msq_gap(to_cloud(a), to_cloud(b)); },
      py::arg("a"), py::arg("b"));
  mod.def(
      "empirical_moments",
      [](const Points& a) {
        const Moments mo = empirical_moments(to_cloud(a));
        return std::make_pair(mo.m2, mo.m4);
      },
      py::arg("points"));

  py::class_<MemoryParams>(mod, "MemoryParams")
      .def(py::init([](double l1, double l2, double s1, double s2, double nu, double beta) {
             return MemoryParams{l1, l2, s1, s2, nu, beta};
           }),
           py::arg("lambda1") = 1.0, py::arg("lambda2") = 1.0, py::arg("sigma1") = 0.0, py::arg("sigma2") = 0.0,
           py::arg("nu") = 0.5, py::arg("beta") = 30.0)
      .def_readwrite("lambda1", &MemoryParams::lambda1)
      .def_readwrite("lambda2", &MemoryParams::lambda2)
      .def_readwrite("sigma1", &MemoryParams::sigma1)
      .def_readwrite("sigma2", &MemoryParams::sigma2)
      .def_readwrite("nu", &MemoryParams::nu)
      .def_readwrite("beta", &MemoryParams::beta);

  py::class_<Params>(mod, "Params")
      .def(py::init(&make_params), py::arg("m") = 0.1, py::arg("lambda_") = 1.0, py::arg("sigma") = 0.0,
           py::arg("alpha") = 30.0, py::arg("dt") = 0.01, py::arg("T") = 1.0, py::arg("N") = 1, py::arg("d") = 1,
           py::arg("memory") = std::nullopt)
      .def_readwrite("m", &Params::m)
      .def_readwrite("lambda_", &Params::lambda)
      .def_readwrite("sigma", &Params::sigma)
      .def_readwrite("alpha", &Params::alpha)
      .def_readwrite("dt", &Params::dt)
      .def_readwrite("T", &Params::T)
      .def_readwrite("N", &Params::N)
      .def_readwrite("d", &Params::d)
      .def_readwrite("memory", &Params::memory)
      .def_property_readonly("gamma", &Params::gamma)
      .def_property_readonly("steps", &Params::steps);

  mod.def(
      "run",
      [](const std::string& scheme_name, const Params& p, const Objective& obj, std::uint64_t seed,
         const std::string& init, int workers) {
        const Scheme scheme = parse_scheme(scheme_name);
        const NoiseTape tape(seed, tape_layout(scheme, p, 1));
        RunOptions ro;
        ro.workers = workers;
        const Cloud x0 = initial_positions(derive_seed(seed, 0), p.N, p.d, parse_init(init));
        RunRecord rec;
        {
          py::gil_scoped_release release;
          rec = run(scheme, p, obj, tape, 0, initial_state(scheme, x0), ro);
        }
        std::vector<std::vector<double>> consensus;
        std::vector<std::pair<double, double>> xm;
        for (std::size_t j = 0; j < rec.times.size(); ++j) {
          auto c = rec.consensus_at(j);
          consensus.emplace_back(c.begin(), c.end());
          xm.emplace_back(rec.x_moments[j].m2, rec.x_moments[j].m4);
        }
        py::dict out;
        out["times"] = rec.times;
        out["consensus"] = consensus;
        out["x_moments"] = xm;
        out["final_x"] = to_points(rec.final_state.x);
        return out;
      },
      py::arg("scheme"), py::arg("params"), py::arg("objective"), py::arg("seed"), py::arg("init") = "gaussian 0 1",
      py::arg("workers") = 1);

  mod.def(
      "zero_inertia_study",
      [](const std::vector<double>& ladder, const Params& base, const Objective& obj, std::uint64_t seed,
         std::size_t replicates, bool memory, const std::string& init, int workers) {
        LimitStudyConfig cfg;
        cfg.m_ladder = ladder;
        cfg.base = base;
        cfg.replicates = replicates;
        cfg.pair = memory ? SchemePair::memory : SchemePair::plain;
        cfg.init = parse_init(init);
        cfg.workers = workers;
        cfg.validate();
        StudyResult res;
        {
          py::gil_scoped_release release;
          res = zero_inertia_study(cfg, obj, seed);
        }
        std::vector<double> mean_gap;
        for (const auto& row : res.rows) mean_gap.push_back(row.mean_gap);
        py::dict out;
        out["m"] = ladder;
        out["mean_gap"] = mean_gap;
        out["slope"] = res.slope;
        out["intercept"] = res.intercept;
        return out;
      },
      py::arg("m_ladder"), py::arg("base"), py::arg("objective"), py::arg("seed"), py::arg("replicates") = 20,
      py::arg("memory") = false, py::arg("init") = "gaussian 0 1", py::arg("workers") = 1);

  mod.def(
      "compare_distributions",
      [](const Params& p, const Objective& obj, std::uint64_t seed, const std::vector<double>& times,
         std::size_t bins) {
        CompareOptions co;
        co.bins = bins;
        std::vector<CompareRow> rows;
        {
          py::gil_scoped_release release;
          rows = compare_distributions(p, obj, seed, times, co);
        }
        std::vector<std::tuple<double, double, double>> out;
        for (const auto& r : rows) out.emplace_back(r.t, r.w2, r.kl);
        return out;
      },
      py::arg("params"), py::arg("objective"), py::arg("seed"), py::arg("snapshot_times") = std::vector<double>{},
      py::arg("bins") = 0);

  mod.def(
      "optimize",
      [](const std::string& scheme_name, const Params& p, const Objective& obj, std::uint64_t seed, double T,
         const std::string& init) {
        OptimizeResult r;
        const InitialDistribution dist = parse_init(init);
        {
          py::gil_scoped_release release;
          r = optimize(parse_scheme(scheme_name), p, obj, seed, T, dist);
        }
        return std::make_pair(r.consensus, r.mean_speed);
      },
      py::arg("scheme"), py::arg("params"), py::arg("objective"), py::arg("seed"), py::arg("T"),
      py::arg("init") = "gaussian 0 1");

  mod.def(
      "laplace_sweep",
      [](const Points& pts, const Objective& obj, const std::vector<double>& alphas) {
        std::vector<std::tuple<double, double, double>> out;
        for (const auto& r : laplace_sweep(to_cloud(pts), obj, alphas)) out.emplace_back(r.alpha, r.value, r.gap);
        return out;
      },
      py::arg("points"), py::arg("objective"), py::arg("alphas"));

  mod.def(
      "cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = cli(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"));
}
