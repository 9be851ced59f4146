#include "swarmlimit/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <sstream>

#include "swarmlimit/config.hpp"
#include "swarmlimit/consensus.hpp"
#include "swarmlimit/csv.hpp"
#include "swarmlimit/experiments.hpp"

namespace swarmlimit {

namespace {

const std::vector<double> kDefaultLadder = {0.2, 0.1, 0.05, 0.025, 0.0125};
const std::vector<double> kDefaultAlphas = {1.0, 10.0, 100.0, 1000.0};

struct Flags
{
  std::string config;
  std::uint64_t seed = 0;
  std::string out;
  std::size_t replicates = 0;
  std::string m_ladder;
  std::string snapshot_times;
  std::string alphas;
  int workers = 0;
};

struct Overrides
{
  CLI::Option* seed = nullptr;
  CLI::Option* replicates = nullptr;
};

RunConfig effective_config(const Flags& f, const Overrides& o)
{
  RunConfig c = load_config(f.config);
  try {
    if (o.seed && o.seed->count()) c.seed = f.seed;
    if (o.replicates && o.replicates->count()) c.replicates = f.replicates;
    if (!f.out.empty()) c.out_path = f.out;
    if (!f.m_ladder.empty()) c.m_ladder = parse_real_list(f.m_ladder);
    if (!f.snapshot_times.empty()) c.snapshot_times = parse_real_list(f.snapshot_times);
    if (!f.alphas.empty()) c.alphas = parse_real_list(f.alphas);
    if (f.workers > 0) c.workers = f.workers;
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("command line: ") + e.what());
  }
  return c;
}

Objective objective_of(const RunConfig& c)
{
  try {
    return make_objective(c.objective, c.dim, c.shift);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("key 'objective': ") + e.what());
  }
}

std::string init_name(const InitialDistribution& d)
{
  if (const auto* g = std::get_if<Gaussian>(&d)) return "gaussian(" + format_real(g->mean) + ";" + format_real(g->var) + ")";
  if (const auto* u = std::get_if<Uniform>(&d)) return "uniform(" + format_real(u->a) + ";" + format_real(u->b) + ")";
  return "dirac(" + format_real(std::get<Dirac>(d).value) + ")";
}

CsvMeta common_meta(const char* command, const RunConfig& c)
{
  return {{"command", command},
          {"objective", c.objective},
          {"dim", std::to_string(c.dim)},
          {"scheme", std::string(to_string(c.scheme))},
          {"N", std::to_string(c.N)},
          {"dt", format_real(c.dt)},
          {"T", format_real(c.T)},
          {"init", init_name(c.init)}};
}

/// Renders into memory first so a failed run leaves no partial file.
void emit(const RunConfig& c, std::ostream& fallback, const std::function<void(std::ostream&)>& write)
{
  std::ostringstream buf;
  write(buf);
  if (c.out_path.empty() || c.out_path == "-") {
    fallback << buf.str();
    return;
  }
  std::ofstream file(c.out_path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open '" + c.out_path + "' for writing");
  file << buf.str();
  file.flush();
  if (!file) throw IoError("write to '" + c.out_path + "' failed");
}

int command_run(const RunConfig& c, std::ostream& out)
{
  const Params p = c.params(has_memory(c.scheme));
  const Objective obj = objective_of(c);
  const NoiseTape tape(c.seed, tape_layout(c.scheme, p, 1));
  RunOptions ro;
  ro.workers = c.workers;
  ro.snapshot_times = c.snapshot_times;
  const Cloud x0 = initial_positions(derive_seed(c.seed, 0), p.N, p.d, c.init);
  const RunRecord rec = run(c.scheme, p, obj, tape, 0, initial_state(c.scheme, x0), ro);
  auto meta = common_meta("run", c);
  meta.emplace_back("m", format_real(p.m));
  meta.emplace_back("seed", std::to_string(c.seed));
  meta.emplace_back("steps", std::to_string(rec.steps));
  emit(c, out, [&](std::ostream& o) { write_run_csv(o, rec, meta); });
  return kExitOk;
}

int command_limit_study(const RunConfig& c, std::ostream& out)
{
  LimitStudyConfig sc;
  sc.pair = has_memory(c.scheme) ? SchemePair::memory : SchemePair::plain;
  sc.base = c.params(sc.pair == SchemePair::memory);
  sc.m_ladder = c.m_ladder.empty() ? kDefaultLadder : c.m_ladder;
  sc.replicates = c.replicates;
  sc.init = c.init;
  sc.bins = c.bins;
  sc.workers = c.workers;
  try {
    sc.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  const StudyResult res = zero_inertia_study(sc, objective_of(c), c.seed);

  auto meta = common_meta("limit-study", c);
  meta.emplace_back("pair", sc.pair == SchemePair::memory ? "memory" : "plain");
  meta.emplace_back("gap", sc.pair == SchemePair::memory ? "paired_msq_gap_joint_xy" : "paired_msq_gap_x");
  meta.emplace_back("estimator", "replicates=" + std::to_string(sc.replicates));
  meta.emplace_back("sup", "every_step");
  meta.emplace_back("v0", "zero");
  emit(c, out, [&](std::ostream& o) { write_limit_study_csv(o, res, meta); });
  return kExitOk;
}

int command_compare(const RunConfig& c, std::ostream& out)
{
  const bool memory = has_memory(c.scheme);
  const Params base = c.params(memory);
  if (base.d != 1) throw ConfigError("key 'dim': compare requires dim = 1");
  const Objective obj = objective_of(c);
  CompareOptions co;
  co.init = c.init;
  co.pair = memory ? SchemePair::memory : SchemePair::plain;
  co.bins = c.bins;
  co.workers = c.workers;

  const std::vector<double> ms = c.m_ladder.empty() ? std::vector<double>{base.m} : c.m_ladder;
  std::vector<CompareRow> rows;
  for (double m : ms) {
    Params p = base;
    p.m = m;
    try {
      p.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    const auto part = compare_distributions(p, obj, c.seed, c.snapshot_times, co);
    rows.insert(rows.end(), part.begin(), part.end());
  }
  auto meta = common_meta("compare", c);
  meta.emplace_back("pair", memory ? "memory" : "plain");
  meta.emplace_back("estimator", "single_run");
  meta.emplace_back("marginal", "x");
  emit(c, out, [&](std::ostream& o) { write_compare_csv(o, rows, meta); });
  return kExitOk;
}

int command_laplace(const RunConfig& c, std::ostream& out)
{
  const Objective obj = objective_of(c);
  const Cloud cloud = initial_positions(derive_seed(c.seed, 0), c.N, c.dim, c.init);
  std::vector<LaplaceRow> rows;
  try {
    rows = laplace_sweep(cloud, obj, c.alphas.empty() ? kDefaultAlphas : c.alphas);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("alphas: ") + e.what());
  }
  auto meta = common_meta("laplace-check", c);
  meta.emplace_back("seed", std::to_string(c.seed));
  emit(c, out, [&](std::ostream& o) { write_laplace_csv(o, rows, meta); });
  return kExitOk;
}

std::string quoted(std::string s)
{
  for (auto& ch : s)
    if (ch == '"' || ch == '\n') ch = '\'';
  return "\"" + s + "\"";
}

int fail(std::ostream& err, int code, const char* kind, const std::string& message)
{
  err << "error: code=" << code << " kind=" << kind << " message=" << quoted(message) << "\n";
  return code;
}

}  // namespace

int cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
  CLI::App app{"Coupled PSO / CBO particle simulations and zero-inertia studies", "swarmlimit"};
  app.require_subcommand(1);

  Flags flags;
  using Handler = int (*)(const RunConfig&, std::ostream&);
  struct Sub
  {
    CLI::App* app;
    Handler handler;
    Overrides overrides;
  };
  std::vector<Sub> subs;
  const auto add = [&](const char* name, const char* help, Handler h, bool study, bool compare, bool laplace) {
    CLI::App* s = app.add_subcommand(name, help);
    s->add_option("--config", flags.config, "key = value configuration file")->required();
    Overrides o;
    o.seed = s->add_option("--seed", flags.seed, "override the config seed");
    s->add_option("--out", flags.out, "output CSV path ('-' for stdout)");
    s->add_option("--workers", flags.workers, "worker threads");
    if (study) {
      o.replicates = s->add_option("--replicates", flags.replicates, "replicates per inertia value");
    }
    if (study || compare) s->add_option("--m-ladder", flags.m_ladder, "inertia values, e.g. 0.2,0.1,0.05");
    if (compare || std::string(name) == "run")
      s->add_option("--snapshot-times", flags.snapshot_times, "times t1,t2,... to sample");
    if (laplace) s->add_option("--alphas", flags.alphas, "increasing alphas, e.g. 1,10,100,1000");
    subs.push_back({s, h, o});
  };
  add("run", "simulate one scheme and write per-step consensus and moments", command_run, false, false, false);
  add("limit-study", "coupled PSO(m) vs CBO mean-square gaps over an m ladder", command_limit_study, true, false,
      false);
  add("compare", "time series of W2 and KL between coupled PSO(m) and CBO clouds", command_compare, false, true,
      false);
  add("laplace-check", "Laplace-principle values over increasing alpha", command_laplace, false, false, true);

  std::vector<std::string> argv_store;
  argv_store.reserve(args.size() + 1);
  argv_store.emplace_back("swarmlimit");
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    return fail(err, kExitConfig, "usage", e.what());
  }

  for (const auto& s : subs) {
    if (!s.app->parsed()) continue;
    try {
      return s.handler(effective_config(flags, s.overrides), out);
    } catch (const ConfigError& e) {
      return fail(err, kExitConfig, "config", e.what());
    } catch (const IoError& e) {
      return fail(err, kExitIo, "io", e.what());
    } catch (const NumericalAbort& e) {
      return fail(err, kExitNumerical, "numerical", e.what());
    } catch (const std::invalid_argument& e) {
      return fail(err, kExitConfig, "config", e.what());
    } catch (const std::exception& e) {
      return fail(err, kExitNumerical, "runtime", e.what());
    }
  }
  return fail(err, kExitConfig, "usage", "no subcommand");
}

}  // namespace swarmlimit
