#include "swarmlimit/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace swarmlimit {

namespace {

const std::set<std::string, std::less<>> kKnownKeys = {
    "scheme", "objective", "dim", "shift", "N", "dt", "T", "m", "lambda", "sigma", "alpha",
    "lambda1", "lambda2", "sigma1", "sigma2", "nu", "beta", "init", "seed", "replicates",
    "out_path", "m_ladder", "snapshot_times", "alphas", "workers", "bins"};

const char* const kRequiredKeys[] = {"objective", "dim", "N", "dt", "T", "lambda", "sigma",
                                     "alpha", "init", "seed"};

std::string_view trim(std::string_view s)
{
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_real(std::string_view key, std::string_view text)
{
  text = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
    throw ConfigError("key '" + std::string(key) + "': '" + std::string(text) + "' is not a real number");
  return v;
}

template <class Int>
Int parse_integer(std::string_view key, std::string_view text)
{
  text = trim(text);
  Int v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
    throw ConfigError("key '" + std::string(key) + "': '" + std::string(text) + "' is not an integer");
  return v;
}

std::vector<double> parse_list(std::string_view key, std::string_view text)
{
  std::vector<double> out;
  text = trim(text);
  if (text.empty()) return out;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    out.push_back(parse_real(key, text.substr(start, comma == std::string_view::npos ? comma : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

InitialDistribution parse_init(std::string_view text)
{
  std::string norm(text);
  std::replace_if(norm.begin(), norm.end(), [](char c) { return c == ',' || c == '(' || c == ')'; }, ' ');
  std::istringstream in(norm);
  std::string kind;
  std::vector<std::string> args;
  in >> kind;
  for (std::string a; in >> a;) args.push_back(a);

  const auto arg = [&](std::size_t j) { return parse_real("init", args[j]); };
  const auto expect = [&](std::size_t n) {
    if (args.size() != n)
      throw ConfigError("key 'init': " + kind + " takes " + std::to_string(n) + " parameter(s)");
  };
  if (kind == "gaussian") {
    expect(2);
    return Gaussian{arg(0), arg(1)};
  }
  if (kind == "uniform") {
    expect(2);
    return Uniform{arg(0), arg(1)};
  }
  if (kind == "dirac") {
    expect(1);
    return Dirac{arg(0)};
  }
  throw ConfigError("key 'init': unknown distribution '" + kind + "'");
}

std::string join_list(const std::vector<double>& v)
{
  std::string s;
  for (std::size_t j = 0; j < v.size(); ++j) {
    if (j) s += ',';
    s += format_real(v[j]);
  }
  return s;
}

std::string init_text(const InitialDistribution& d)
{
  if (const auto* g = std::get_if<Gaussian>(&d)) return "gaussian " + format_real(g->mean) + " " + format_real(g->var);
  if (const auto* u = std::get_if<Uniform>(&d)) return "uniform " + format_real(u->a) + " " + format_real(u->b);
  return "dirac " + format_real(std::get<Dirac>(d).value);
}

}  // namespace

std::string format_real(double v)
{
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<double> parse_real_list(std::string_view text)
{
  return parse_list("list", text);
}

RunConfig parse_config(std::string_view text)
{
  std::map<std::string, std::string, std::less<>> kv;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (!kKnownKeys.count(key)) throw ConfigError("unknown key '" + key + "'");
    if (!kv.emplace(key, value).second) throw ConfigError("duplicate key '" + key + "'");
  }
  for (const char* key : kRequiredKeys)
    if (!kv.count(key)) throw ConfigError(std::string("missing required key '") + key + "'");

  RunConfig c;
  const auto has = [&](const char* k) { return kv.count(k) > 0; };
  const auto real = [&](const char* k) { return parse_real(k, kv.at(k)); };
  const auto count = [&](const char* k) { return parse_integer<std::size_t>(k, kv.at(k)); };

  try {
    if (has("scheme")) c.scheme = parse_scheme(kv.at("scheme"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("key 'scheme': ") + e.what());
  }
  c.objective = kv.at("objective");
  c.dim = count("dim");
  if (has("shift")) c.shift = parse_list("shift", kv.at("shift"));
  c.N = count("N");
  c.dt = real("dt");
  c.T = real("T");
  if (has("m")) c.m = real("m");
  c.lambda = real("lambda");
  c.sigma = real("sigma");
  c.alpha = real("alpha");
  if (has("lambda1")) c.lambda1 = real("lambda1");
  if (has("lambda2")) c.lambda2 = real("lambda2");
  if (has("sigma1")) c.sigma1 = real("sigma1");
  if (has("sigma2")) c.sigma2 = real("sigma2");
  if (has("nu")) c.nu = real("nu");
  if (has("beta")) c.beta = real("beta");
  c.init = parse_init(kv.at("init"));
  c.seed = parse_integer<std::uint64_t>("seed", kv.at("seed"));
  if (has("replicates")) c.replicates = count("replicates");
  if (has("out_path")) c.out_path = kv.at("out_path");
  if (has("m_ladder")) c.m_ladder = parse_list("m_ladder", kv.at("m_ladder"));
  if (has("snapshot_times")) c.snapshot_times = parse_list("snapshot_times", kv.at("snapshot_times"));
  if (has("alphas")) c.alphas = parse_list("alphas", kv.at("alphas"));
  if (has("workers")) c.workers = parse_integer<int>("workers", kv.at("workers"));
  if (has("bins")) c.bins = count("bins");

  if (c.dim == 0) throw ConfigError("key 'dim': must be positive");
  if (c.N == 0) throw ConfigError("key 'N': must be positive");
  if (!c.shift.empty() && c.shift.size() != c.dim)
    throw ConfigError("key 'shift': expected " + std::to_string(c.dim) + " components");
  if (c.workers < 1) throw ConfigError("key 'workers': must be positive");
  return c;
}

RunConfig load_config(const std::string& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& c)
{
  std::ostringstream out;
  const auto put = [&](const char* k, const std::string& v) { out << k << " = " << v << "\n"; };
  const auto put_opt = [&](const char* k, const std::optional<double>& v) {
    if (v) put(k, format_real(*v));
  };
  put("scheme", std::string(to_string(c.scheme)));
  put("objective", c.objective);
  put("dim", std::to_string(c.dim));
  if (!c.shift.empty()) put("shift", join_list(c.shift));
  put("N", std::to_string(c.N));
  put("dt", format_real(c.dt));
  put("T", format_real(c.T));
  put("m", format_real(c.m));
  put("lambda", format_real(c.lambda));
  put("sigma", format_real(c.sigma));
  put("alpha", format_real(c.alpha));
  put_opt("lambda1", c.lambda1);
  put_opt("lambda2", c.lambda2);
  put_opt("sigma1", c.sigma1);
  put_opt("sigma2", c.sigma2);
  put_opt("nu", c.nu);
  put_opt("beta", c.beta);
  put("init", init_text(c.init));
  put("seed", std::to_string(c.seed));
  put("replicates", std::to_string(c.replicates));
  if (!c.out_path.empty()) put("out_path", c.out_path);
  if (!c.m_ladder.empty()) put("m_ladder", join_list(c.m_ladder));
  if (!c.snapshot_times.empty()) put("snapshot_times", join_list(c.snapshot_times));
  if (!c.alphas.empty()) put("alphas", join_list(c.alphas));
  put("workers", std::to_string(c.workers));
  put("bins", std::to_string(c.bins));
  return out.str();
}

Params RunConfig::params(bool need_memory) const
{
  Params p;
  p.m = m;
  p.lambda = lambda;
  p.sigma = sigma;
  p.alpha = alpha;
  p.dt = dt;
  p.T = T;
  p.N = N;
  p.d = dim;
  const std::pair<const char*, const std::optional<double>*> mem[] = {
      {"lambda1", &lambda1}, {"lambda2", &lambda2}, {"sigma1", &sigma1},
      {"sigma2", &sigma2},   {"nu", &nu},           {"beta", &beta}};
  const bool complete = std::all_of(std::begin(mem), std::end(mem), [](const auto& e) { return e.second->has_value(); });
  if (need_memory && !complete) {
    for (const auto& [key, value] : mem)
      if (!value->has_value()) throw ConfigError(std::string("missing required key '") + key + "'");
  }
  if (complete) p.memory = MemoryParams{*lambda1, *lambda2, *sigma1, *sigma2, *nu, *beta};
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return p;
}

}  // namespace swarmlimit
