#include "swarmlimit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace swarmlimit {

namespace {

void require_paired(const SampleCloud& a, const SampleCloud& b)
{
  if (a.size() != b.size()) throw std::invalid_argument("clouds differ in size");
  if (a.dim() != b.dim()) throw std::invalid_argument("clouds differ in dimension");
  if (a.empty()) throw std::invalid_argument("empty cloud");
}

void require_1d(const SampleCloud& a)
{
  if (a.dim() != 1) throw std::invalid_argument("one-dimensional cloud required");
}

double squared_distance(std::span<const double> x, std::span<const double> y)
{
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) s += (x[k] - y[k]) * (x[k] - y[k]);
  return s;
}

}  // namespace

Moments empirical_moments(const SampleCloud& a)
{
  if (a.empty()) throw std::invalid_argument("moments of an empty cloud");
  double m2 = 0.0, m4 = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double sq = 0.0;
    for (double c : a.point(i)) sq += c * c;
    m2 += sq;
    m4 += sq * sq;
  }
  const double n = static_cast<double>(a.size());
  return {m2 / n, m4 / n};
}

double wasserstein2_1d(const SampleCloud& a, const SampleCloud& b)
{
  require_1d(a);
  require_paired(a, b);
  std::vector<double> sa(a.coords().begin(), a.coords().end());
  std::vector<double> sb(b.coords().begin(), b.coords().end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  double s = 0.0;
  for (std::size_t i = 0; i < sa.size(); ++i) s += (sa[i] - sb[i]) * (sa[i] - sb[i]);
  return std::sqrt(s / static_cast<double>(sa.size()));
}

double paired_msq_gap(const SampleCloud& a, const SampleCloud& b)
{
  require_paired(a, b);
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += squared_distance(a.point(i), b.point(i));
  return s / static_cast<double>(a.size());
}

double paired_msq_gap(const SampleCloud& ax, const SampleCloud& ay, const SampleCloud& bx,
                      const SampleCloud& by)
{
  require_paired(ax, bx);
  require_paired(ay, by);
  if (ax.size() != ay.size()) throw std::invalid_argument("position and memory clouds differ in size");
  double s = 0.0;
  for (std::size_t i = 0; i < ax.size(); ++i)
    s += squared_distance(ax.point(i), bx.point(i)) + squared_distance(ay.point(i), by.point(i));
  return s / static_cast<double>(ax.size());
}

double kl_from_masses(std::span<const double> p, std::span<const double> q)
{
  if (p.size() != q.size() || p.empty()) throw std::invalid_argument("mass vectors must match in length");
  const auto smooth = [](std::span<const double> m) {
    double total = 0.0;
    for (double v : m) total += v + kKlSmoothing;
    std::vector<double> out(m.size());
    for (std::size_t k = 0; k < m.size(); ++k) out[k] = (m[k] + kKlSmoothing) / total;
    return out;
  };
  const auto ps = smooth(p);
  const auto qs = smooth(q);
  double kl = 0.0;
  for (std::size_t k = 0; k < ps.size(); ++k) kl += ps[k] * std::log(ps[k] / qs[k]);
  // Gibbs' inequality; a negative sum is rounding.
  return std::max(kl, 0.0);
}

double kl_histogram(const SampleCloud& a, const SampleCloud& b, std::size_t bins)
{
  require_1d(a);
  require_1d(b);
  if (a.empty() || b.empty()) throw std::invalid_argument("empty cloud");
  if (bins < 2) throw std::invalid_argument("at least two bins required");

  const auto ca = a.coords();
  const auto cb = b.coords();
  const double lo = std::min(*std::min_element(ca.begin(), ca.end()), *std::min_element(cb.begin(), cb.end()));
  const double hi = std::max(*std::max_element(ca.begin(), ca.end()), *std::max_element(cb.begin(), cb.end()));
  if (!(hi > lo)) return 0.0;

  const auto histogram = [&](std::span<const double> xs) {
    std::vector<double> mass(bins, 0.0);
    const double scale = static_cast<double>(bins) / (hi - lo);
    for (double x : xs) {
      auto k = static_cast<std::size_t>((x - lo) * scale);
      mass[std::min(k, bins - 1)] += 1.0;
    }
    for (double& m : mass) m /= static_cast<double>(xs.size());
    return mass;
  };
  return kl_from_masses(histogram(ca), histogram(cb));
}

std::size_t default_bins(std::size_t n)
{
  auto b = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n))));
  while (b * b < n) ++b;
  while (b > 1 && (b - 1) * (b - 1) >= n) --b;
  return std::max<std::size_t>(b, 2);
}

}  // namespace swarmlimit
