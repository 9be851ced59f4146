#include "swarmlimit/consensus.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace swarmlimit {

std::vector<double> evaluate_costs(const Cloud& cloud, const Objective& obj)
{
  if (cloud.dim() != obj.dim()) throw std::invalid_argument("cloud and objective dimensions differ");
  std::vector<double> costs(cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) costs[i] = obj(cloud.point(i));
  return costs;
}

std::vector<double> consensus_point(const Cloud& cloud, const Objective& obj, double alpha)
{
  const auto costs = evaluate_costs(cloud, obj);
  return consensus_point(cloud, costs, alpha);
}

std::vector<double> consensus_point(const Cloud& cloud, std::span<const double> costs, double alpha)
{
  if (cloud.empty()) throw std::invalid_argument("consensus of an empty cloud");
  if (costs.size() != cloud.size()) throw std::invalid_argument("one cost per point required");
  if (!(alpha >= 0.0)) throw std::invalid_argument("alpha must be nonnegative");

  const double best = *std::min_element(costs.begin(), costs.end());
  const std::size_t d = cloud.dim();

  // Accumulate offsets from the per-coordinate minimum; the clamp only ever
  // removes rounding excess, since the exact average lies in the hull.
  std::vector<double> lo(cloud.point(0).begin(), cloud.point(0).end());
  std::vector<double> hi = lo;
  for (std::size_t i = 1; i < cloud.size(); ++i) {
    const auto x = cloud.point(i);
    for (std::size_t k = 0; k < d; ++k) {
      lo[k] = std::min(lo[k], x[k]);
      hi[k] = std::max(hi[k], x[k]);
    }
  }

  std::vector<double> num(d, 0.0);
  double den = 0.0;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const double w = std::exp(-alpha * (costs[i] - best));
    den += w;
    const auto x = cloud.point(i);
    for (std::size_t k = 0; k < d; ++k) num[k] += w * (x[k] - lo[k]);
  }
  for (std::size_t k = 0; k < d; ++k) num[k] = std::clamp(lo[k] + num[k] / den, lo[k], hi[k]);
  return num;
}

double laplace_value(const Cloud& cloud, const Objective& obj, double alpha)
{
  const auto costs = evaluate_costs(cloud, obj);
  return laplace_value(costs, alpha);
}

double laplace_value(std::span<const double> costs, double alpha)
{
  if (costs.empty()) throw std::invalid_argument("laplace value of an empty cloud");
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  const double best = *std::min_element(costs.begin(), costs.end());
  double mean = 0.0;
  for (double c : costs) mean += std::exp(-alpha * (c - best));
  mean /= static_cast<double>(costs.size());
  return best - std::log(mean) / alpha;
}

}  // namespace swarmlimit
