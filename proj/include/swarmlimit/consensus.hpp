#pragma once

#include <span>
#include <vector>

#include "swarmlimit/cloud.hpp"
#include "swarmlimit/objectives.hpp"

namespace swarmlimit {

/// Cost of every point of the cloud, in index order.
std::vector<double> evaluate_costs(const Cloud& cloud, const Objective& obj);

/// Weighted average sum_i x_i w_i / sum_i w_i with w_i = exp(-alpha E(x_i)).
/// The weights are shifted by min_j E(x_j) before exponentiation, so the
/// denominator is at least 1 and no term underflows to an all-zero sum.
std::vector<double> consensus_point(const Cloud& cloud, const Objective& obj, double alpha);

/// Same, with the costs of the points already evaluated.
std::vector<double> consensus_point(const Cloud& cloud, std::span<const double> costs, double alpha);

/// -(1/alpha) log((1/N) sum_i exp(-alpha E(x_i))), evaluated with the same
/// minimum shift. Tends to min_i E(x_i) as alpha grows.
double laplace_value(const Cloud& cloud, const Objective& obj, double alpha);
double laplace_value(std::span<const double> costs, double alpha);

}  // namespace swarmlimit
