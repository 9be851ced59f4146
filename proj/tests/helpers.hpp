#pragma once

#include <span>
#include <vector>

#include "swarmlimit/cloud.hpp"
#include "swarmlimit/objectives.hpp"

namespace testing {

/// E(x) = x on [0, 1] (one dimension).
inline swarmlimit::Objective linear_unit()
{
  return swarmlimit::Objective(
      "linear", 1, [](std::span<const double> x) { return x[0]; }, {0.0}, 0.0, 1.0, 1.0,
      swarmlimit::Box{{0.0}, {1.0}});
}

inline swarmlimit::Cloud line(std::vector<double> xs)
{
  return swarmlimit::Cloud(1, std::move(xs));
}

}  // namespace testing
