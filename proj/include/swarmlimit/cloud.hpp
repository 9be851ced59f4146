#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace swarmlimit {

/// A finite set of points in R^d stored row-major; carries uniform weights.
class Cloud
{
 public:
  Cloud() = default;

  Cloud(std::size_t count, std::size_t dim)
      : dim_(dim), coords_(count * dim, 0.0)
  {
    if (dim == 0) throw std::invalid_argument("cloud dimension must be positive");
  }

  Cloud(std::size_t dim, std::vector<double> coords)
      : dim_(dim), coords_(std::move(coords))
  {
    if (dim == 0) throw std::invalid_argument("cloud dimension must be positive");
    if (coords_.size() % dim != 0)
      throw std::invalid_argument("coordinate count is not a multiple of the dimension");
  }

  std::size_t size() const { return dim_ == 0 ? 0 : coords_.size() / dim_; }
  std::size_t dim() const { return dim_; }
  bool empty() const { return coords_.empty(); }

  std::span<const double> point(std::size_t i) const
  {
    return {coords_.data() + i * dim_, dim_};
  }
  std::span<double> point(std::size_t i) { return {coords_.data() + i * dim_, dim_}; }

  std::span<const double> coords() const { return coords_; }
  std::span<double> coords() { return coords_; }

  friend bool operator==(const Cloud&, const Cloud&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<double> coords_;
};

using EmpiricalMeasure = Cloud;
using SampleCloud = Cloud;

}  // namespace swarmlimit
