#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace swarmlimit {

/// Axis-aligned box [lower_k, upper_k] on which objective metadata is certified.
struct Box
{
  std::vector<double> lower;
  std::vector<double> upper;

  static Box cube(std::size_t dim, double lo, double hi);
  bool contains(std::span<const double> x) const;
  std::size_t dim() const { return lower.size(); }
};

/// A cost function together with the bound and growth data the consensus
/// weights depend on: lower/upper bounds of the cost and the constant L of
/// |E(x) - E(y)| <= L (|x| + |y|) |x - y|, all valid on test_box.
class Objective
{
 public:
  using EvalFn = std::function<double(std::span<const double>)>;

  Objective(std::string name, std::size_t dim, EvalFn eval, std::vector<double> minimizer,
            double lower_bound, double upper_bound, double lipschitz_L, Box test_box);

  double operator()(std::span<const double> x) const { return eval_(x); }
  double eval(std::span<const double> x) const { return eval_(x); }

  const std::string& name() const { return name_; }
  std::size_t dim() const { return dim_; }
  const std::vector<double>& minimizer() const { return minimizer_; }
  double lower_bound() const { return lower_bound_; }
  double upper_bound() const { return upper_bound_; }
  double lipschitz_L() const { return lipschitz_L_; }
  const Box& test_box() const { return test_box_; }

 private:
  std::string name_;
  std::size_t dim_;
  EvalFn eval_;
  std::vector<double> minimizer_;
  double lower_bound_;
  double upper_bound_;
  double lipschitz_L_;
  Box test_box_;
};

/// Half-width of the certified box [-3, 3]^d shared by every benchmark.
inline constexpr double kTestBoxHalfWidth = 3.0;

Objective ackley(std::size_t dim, std::vector<double> shift);
Objective sphere(std::size_t dim, std::vector<double> shift);
Objective rastrigin(std::size_t dim, std::vector<double> shift);
Objective constant_objective(std::size_t dim, double value);

/// Looks up a benchmark by name ("ackley", "sphere", "rastrigin", "constant").
/// An empty shift means the origin.
Objective make_objective(std::string_view name, std::size_t dim, std::vector<double> shift = {});

/// exp(alpha * (upper_bound - lower_bound)). Throws std::overflow_error when
/// the exponent leaves the double range.
double c_alpha(const Objective& obj, double alpha);

/// Largest ratio |E(x)-E(y)| / ((|x|+|y|)|x-y|) over `pairs` uniform pairs in
/// `box`. Deterministic in `seed`.
double estimate_weighted_lipschitz(const Objective::EvalFn& eval, const Box& box,
                                   std::size_t pairs, std::uint64_t seed);

}  // namespace swarmlimit
