#include "swarmlimit/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <utility>

#include "benchmark_formulas.hpp"

namespace swarmlimit {

namespace {

struct TabulatedConstant
{
  std::size_t dim;
  double lipschitz;
};

constexpr TabulatedConstant kAckleyLipschitz[] = {
#include "ackley_lipschitz.inc"
};

std::vector<double> checked_shift(std::size_t dim, std::vector<double> shift)
{
  if (dim == 0) throw std::invalid_argument("objective dimension must be positive");
  if (shift.empty()) shift.assign(dim, 0.0);
  if (shift.size() != dim)
    throw std::invalid_argument("shift has " + std::to_string(shift.size())
                                + " components, expected " + std::to_string(dim));
  return shift;
}

bool is_origin(const std::vector<double>& v)
{
  return std::all_of(v.begin(), v.end(), [](double c) { return c == 0.0; });
}

// max over the box of |x - shift|
double farthest_corner_distance(const Box& box, const std::vector<double>& shift)
{
  double s = 0.0;
  for (std::size_t k = 0; k < shift.size(); ++k) {
    const double a = std::abs(box.lower[k] - shift[k]);
    const double b = std::abs(box.upper[k] - shift[k]);
    s += std::max(a, b) * std::max(a, b);
  }
  return std::sqrt(s);
}

double numeric_lipschitz(const Objective::EvalFn& eval, const Box& box, std::size_t dim)
{
  return estimate_weighted_lipschitz(eval, box, formulas::kLipschitzPairs,
                                     formulas::kLipschitzSeed + dim);
}

// Certified maximum of one Rastrigin term over [lo, hi]: grid maximum plus
// half a grid cell times the bound on |g'(u)| = |2u + 20 pi sin(2 pi u)|.
double rastrigin_term_max(double lo, double hi)
{
  constexpr std::size_t cells = 1u << 16;
  const double h = (hi - lo) / cells;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j <= cells; ++j)
    best = std::max(best, formulas::rastrigin_term(lo + h * static_cast<double>(j)));
  const double slope = 2.0 * std::max(std::abs(lo), std::abs(hi)) + 20.0 * std::numbers::pi;
  return best + slope * h / 2.0;
}

}  // namespace

Box Box::cube(std::size_t dim, double lo, double hi)
{
  return Box{std::vector<double>(dim, lo), std::vector<double>(dim, hi)};
}

bool Box::contains(std::span<const double> x) const
{
  if (x.size() != lower.size()) return false;
  for (std::size_t k = 0; k < x.size(); ++k)
    if (x[k] < lower[k] || x[k] > upper[k]) return false;
  return true;
}

Objective::Objective(std::string name, std::size_t dim, EvalFn eval, std::vector<double> minimizer,
                     double lower_bound, double upper_bound, double lipschitz_L, Box test_box)
    : name_(std::move(name)),
      dim_(dim),
      eval_(std::move(eval)),
      minimizer_(std::move(minimizer)),
      lower_bound_(lower_bound),
      upper_bound_(upper_bound),
      lipschitz_L_(lipschitz_L),
      test_box_(std::move(test_box))
{
  if (dim_ == 0) throw std::invalid_argument("objective dimension must be positive");
  if (!eval_) throw std::invalid_argument("objective needs an evaluation function");
  if (minimizer_.size() != dim_) throw std::invalid_argument("minimizer dimension mismatch");
  if (test_box_.lower.size() != dim_ || test_box_.upper.size() != dim_)
    throw std::invalid_argument("test box dimension mismatch");
  if (!(lower_bound_ <= upper_bound_)) throw std::invalid_argument("lower bound exceeds upper bound");
  if (!(lipschitz_L_ >= 0.0)) throw std::invalid_argument("Lipschitz constant must be nonnegative");
}

Objective ackley(std::size_t dim, std::vector<double> shift)
{
  shift = checked_shift(dim, std::move(shift));
  Box box = Box::cube(dim, -kTestBoxHalfWidth, kTestBoxHalfWidth);
  Objective::EvalFn eval = [shift](std::span<const double> x) { return formulas::ackley(x, shift); };

  // Both exponentials are bounded separately: the radial term by the farthest
  // corner, the cosine term by a mean cosine of -1.
  const double r = farthest_corner_distance(box, shift);
  const double upper = 20.0 * (1.0 - std::exp(-0.2 / std::sqrt(static_cast<double>(dim)) * r))
                       + (std::numbers::e - std::exp(-1.0));

  double lipschitz = -1.0;
  if (is_origin(shift)) {
    for (const auto& entry : kAckleyLipschitz)
      if (entry.dim == dim) lipschitz = entry.lipschitz;
  }
  if (lipschitz < 0.0) lipschitz = numeric_lipschitz(eval, box, dim);

  return Objective("ackley", dim, std::move(eval), shift, 0.0, upper, lipschitz, std::move(box));
}

Objective sphere(std::size_t dim, std::vector<double> shift)
{
  shift = checked_shift(dim, std::move(shift));
  Box box = Box::cube(dim, -kTestBoxHalfWidth, kTestBoxHalfWidth);
  Objective::EvalFn eval = [shift](std::span<const double> x) { return formulas::sphere(x, shift); };

  double lower = 0.0;
  for (std::size_t k = 0; k < dim; ++k) {
    const double gap = shift[k] - std::clamp(shift[k], box.lower[k], box.upper[k]);
    lower += gap * gap;
  }
  const double r = farthest_corner_distance(box, shift);
  // |x|^2 - |y|^2 = (x - y).(x + y), so L = 1 at the origin.
  const double lipschitz = is_origin(shift) ? 1.0 : numeric_lipschitz(eval, box, dim);
  return Objective("sphere", dim, std::move(eval), shift, lower, r * r, lipschitz, std::move(box));
}

Objective rastrigin(std::size_t dim, std::vector<double> shift)
{
  shift = checked_shift(dim, std::move(shift));
  Box box = Box::cube(dim, -kTestBoxHalfWidth, kTestBoxHalfWidth);
  Objective::EvalFn eval = [shift](std::span<const double> x) { return formulas::rastrigin(x, shift); };

  double upper = 0.0;
  for (std::size_t k = 0; k < dim; ++k)
    upper += rastrigin_term_max(box.lower[k] - shift[k], box.upper[k] - shift[k]);
  // |2u + 20 pi sin(2 pi u)| <= (2 + 40 pi^2)|u| bounds the gradient by a
  // multiple of |z| along the segment.
  const double lipschitz = is_origin(shift) ? 2.0 + 40.0 * std::numbers::pi * std::numbers::pi
                                            : numeric_lipschitz(eval, box, dim);
  return Objective("rastrigin", dim, std::move(eval), shift, 0.0, upper, lipschitz, std::move(box));
}

Objective constant_objective(std::size_t dim, double value)
{
  if (dim == 0) throw std::invalid_argument("objective dimension must be positive");
  return Objective("constant", dim, [value](std::span<const double>) { return value; },
                   std::vector<double>(dim, 0.0), value, value, 0.0,
                   Box::cube(dim, -kTestBoxHalfWidth, kTestBoxHalfWidth));
}

Objective make_objective(std::string_view name, std::size_t dim, std::vector<double> shift)
{
  if (name == "ackley") return ackley(dim, std::move(shift));
  if (name == "sphere") return sphere(dim, std::move(shift));
  if (name == "rastrigin") return rastrigin(dim, std::move(shift));
  if (name == "constant") return constant_objective(dim, 0.0);
  throw std::invalid_argument("unknown objective '" + std::string(name) + "'");
}

double c_alpha(const Objective& obj, double alpha)
{
  if (!(alpha >= 0.0)) throw std::invalid_argument("alpha must be nonnegative");
  const double exponent = alpha * (obj.upper_bound() - obj.lower_bound());
  if (exponent > std::log(std::numeric_limits<double>::max()))
    throw std::overflow_error("C_alpha exponent " + std::to_string(exponent) + " overflows double");
  return std::exp(exponent);
}

double estimate_weighted_lipschitz(const Objective::EvalFn& eval, const Box& box,
                                   std::size_t pairs, std::uint64_t seed)
{
  return formulas::weighted_lipschitz_sample_max(eval, box.lower, box.upper, pairs, seed);
}

}  // namespace swarmlimit
