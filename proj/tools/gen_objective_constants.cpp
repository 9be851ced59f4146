// Build-time generator for the Ackley weighted-Lipschitz table.
//
// Usage: gen_objective_constants <output.inc>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <vector>

#include "benchmark_formulas.hpp"

int main(int argc, char** argv)
{
  if (argc != 2) {
    std::cerr << "usage: gen_objective_constants <output.inc>\n";
    return 2;
  }
  std::ofstream out(argv[1]);
  if (!out) {
    std::cerr << "cannot open " << argv[1] << "\n";
    return 4;
  }

  namespace f = swarmlimit::formulas;
  out << "// Generated by gen_objective_constants. Do not edit.\n"
      << "// Ackley, zero shift, box [-3,3]^d: max of |E(x)-E(y)| / ((|x|+|y|)|x-y|)\n"
      << "// over " << f::kLipschitzPairs << " uniform pairs.\n";
  char buf[64];
  for (std::size_t d = 1; d <= f::kTabulatedMaxDim; ++d) {
    const std::vector<double> shift(d, 0.0);
    const std::vector<double> lo(d, -3.0), hi(d, 3.0);
    auto eval = [&](std::span<const double> x) { return f::ackley(x, shift); };
    const double L = f::weighted_lipschitz_sample_max(eval, lo, hi, f::kLipschitzPairs,
                                                      f::kLipschitzSeed + d);
    std::snprintf(buf, sizeof buf, "%.17g", L);
    out << "{" << d << ", " << buf << "},\n";
  }
  return 0;
}
