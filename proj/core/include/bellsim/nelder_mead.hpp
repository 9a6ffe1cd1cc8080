#pragma once

#include <functional>
#include <span>
#include <vector>

namespace bellsim {

struct NelderMeadOptions {
  double initial_step = 0.1;
  /// Stop once the spread of vertex values is below
  /// relative_tolerance * max(1, |best|) ...
  double relative_tolerance = 1e-8;
  /// ... and every vertex lies within this distance of the best one.
  double simplex_tolerance = 1e-6;
  /// Hard cap, except that the starting simplex is always evaluated.
  int max_evaluations = 2000;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  int evaluations = 0;
  bool converged = false;
};

/// Minimizes `objective` from `start` with the standard reflection /
/// expansion / contraction / shrink moves (coefficients 1, 2, 1/2, 1/2).
/// Non-finite objective values are treated as +infinity. The best vertex
/// never gets worse, so the result is no worse than `start`.
NelderMeadResult nelder_mead_minimize(
    const std::function<double(std::span<const double>)>& objective,
    std::span<const double> start, const NelderMeadOptions& options = {});

}  // namespace bellsim
