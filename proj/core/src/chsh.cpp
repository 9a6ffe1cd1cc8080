#include "bellsim/chsh.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "bellsim/errors.hpp"

namespace bellsim {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double canonical_angle(double theta) {
  double r = std::fmod(theta, kPi);
  if (r < 0.0) r += kPi;
  if (r >= kPi) r = 0.0;
  return r;
}

// Counts calls and maps undefined correlations to NaN.
class CountingCorrelation {
 public:
  explicit CountingCorrelation(const CorrelationFunction& corr) : corr_(corr) {}

  double operator()(double theta_a, double theta_b) {
    ++calls_;
    try {
      return corr_(theta_a, theta_b);
    } catch (const NoCoincidenceError&) {
      return kNaN;
    }
  }
  int calls() const { return calls_; }

 private:
  const CorrelationFunction& corr_;
  int calls_ = 0;
};

double bell_or_nan(double e11, double e12, double e22, double e21) {
  if (std::isnan(e11) || std::isnan(e12) || std::isnan(e22) || std::isnan(e21)) {
    return kNaN;
  }
  return bell_parameter(e11, e12, e22, e21);
}

NelderMeadOptions refine_options(const BellSearchOptions& options, int grid) {
  NelderMeadOptions nm = options.refine;
  if (nm.initial_step <= 0.0) nm.initial_step = kPi / grid;
  return nm;
}

BellResult reduced_search(CountingCorrelation& corr,
                          const BellSearchOptions& options) {
  const int grid = options.grid_points;
  std::vector<double> table(static_cast<std::size_t>(grid));
  for (int k = 0; k < grid; ++k) {
    table[static_cast<std::size_t>(k)] = corr(k * kPi / grid, 0.0);
  }
  auto at = [&](int k) { return table[static_cast<std::size_t>(((k % grid) + grid) % grid)]; };

  double best = -std::numeric_limits<double>::infinity();
  std::array<int, 3> best_index{-1, -1, -1};
  for (int i11 = 0; i11 < grid; ++i11) {
    for (int i12 = 0; i12 < grid; ++i12) {
      for (int i21 = 0; i21 < grid; ++i21) {
        const double b =
            bell_or_nan(at(i11), at(i12), at(i21 + i12 - i11), at(i21));
        if (!std::isnan(b) && b > best) {
          best = b;
          best_index = {i11, i12, i21};
        }
      }
    }
  }
  if (best_index[0] < 0) {
    throw NoCoincidenceError("no analyzer setting yields coincidences");
  }

  auto correlations_at = [&](std::span<const double> d) {
    return std::array<double, 4>{corr(d[0], 0.0), corr(d[1], 0.0),
                                 corr(d[2] + d[1] - d[0], 0.0), corr(d[2], 0.0)};
  };
  auto objective = [&](std::span<const double> d) {
    const auto e = correlations_at(d);
    const double b = bell_or_nan(e[0], e[1], e[2], e[3]);
    return std::isnan(b) ? std::numeric_limits<double>::infinity() : -b;
  };

  const std::vector<double> start = {best_index[0] * kPi / grid,
                                     best_index[1] * kPi / grid,
                                     best_index[2] * kPi / grid};
  const auto refined =
      nelder_mead_minimize(objective, start, refine_options(options, grid));
  const std::vector<double>& d = -refined.value >= best ? refined.x : start;

  BellResult result;
  result.correlations = correlations_at(d);
  result.bell_value = bell_parameter(result.correlations[0], result.correlations[1],
                                     result.correlations[2], result.correlations[3]);
  result.settings = BellSettings{0.0, d[2] - d[0], -d[0], -d[1]}.canonical();
  result.used_difference_reduction = true;
  return result;
}

BellResult full_search(CountingCorrelation& corr,
                       const BellSearchOptions& options) {
  const int grid = options.fallback_grid_points;
  const auto g = static_cast<std::size_t>(grid);
  std::vector<double> table(g * g);
  for (std::size_t a = 0; a < g; ++a) {
    for (std::size_t b = 0; b < g; ++b) {
      table[a * g + b] = corr(static_cast<double>(a) * kPi / grid,
                              static_cast<double>(b) * kPi / grid);
    }
  }
  double best = -std::numeric_limits<double>::infinity();
  std::array<std::size_t, 4> best_index{};
  bool found = false;
  for (std::size_t a1 = 0; a1 < g; ++a1) {
    for (std::size_t a2 = 0; a2 < g; ++a2) {
      for (std::size_t b1 = 0; b1 < g; ++b1) {
        for (std::size_t b2 = 0; b2 < g; ++b2) {
          const double b = bell_or_nan(table[a1 * g + b1], table[a1 * g + b2],
                                       table[a2 * g + b2], table[a2 * g + b1]);
          if (!std::isnan(b) && b > best) {
            best = b;
            best_index = {a1, a2, b1, b2};
            found = true;
          }
        }
      }
    }
  }
  if (!found) throw NoCoincidenceError("no analyzer setting yields coincidences");

  // x = (theta_a1, theta_a2, theta_b1, theta_b2)
  auto correlations_at = [&](std::span<const double> x) {
    return std::array<double, 4>{corr(x[0], x[2]), corr(x[0], x[3]),
                                 corr(x[1], x[3]), corr(x[1], x[2])};
  };
  auto objective = [&](std::span<const double> x) {
    const auto e = correlations_at(x);
    const double b = bell_or_nan(e[0], e[1], e[2], e[3]);
    return std::isnan(b) ? std::numeric_limits<double>::infinity() : -b;
  };
  std::vector<double> start(4);
  for (std::size_t i = 0; i < 4; ++i) {
    start[i] = static_cast<double>(best_index[i]) * kPi / grid;
  }
  const auto refined =
      nelder_mead_minimize(objective, start, refine_options(options, grid));
  const std::vector<double>& x = -refined.value >= best ? refined.x : start;

  BellResult result;
  result.correlations = correlations_at(x);
  result.bell_value = bell_parameter(result.correlations[0], result.correlations[1],
                                     result.correlations[2], result.correlations[3]);
  result.settings = BellSettings{x[0], x[1], x[2], x[3]}.canonical();
  result.used_difference_reduction = false;
  return result;
}

}  // namespace

BellSettings BellSettings::canonical() const {
  return {canonical_angle(theta_a1), canonical_angle(theta_a2),
          canonical_angle(theta_b1), canonical_angle(theta_b2)};
}

double correlation(const CoincidenceProbabilities& probs) {
  const double same = probs.same();
  const double different = probs.different();
  const double total = same + different;
  if (!(total > 1e-300)) {
    throw NoCoincidenceError("no coincidences: correlation undefined");
  }
  return (same - different) / total;
}

double bell_parameter(double e11, double e12, double e22, double e21) {
  return std::abs(e11 - e12) + std::abs(e22 + e21);
}

bool depends_only_on_difference(const CorrelationFunction& corr,
                                double tolerance) {
  static constexpr std::array<std::array<double, 2>, 4> kProbes = {
      {{0.3, 0.1}, {1.1, 0.4}, {2.0, 2.9}, {0.7, 2.2}}};
  static constexpr std::array<double, 2> kShifts = {0.37, 1.21};
  CountingCorrelation safe(corr);
  for (const auto& probe : kProbes) {
    const double base = safe(probe[0], probe[1]);
    for (double shift : kShifts) {
      const double moved = safe(probe[0] + shift, probe[1] + shift);
      if (std::isnan(base) != std::isnan(moved)) return false;
      if (!std::isnan(base) && !(std::abs(base - moved) <= tolerance)) return false;
    }
  }
  return true;
}

BellResult maximize_chsh(const CorrelationFunction& corr,
                         const BellSearchOptions& options) {
  if (options.grid_points < 2 || options.fallback_grid_points < 2) {
    throw DomainError("Bell search grids need at least two points per axis");
  }
  CountingCorrelation counting(corr);
  BellResult result = depends_only_on_difference(corr, options.shift_tolerance)
                          ? reduced_search(counting, options)
                          : full_search(counting, options);
  result.evaluations = counting.calls();
  return result;
}

double pipeline_correlation(const PdcSource& source,
                            const DetectorParams& params, Postprocessing model,
                            const AnalyzerSetting& setting_a,
                            const AnalyzerSetting& setting_b) {
  const auto dist = joint_photon_distribution(source, setting_a, setting_b);
  return correlation(coincidence_probabilities(dist, params, model));
}

BellResult maximize_bell(const PdcSource& source, const DetectorParams& params,
                         Postprocessing model,
                         const BellSearchOptions& options) {
  params.validate();
  const CorrelationFunction corr = [&](double theta_a, double theta_b) {
    return pipeline_correlation(source, params, model, {theta_a, 0.0},
                                {theta_b, 0.0});
  };
  BellResult result = maximize_chsh(corr, options);
  result.model = model;
  return result;
}

}  // namespace bellsim
