#include "bellsim/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace bellsim {

namespace {

constexpr double kReflect = 1.0;
constexpr double kExpand = 2.0;
constexpr double kContract = 0.5;
constexpr double kShrink = 0.5;

}  // namespace

NelderMeadResult nelder_mead_minimize(
    const std::function<double(std::span<const double>)>& objective,
    std::span<const double> start, const NelderMeadOptions& options) {
  const std::size_t dim = start.size();
  int evaluations = 0;
  struct BudgetExhausted {};
  bool budgeted = false;  // the starting simplex is always evaluated
  auto eval = [&](const std::vector<double>& x) {
    if (budgeted && evaluations >= options.max_evaluations) throw BudgetExhausted{};
    ++evaluations;
    const double v = objective(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  };

  std::vector<std::vector<double>> vertices(dim + 1,
                                            std::vector<double>(start.begin(), start.end()));
  for (std::size_t i = 0; i < dim; ++i) vertices[i + 1][i] += options.initial_step;
  std::vector<double> values(dim + 1);
  for (std::size_t i = 0; i <= dim; ++i) values[i] = eval(vertices[i]);

  std::vector<std::size_t> order(dim + 1);
  auto sort_simplex = [&] {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<std::vector<double>> v2(dim + 1);
    std::vector<double> f2(dim + 1);
    for (std::size_t k = 0; k <= dim; ++k) {
      v2[k] = std::move(vertices[order[k]]);
      f2[k] = values[order[k]];
    }
    vertices.swap(v2);
    values.swap(f2);
  };

  auto converged = [&] {
    const double spread = values[dim] - values[0];
    if (!(spread <= options.relative_tolerance *
                        std::max(1.0, std::abs(values[0])))) {
      return false;
    }
    for (std::size_t k = 1; k <= dim; ++k) {
      for (std::size_t i = 0; i < dim; ++i) {
        if (std::abs(vertices[k][i] - vertices[0][i]) > options.simplex_tolerance) {
          return false;
        }
      }
    }
    return true;
  };

  auto along = [&](const std::vector<double>& from, const std::vector<double>& to,
                   double scale) {
    std::vector<double> p(dim);
    for (std::size_t i = 0; i < dim; ++i) p[i] = from[i] + scale * (to[i] - from[i]);
    return p;
  };

  bool done = false;
  sort_simplex();
  budgeted = true;
  try {
    while (evaluations < options.max_evaluations) {
      if (converged()) {
        done = true;
        break;
      }
      std::vector<double> centroid(dim, 0.0);
      for (std::size_t k = 0; k < dim; ++k) {
        for (std::size_t i = 0; i < dim; ++i) centroid[i] += vertices[k][i];
      }
      for (double& c : centroid) c /= static_cast<double>(dim);

      const auto reflected = along(centroid, vertices[dim], -kReflect);
      const double f_reflected = eval(reflected);
      if (f_reflected < values[0]) {
        const auto expanded = along(centroid, reflected, kExpand);
        const double f_expanded = eval(expanded);
        if (f_expanded < f_reflected) {
          vertices[dim] = expanded;
          values[dim] = f_expanded;
        } else {
          vertices[dim] = reflected;
          values[dim] = f_reflected;
        }
      } else if (f_reflected < values[dim - 1]) {
        vertices[dim] = reflected;
        values[dim] = f_reflected;
      } else {
        const bool outside = f_reflected < values[dim];
        const auto contracted =
            along(centroid, outside ? reflected : vertices[dim], kContract);
        const double f_contracted = eval(contracted);
        if (f_contracted < (outside ? f_reflected : values[dim])) {
          vertices[dim] = contracted;
          values[dim] = f_contracted;
        } else {
          for (std::size_t k = 1; k <= dim; ++k) {
            auto shrunk = along(vertices[0], vertices[k], kShrink);
            values[k] = eval(shrunk);
            vertices[k] = std::move(shrunk);
          }
        }
      }
      sort_simplex();
    }
  } catch (const BudgetExhausted&) {
    sort_simplex();
  }

  return {vertices[0], values[0], evaluations, done || converged()};
}

}  // namespace bellsim
