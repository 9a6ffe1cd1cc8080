#include "bellsim/closed_form.hpp"

#include <cmath>
#include <string>

#include "bellsim/errors.hpp"

namespace bellsim {

namespace {

constexpr double kDenominatorFloor = 1e-300;

void validate(double tanh_chi, double eta, double noise) {
  if (!(tanh_chi >= 0.0 && tanh_chi < 1.0)) {
    throw DomainError("tanh_chi must lie in [0, 1), got " +
                      std::to_string(tanh_chi));
  }
  DetectorParams{eta, noise}.validate();
}

void check_denominator(double value, const char* name) {
  if (!(value >= kDenominatorFloor)) {
    throw DegenerateDenominatorError(std::string("closed form: ") + name +
                                     " = " + std::to_string(value));
  }
}

struct Denominators {
  double both_silent;   // C0 + 2 C1 + C_ij
  double three_silent;  // C0 + C1
  double all_silent;    // C0
};

Denominators denominators(double tanh_chi, double eta, double theta_a,
                          double theta_b, Channel a, Channel b) {
  const auto c = onoff_coefficients(tanh_chi, eta, theta_a - theta_b);
  Denominators d{c.c0 + 2.0 * c.c1 + c.pair(a, b), c.c0 + c.c1, c.c0};
  check_denominator(d.both_silent, "C0 + 2 C1 + C_ij");
  check_denominator(d.three_silent, "C0 + C1");
  check_denominator(d.all_silent, "C0");
  return d;
}

}  // namespace

OnOffCoefficients onoff_coefficients(double tanh_chi, double eta,
                                     double delta) {
  const double x = tanh_chi * tanh_chi;
  const double bracket = eta * eta * x - std::pow(1.0 + (eta - 1.0) * x, 2);
  const double s = std::sin(delta);
  const double c = std::cos(delta);
  const double cross = eta * eta * x * (1.0 - x) * (1.0 - x);
  const double loss = (1.0 - eta) * (1.0 - eta) * x;
  OnOffCoefficients out;
  out.c0 = bracket * bracket;
  out.c1 = eta * (1.0 - eta) * (1.0 - x) * x * bracket;
  out.c_same = cross * (loss - s * s);
  out.c_different = cross * (loss - c * c);
  return out;
}

double onoff_probability(double tanh_chi, double eta, double noise,
                         double theta_a, double theta_b, Channel a,
                         Channel b) {
  validate(tanh_chi, eta, noise);
  const auto d = denominators(tanh_chi, eta, theta_a, theta_b, a, b);
  const double y = 1.0 - tanh_chi * tanh_chi;
  const double y4 = y * y * y * y;
  return y4 * (std::exp(-2.0 * noise) / d.both_silent -
               2.0 * std::exp(-3.0 * noise) / d.three_silent +
               std::exp(-4.0 * noise) / d.all_silent);
}

double onoff_probability_as_printed(double tanh_chi, double eta, double noise,
                                    double theta_a, double theta_b, Channel a,
                                    Channel b) {
  validate(tanh_chi, eta, noise);
  const auto d = denominators(tanh_chi, eta, theta_a, theta_b, a, b);
  const double y = 1.0 - tanh_chi * tanh_chi;
  const double prefactor =
      std::pow(eta, 4) * y * y * y * y * std::exp(-4.0 * noise);
  return prefactor * (1.0 / d.both_silent -
                      2.0 * std::exp(-noise) / d.three_silent +
                      1.0 / d.all_silent);
}

double squash_correlation_closed_form(double tanh_chi, double theta_a,
                                      double theta_b) {
  if (!(tanh_chi > 0.0 && tanh_chi < 1.0)) {
    throw DomainError("squash closed form needs tanh_chi in (0, 1), got " +
                      std::to_string(tanh_chi));
  }
  const double delta2 = 2.0 * (theta_a - theta_b);
  const double t2 = tanh_chi * tanh_chi;
  const double t4 = t2 * t2;
  const double y = 1.0 - t2;
  const double sin2 = std::sin(delta2) * std::sin(delta2);

  const double first = 1.0 - 0.5 * t2 * sin2;
  const double second = (9.0 + 3.0 * y) / (2.0 * t2 * y * y) *
                        (1.0 - t2 + 0.25 * t4 * sin2);
  const double third = (1.0 - 2.0 * y * y) * (2.0 - t2) / (t2 * y * y);
  const double denominator = first + second + third;
  return -std::cos(delta2) / denominator;
}

}  // namespace bellsim
