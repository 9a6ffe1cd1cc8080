#pragma once

#include "bellsim/detector_model.hpp"

namespace bellsim {

/// Denominator pieces of the analytic on-off coincidence probability.
/// delta = theta_A - theta_B.
struct OnOffCoefficients {
  double c0 = 0.0;
  double c1 = 0.0;
  double c_same = 0.0;       ///< C_{T_A,T_B} = C_{R_A,R_B}
  double c_different = 0.0;  ///< C_{T_A,R_B} = C_{R_A,T_B}

  double pair(Channel a, Channel b) const {
    return a == b ? c_same : c_different;
  }
};

OnOffCoefficients onoff_coefficients(double tanh_chi, double eta, double delta);

/// Analytic naive on-off coincidence probability for the PDC source,
///
///   P = (1-t^2)^4 [ e^{-2N}/(C0 + 2 C1 + C_ij) - 2 e^{-3N}/(C0 + C1)
///                   + e^{-4N}/C0 ],
///
/// an inclusion-exclusion over the vacuum probabilities of the silent
/// detector sets {j_A, j_B}, {i_A, j_A, j_B}, {j_A, i_B, j_B} and all four.
/// Throws DegenerateDenominatorError if a denominator is below 1e-300.
double onoff_probability(double tanh_chi, double eta, double noise,
                         double theta_a, double theta_b, Channel a, Channel b);

/// Variant with prefactor eta^4 (1-t^2)^4 e^{-4N} and e^{-N} on the middle
/// term. Agrees with onoff_probability only at eta = 1, N = 0; the validate
/// report tracks how far it drifts elsewhere.
double onoff_probability_as_printed(double tanh_chi, double eta, double noise,
                                    double theta_a, double theta_b, Channel a,
                                    Channel b);

/// Analytic squash-model correlation for lossless, noiseless detectors,
/// E = -cos(2 delta) / D, with D transcribed term by term:
///
///   D = 1 - (1/2) t^2 sin^2(2 delta)
///       + [9 + 3 (1 - t^2)] / [2 t^2 (1 - t^2)^2]
///         * { 1 - t^2 + (1/4) t^4 sin^2(2 delta) }
///       + [1 - 2 (1 - t^2)^2] (2 - t^2) / [t^2 (1 - t^2)^2]
///
/// D grows like 4/t^2 as t -> 0, so this tends to 0 instead of the one-pair
/// value -cos(2 delta). Throws DomainError for tanh_chi outside (0, 1).
double squash_correlation_closed_form(double tanh_chi, double theta_a,
                                      double theta_b);

}  // namespace bellsim
