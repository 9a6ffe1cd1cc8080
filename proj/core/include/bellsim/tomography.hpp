#pragma once

#include <array>

#include "bellsim/detector_model.hpp"
#include "bellsim/fock_engine.hpp"

namespace bellsim {

using Matrix3 = std::array<std::array<double, 3>, 3>;
/// Row-major 2x2 complex matrix.
using Matrix2c = std::array<Complex, 4>;
/// Row-major 4x4 complex matrix on site A (x) site B, index 2a + b.
using Matrix4c = std::array<Complex, 16>;

using SiteSettings = std::array<AnalyzerSetting, 3>;

/// Three analyzer settings per site. Each setting measures the spin
/// projection along the Bloch direction
///   (sin 2theta cos phi, sin 2theta sin phi, cos 2theta).
struct TomographyBasis {
  SiteSettings site_a;
  SiteSettings site_b;

  /// x, y and z at both sites.
  static TomographyBasis pauli();
  /// Non-orthogonal directions, with the angles used verbatim (no reduction
  /// of 9pi/4 or pi into a canonical range).
  static TomographyBasis skewed();
};

std::array<double, 3> bloch_direction(const AnalyzerSetting& setting);

/// (cos 2theta, e^{-i phi} sin 2theta; e^{i phi} sin 2theta, -cos 2theta),
/// the +1/-1 observable for outcomes T/R.
Matrix2c spin_projection(const AnalyzerSetting& setting);

struct MetricTensor {
  Matrix3 g;          ///< inverse Gram matrix
  Matrix3 g_inverse;  ///< Gram matrix of the three Bloch directions
};

/// Throws DegenerateBasisError if |det(g_inverse)| <= 1e-10.
MetricTensor metric_tensor(const SiteSettings& settings);

/// Dual operator sum_k g(k, i) sigma_k, so that Tr(Xi_i sigma_k) = 2 delta_ik.
/// `index` is 0-based.
Matrix2c xi_matrix(const SiteSettings& settings, const MetricTensor& metric,
                   int index);

/// E(i, j) from the full pipeline with setting i at A and setting j at B.
/// Propagates NoCoincidenceError.
Matrix3 measure_correlation_matrix(const PdcSource& source,
                                   const DetectorParams& params,
                                   Postprocessing model,
                                   const TomographyBasis& basis);

struct TwoQubitDensityMatrix {
  Matrix4c rho{};
  std::array<double, 4> eigenvalues{};  ///< ascending
  double min_eigenvalue = 0.0;

  Complex at(int row, int col) const { return rho[static_cast<std::size_t>(row * 4 + col)]; }
  Complex trace() const { return rho[0] + rho[5] + rho[10] + rho[15]; }
};

/// Linear reconstruction
///   rho = I/4 + (1/4) sum_ij E(i, j) Xi_A(i) (x) Xi_B(j),
/// which assumes zero single-site spin means. Positivity is not enforced.
TwoQubitDensityMatrix reconstruct_density(const Matrix3& correlations,
                                          const TomographyBasis& basis,
                                          const MetricTensor& metric_a,
                                          const MetricTensor& metric_b);

TwoQubitDensityMatrix reconstruct_density(const Matrix3& correlations,
                                          const TomographyBasis& basis);

/// Ascending eigenvalues of a Hermitian 4x4 matrix.
std::array<double, 4> hermitian_eigenvalues(const Matrix4c& matrix);

}  // namespace bellsim
