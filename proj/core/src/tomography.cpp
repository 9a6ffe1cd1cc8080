#include "bellsim/tomography.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>
#include <string>

#include "bellsim/chsh.hpp"
#include "bellsim/errors.hpp"

namespace bellsim {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDegenerateDeterminant = 1e-10;

}  // namespace

TomographyBasis TomographyBasis::pauli() {
  const SiteSettings site = {AnalyzerSetting{kPi / 4, 0.0},
                             AnalyzerSetting{kPi / 4, kPi / 2},
                             AnalyzerSetting{0.0, 0.0}};
  return {site, site};
}

TomographyBasis TomographyBasis::skewed() {
  return {{AnalyzerSetting{kPi / 8, 0.0}, AnalyzerSetting{9 * kPi / 4, kPi / 2},
           AnalyzerSetting{kPi, 0.0}},
          {AnalyzerSetting{3 * kPi / 15, 0.0},
           AnalyzerSetting{-kPi / 24, kPi / 2}, AnalyzerSetting{kPi, 0.0}}};
}

std::array<double, 3> bloch_direction(const AnalyzerSetting& setting) {
  const double s = std::sin(2 * setting.theta);
  return {s * std::cos(setting.phi), s * std::sin(setting.phi),
          std::cos(2 * setting.theta)};
}

Matrix2c spin_projection(const AnalyzerSetting& setting) {
  const double c = std::cos(2 * setting.theta);
  const double s = std::sin(2 * setting.theta);
  return {Complex{c, 0.0}, std::polar(s, -setting.phi),
          std::polar(s, setting.phi), Complex{-c, 0.0}};
}

MetricTensor metric_tensor(const SiteSettings& settings) {
  MetricTensor m{};
  for (int k = 0; k < 3; ++k) {
    for (int i = 0; i < 3; ++i) {
      const auto& sk = settings[static_cast<std::size_t>(k)];
      const auto& si = settings[static_cast<std::size_t>(i)];
      m.g_inverse[k][i] =
          std::cos(2 * si.theta) * std::cos(2 * sk.theta) +
          std::sin(2 * si.theta) * std::sin(2 * sk.theta) * std::cos(si.phi - sk.phi);
    }
  }
  const auto& a = m.g_inverse;
  // Adjugate (cofactor transpose) inversion.
  const Matrix3 cof = {{{a[1][1] * a[2][2] - a[1][2] * a[2][1],
                         a[1][2] * a[2][0] - a[1][0] * a[2][2],
                         a[1][0] * a[2][1] - a[1][1] * a[2][0]},
                        {a[0][2] * a[2][1] - a[0][1] * a[2][2],
                         a[0][0] * a[2][2] - a[0][2] * a[2][0],
                         a[0][1] * a[2][0] - a[0][0] * a[2][1]},
                        {a[0][1] * a[1][2] - a[0][2] * a[1][1],
                         a[0][2] * a[1][0] - a[0][0] * a[1][2],
                         a[0][0] * a[1][1] - a[0][1] * a[1][0]}}};
  const double det = a[0][0] * cof[0][0] + a[0][1] * cof[0][1] + a[0][2] * cof[0][2];
  if (!(std::abs(det) > kDegenerateDeterminant)) {
    throw DegenerateBasisError("analyzer directions are not linearly independent (det " +
                               std::to_string(det) + ")");
  }
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) m.g[r][c] = cof[c][r] / det;
  }
  return m;
}

Matrix2c xi_matrix(const SiteSettings& settings, const MetricTensor& metric,
                   int index) {
  if (index < 0 || index > 2) throw DomainError("xi_matrix index must be 0, 1 or 2");
  Matrix2c out{};
  for (int k = 0; k < 3; ++k) {
    const auto sigma = spin_projection(settings[static_cast<std::size_t>(k)]);
    for (std::size_t e = 0; e < 4; ++e) out[e] += metric.g[k][index] * sigma[e];
  }
  return out;
}

Matrix3 measure_correlation_matrix(const PdcSource& source,
                                   const DetectorParams& params,
                                   Postprocessing model,
                                   const TomographyBasis& basis) {
  Matrix3 e{};
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      e[i][j] = pipeline_correlation(source, params, model, basis.site_a[i],
                                     basis.site_b[j]);
    }
  }
  return e;
}

TwoQubitDensityMatrix reconstruct_density(const Matrix3& correlations,
                                          const TomographyBasis& basis,
                                          const MetricTensor& metric_a,
                                          const MetricTensor& metric_b) {
  std::array<Matrix2c, 3> xi_a;
  std::array<Matrix2c, 3> xi_b;
  for (int i = 0; i < 3; ++i) {
    xi_a[static_cast<std::size_t>(i)] = xi_matrix(basis.site_a, metric_a, i);
    xi_b[static_cast<std::size_t>(i)] = xi_matrix(basis.site_b, metric_b, i);
  }
  TwoQubitDensityMatrix out;
  for (int d = 0; d < 4; ++d) out.rho[static_cast<std::size_t>(d * 5)] = 0.25;
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      const double coeff = 0.25 * correlations[i][j];
      for (int a = 0; a < 2; ++a) {
        for (int ap = 0; ap < 2; ++ap) {
          const Complex xa = xi_a[i][static_cast<std::size_t>(a * 2 + ap)];
          for (int b = 0; b < 2; ++b) {
            for (int bp = 0; bp < 2; ++bp) {
              const auto row = static_cast<std::size_t>(2 * a + b);
              const auto col = static_cast<std::size_t>(2 * ap + bp);
              out.rho[row * 4 + col] +=
                  coeff * xa * xi_b[j][static_cast<std::size_t>(b * 2 + bp)];
            }
          }
        }
      }
    }
  }
  out.eigenvalues = hermitian_eigenvalues(out.rho);
  out.min_eigenvalue = out.eigenvalues[0];
  return out;
}

TwoQubitDensityMatrix reconstruct_density(const Matrix3& correlations,
                                          const TomographyBasis& basis) {
  return reconstruct_density(correlations, basis, metric_tensor(basis.site_a),
                             metric_tensor(basis.site_b));
}

std::array<double, 4> hermitian_eigenvalues(const Matrix4c& matrix) {
  Eigen::Matrix4cd m;
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) m(r, c) = matrix[static_cast<std::size_t>(r * 4 + c)];
  }
  // Symmetrize away roundoff; the solver reads only one triangle.
  const Eigen::Matrix4cd h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> solver(h, Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();
  return {ev(0), ev(1), ev(2), ev(3)};
}

}  // namespace bellsim
