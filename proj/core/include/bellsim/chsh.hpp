#pragma once

#include <array>
#include <functional>

#include "bellsim/detector_model.hpp"
#include "bellsim/fock_engine.hpp"
#include "bellsim/nelder_mead.hpp"

namespace bellsim {

inline constexpr double kCirelsonBound = 2.8284271247461903;  // 2 sqrt(2)

/// The four CHSH analyzer angles (phase shifters off).
struct BellSettings {
  double theta_a1 = 0.0;
  double theta_a2 = 0.0;
  double theta_b1 = 0.0;
  double theta_b2 = 0.0;

  /// Every angle reduced to [0, pi).
  BellSettings canonical() const;
};

/// Correlations are ordered (E11, E12, E22, E21), matching bell_parameter.
struct BellResult {
  double bell_value = 0.0;
  BellSettings settings;
  std::array<double, 4> correlations{};
  Postprocessing model = Postprocessing::NaiveOnOff;
  bool used_difference_reduction = true;
  int evaluations = 0;
};

/// (P_same - P_different) / (P_same + P_different), with T counted as +1 and
/// R as -1 at both sites. Throws NoCoincidenceError if the denominator is at
/// most 1e-300.
double correlation(const CoincidenceProbabilities& probs);

/// |E11 - E12| + |E22 + E21|.
double bell_parameter(double e11, double e12, double e22, double e21);

/// E(theta_A, theta_B); may throw NoCoincidenceError where undefined.
using CorrelationFunction = std::function<double(double, double)>;

struct BellSearchOptions {
  int grid_points = 64;           ///< per axis over [0, pi), reduced search
  int fallback_grid_points = 16;  ///< per axis for the full 4-angle search
  double shift_tolerance = 1e-10;
  NelderMeadOptions refine{0.0, 1e-8, 1e-6, 2000};  // step 0 -> pi/grid
};

/// Whether E(a + c, b + c) == E(a, b) on a fixed probe set.
bool depends_only_on_difference(const CorrelationFunction& corr,
                                double tolerance);

/// Grid scan followed by simplex refinement of the Bell parameter.
///
/// If `corr` passes the shift-invariance probe, the search runs over the
/// three differences (D11, D12, D21) with D22 = D21 + D12 - D11 and the
/// correlation sampled as E(D, 0); otherwise it falls back to a coarser
/// 4-angle grid. Grid candidates with an undefined correlation are skipped,
/// ties go to the first maximum in scan order. Throws NoCoincidenceError if
/// no candidate is defined.
BellResult maximize_chsh(const CorrelationFunction& corr,
                         const BellSearchOptions& options = {});

/// Correlation from the full source -> analyzers -> detectors pipeline.
double pipeline_correlation(const PdcSource& source,
                            const DetectorParams& params, Postprocessing model,
                            const AnalyzerSetting& setting_a,
                            const AnalyzerSetting& setting_b);

/// Maximal Bell parameter over analyzer angles for one source, detector and
/// postprocessing choice.
BellResult maximize_bell(const PdcSource& source, const DetectorParams& params,
                         Postprocessing model,
                         const BellSearchOptions& options = {});

}  // namespace bellsim
