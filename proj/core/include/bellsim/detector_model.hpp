#pragma once

#include <array>
#include <optional>
#include <string_view>

#include "bellsim/fock_engine.hpp"

namespace bellsim {

/// Shared by all four detectors.
struct DetectorParams {
  double eta = 1.0;    ///< detection efficiency, [0, 1]
  double noise = 0.0;  ///< mean noise counts per detector window, >= 0

  /// Throws DomainError on out-of-range values.
  void validate() const;
};

enum class Postprocessing { NaiveOnOff, SquashOnOff, PhotonNumberResolving };

inline constexpr std::array<Postprocessing, 3> kAllPostprocessing = {
    Postprocessing::NaiveOnOff, Postprocessing::SquashOnOff,
    Postprocessing::PhotonNumberResolving};

/// CLI spelling: onoff-naive, onoff-squash, pnr.
std::string_view to_string(Postprocessing model);
std::optional<Postprocessing> parse_postprocessing(std::string_view name);

enum class Channel { Transmitted = 0, Reflected = 1 };

/// P_{i_A, i_B} for i in {T, R} at both sites.
struct CoincidenceProbabilities {
  std::array<double, 4> p{};

  double& at(Channel a, Channel b) {
    return p[2 * static_cast<int>(a) + static_cast<int>(b)];
  }
  double at(Channel a, Channel b) const {
    return p[2 * static_cast<int>(a) + static_cast<int>(b)];
  }
  double same() const {
    return at(Channel::Transmitted, Channel::Transmitted) +
           at(Channel::Reflected, Channel::Reflected);
  }
  double different() const {
    return at(Channel::Transmitted, Channel::Reflected) +
           at(Channel::Reflected, Channel::Transmitted);
  }
  double total() const { return same() + different(); }
};

/// <m| Pi^(n) |m>: probability that a detector facing an m-photon Fock state
/// registers n counts. Binomial loss convolved with Poissonian noise.
double detector_response(int photons, int counts, const DetectorParams& params);

/// 1 - (1-eta)^m e^{-N_nc}.
double click_probability(int photons, const DetectorParams& params);

CoincidenceProbabilities coincidence_probabilities(
    const JointPhotonDistribution& dist, const DetectorParams& params,
    Postprocessing model);

}  // namespace bellsim
