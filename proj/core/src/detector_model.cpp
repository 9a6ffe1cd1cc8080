#include "bellsim/detector_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "bellsim/errors.hpp"

namespace bellsim {

namespace {

double binomial_pmf(int trials, int successes, double p) {
  if (successes < 0 || successes > trials) return 0.0;
  if (p == 0.0) return successes == 0 ? 1.0 : 0.0;
  if (p == 1.0) return successes == trials ? 1.0 : 0.0;
  const double log_term = std::lgamma(trials + 1.0) -
                          std::lgamma(successes + 1.0) -
                          std::lgamma(trials - successes + 1.0) +
                          successes * std::log(p) +
                          (trials - successes) * std::log1p(-p);
  return std::exp(log_term);
}

double poisson_pmf(int k, double mean) {
  if (k < 0) return 0.0;
  if (mean == 0.0) return k == 0 ? 1.0 : 0.0;
  return std::exp(-mean + k * std::log(mean) - std::lgamma(k + 1.0));
}

// (1-eta)^m e^{-N}
double silence_probability(int photons, const DetectorParams& params) {
  if (photons == 0) return std::exp(-params.noise);
  if (params.eta == 1.0) return 0.0;
  return std::exp(photons * std::log1p(-params.eta) - params.noise);
}

// Outcome weights of one site holding (n_T, n_R) photons, indexed by the
// outcome assigned to the site (T or R).
struct SiteTables {
  std::vector<double> silent;
  std::vector<double> click;
  std::vector<double> single;

  SiteTables(int max_photons, const DetectorParams& params) {
    for (int m = 0; m <= max_photons; ++m) {
      silent.push_back(silence_probability(m, params));
      click.push_back(click_probability(m, params));
      single.push_back(detector_response(m, 1, params));
    }
  }

  std::array<double, 2> weights(int n_t, int n_r, Postprocessing model) const {
    switch (model) {
      case Postprocessing::NaiveOnOff:
        return {click[n_t] * silent[n_r], silent[n_t] * click[n_r]};
      case Postprocessing::SquashOnOff: {
        const double split = 0.5 * click[n_t] * click[n_r];
        return {click[n_t] * silent[n_r] + split,
                silent[n_t] * click[n_r] + split};
      }
      case Postprocessing::PhotonNumberResolving:
        return {single[n_t] * silent[n_r], silent[n_t] * single[n_r]};
    }
    return {0.0, 0.0};
  }
};

}  // namespace

void DetectorParams::validate() const {
  if (!(eta >= 0.0 && eta <= 1.0)) {
    throw DomainError("detection efficiency must lie in [0, 1], got " +
                      std::to_string(eta));
  }
  if (!(noise >= 0.0) || !std::isfinite(noise)) {
    throw DomainError("mean noise counts must be finite and >= 0, got " +
                      std::to_string(noise));
  }
}

std::string_view to_string(Postprocessing model) {
  switch (model) {
    case Postprocessing::NaiveOnOff:
      return "onoff-naive";
    case Postprocessing::SquashOnOff:
      return "onoff-squash";
    case Postprocessing::PhotonNumberResolving:
      return "pnr";
  }
  return "unknown";
}

std::optional<Postprocessing> parse_postprocessing(std::string_view name) {
  for (auto model : kAllPostprocessing) {
    if (to_string(model) == name) return model;
  }
  return std::nullopt;
}

double detector_response(int photons, int counts,
                         const DetectorParams& params) {
  if (photons < 0 || counts < 0) {
    throw DomainError("photon and count numbers must be non-negative");
  }
  double sum = 0.0;
  const int detected_max = std::min(photons, counts);
  for (int j = 0; j <= detected_max; ++j) {
    sum += binomial_pmf(photons, j, params.eta) *
           poisson_pmf(counts - j, params.noise);
  }
  return sum;
}

double click_probability(int photons, const DetectorParams& params) {
  if (photons < 0) throw DomainError("photon number must be non-negative");
  if (photons > 0 && params.eta == 1.0) return 1.0;
  const double log_silent =
      (photons == 0 ? 0.0 : photons * std::log1p(-params.eta)) - params.noise;
  return -std::expm1(log_silent);
}

CoincidenceProbabilities coincidence_probabilities(
    const JointPhotonDistribution& dist, const DetectorParams& params,
    Postprocessing model) {
  params.validate();
  const SiteTables tables(dist.max_pairs(), params);
  CoincidenceProbabilities out;
  std::vector<std::array<double, 2>> weights_b;
  for (const auto& block : dist.blocks()) {
    const int n = block.pairs;
    weights_b.resize(static_cast<std::size_t>(n) + 1);
    for (int kb = 0; kb <= n; ++kb) {
      weights_b[static_cast<std::size_t>(kb)] = tables.weights(kb, n - kb, model);
    }
    for (int ka = 0; ka <= n; ++ka) {
      double row_t = 0.0;
      double row_r = 0.0;
      for (int kb = 0; kb <= n; ++kb) {
        const double p = block.at(ka, kb);
        row_t += p * weights_b[static_cast<std::size_t>(kb)][0];
        row_r += p * weights_b[static_cast<std::size_t>(kb)][1];
      }
      const auto wa = tables.weights(ka, n - ka, model);
      out.p[0] += wa[0] * row_t;
      out.p[1] += wa[0] * row_r;
      out.p[2] += wa[1] * row_t;
      out.p[3] += wa[1] * row_r;
    }
  }
  return out;
}

}  // namespace bellsim
