#include <bellsim/chsh.hpp>
#include <bellsim/errors.hpp>
#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

namespace bellsim {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr Channel kT = Channel::Transmitted;
constexpr Channel kR = Channel::Reflected;

CoincidenceProbabilities make_probs(double tt, double tr, double rt, double rr) {
  CoincidenceProbabilities p;
  p.at(kT, kT) = tt;
  p.at(kT, kR) = tr;
  p.at(kR, kT) = rt;
  p.at(kR, kR) = rr;
  return p;
}

TEST(Correlation, PerfectAnticorrelation) {
  EXPECT_DOUBLE_EQ(correlation(make_probs(0.0, 0.5, 0.5, 0.0)), -1.0);
  EXPECT_DOUBLE_EQ(correlation(make_probs(0.2, 0.0, 0.0, 0.3)), 1.0);
  EXPECT_DOUBLE_EQ(correlation(make_probs(0.1, 0.1, 0.1, 0.1)), 0.0);
}

TEST(Correlation, NoCoincidencesIsAnError) {
  EXPECT_THROW(correlation(make_probs(0, 0, 0, 0)), NoCoincidenceError);
  EXPECT_THROW(correlation(make_probs(1e-320, 0, 0, 0)), NoCoincidenceError);
  EXPECT_THROW(pipeline_correlation(PdcSource(0.0), {1.0, 0.0}, Postprocessing::NaiveOnOff, {}, {}),
               NoCoincidenceError);
}

TEST(Correlation, SingletLimit) {
  const PdcSource source(1e-4);
  for (double ta : {0.0, 0.3, 1.2}) {
    for (double tb : {0.0, -0.4, 2.0}) {
      EXPECT_NEAR(pipeline_correlation(source, {1.0, 0.0}, Postprocessing::PhotonNumberResolving,
                                       {ta, 0.0}, {tb, 0.0}),
                  -std::cos(2 * (ta - tb)), 1e-7);
    }
  }
}

TEST(Correlation, LosslessNaiveExample) {
  const double e = pipeline_correlation(PdcSource(0.5), {1.0, 0.0}, Postprocessing::NaiveOnOff,
                                        {kPi / 8, 0.0}, {});
  const double expected = -std::cos(kPi / 4) / (1 - 0.125 * 0.5);
  EXPECT_NEAR(e, expected, 1e-10);
  EXPECT_NEAR(e, -0.75425, 1e-5);
}

TEST(BellParameter, Examples) {
  const double h = std::sqrt(2.0) / 2;
  EXPECT_EQ(bell_parameter(0, 0, 0, 0), 0.0);
  EXPECT_NEAR(bell_parameter(-h, h, -h, -h), 2 * std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(bell_parameter(-h, h, -h, -h), kCirelsonBound, 1e-15);
  EXPECT_EQ(bell_parameter(-1, 1, -1, -1), 4.0);
}

TEST(BellSettings, CanonicalRange) {
  const auto c = BellSettings{-0.1, kPi, 7.0, -3 * kPi - 0.2}.canonical();
  for (double v : {c.theta_a1, c.theta_a2, c.theta_b1, c.theta_b2}) {
    EXPECT_GE(v, 0.0);
    EXPECT_LT(v, kPi);
  }
  EXPECT_NEAR(c.theta_a1, kPi - 0.1, 1e-15);
  EXPECT_NEAR(c.theta_b2, kPi - 0.2, 1e-14);
}

double bell_at(const CorrelationFunction& corr, const BellSettings& s, double shift = 0.0) {
  return bell_parameter(corr(s.theta_a1 + shift, s.theta_b1 + shift),
                        corr(s.theta_a1 + shift, s.theta_b2 + shift),
                        corr(s.theta_a2 + shift, s.theta_b2 + shift),
                        corr(s.theta_a2 + shift, s.theta_b1 + shift));
}

CorrelationFunction pipeline(const PdcSource& source, DetectorParams params, Postprocessing model) {
  return [source, params, model](double a, double b) {
    return pipeline_correlation(source, params, model, {a, 0.0}, {b, 0.0});
  };
}

TEST(MaximizeBell, BellStateLimitForEveryModel) {
  const PdcSource source(1e-3);
  for (auto model : kAllPostprocessing) {
    const auto result = maximize_bell(source, {1.0, 0.0}, model);
    EXPECT_NEAR(result.bell_value, kCirelsonBound, 1e-4) << to_string(model);
    EXPECT_TRUE(result.used_difference_reduction);
    EXPECT_EQ(result.model, model);
  }
}

TEST(MaximizeBell, NaiveOnOffFakeViolation) {
  const auto result = maximize_bell(PdcSource(0.5), {1.0, 0.0}, Postprocessing::NaiveOnOff);
  // Standard settings give 4 cos(pi/4) / (1 - t^2/4) = 3.0169889..., which is
  // also the optimum for this correlation curve.
  const double standard = 4 * std::cos(kPi / 4) / (1 - 0.0625);
  EXPECT_GE(result.bell_value, standard - 1e-9);
  EXPECT_NEAR(result.bell_value, 3.016988933062603, 1e-9);
  EXPECT_GT(result.bell_value, kCirelsonBound);
}

TEST(MaximizeBell, SquashStaysBelowCirelson) {
  const auto result = maximize_bell(PdcSource(0.5), {1.0, 0.0}, Postprocessing::SquashOnOff);
  EXPECT_LE(result.bell_value, kCirelsonBound + 1e-9);
  EXPECT_GT(result.bell_value, 2.0);
}

TEST(MaximizeBell, ReportedSettingsReproduceValue) {
  const PdcSource source(0.4);
  const DetectorParams params{0.8, 1e-4};
  for (auto model : kAllPostprocessing) {
    const auto result = maximize_bell(source, params, model);
    const auto corr = pipeline(source, params, model);
    EXPECT_NEAR(bell_at(corr, result.settings), result.bell_value, 1e-12);
    const auto& e = result.correlations;
    EXPECT_NEAR(bell_parameter(e[0], e[1], e[2], e[3]), result.bell_value, 1e-15);
    for (double v : e) {
      EXPECT_GE(v, -1.0);
      EXPECT_LE(v, 1.0);
    }
  }
}

TEST(MaximizeBell, GlobalRotationInvariance) {
  const PdcSource source(0.45);
  const DetectorParams params{0.7, 1e-3};
  for (auto model : kAllPostprocessing) {
    const auto corr = pipeline(source, params, model);
    const BellSettings s{0.1, 0.9, 0.45, 1.3};
    const double base = bell_at(corr, s);
    for (double c : {0.2, 1.0, -2.5}) EXPECT_NEAR(bell_at(corr, s, c), base, 1e-10);
  }
}

TEST(MaximizeBell, NeverBelowCoarseGridOptimum) {
  const PdcSource source(0.3);
  const DetectorParams params{0.6, 1e-6};
  const auto model = Postprocessing::NaiveOnOff;
  const int grid = 16;
  double grid_best = 0.0;
  for (int i11 = 0; i11 < grid; ++i11)
    for (int i12 = 0; i12 < grid; ++i12)
      for (int i21 = 0; i21 < grid; ++i21) {
        auto e = [&](int k) {
          return pipeline_correlation(source, params, model, {((k % grid + grid) % grid) * kPi / grid, 0.0}, {});
        };
        grid_best = std::max(grid_best, bell_parameter(e(i11), e(i12), e(i21 + i12 - i11), e(i21)));
      }
  BellSearchOptions options;
  options.grid_points = grid;
  const auto result = maximize_bell(source, params, model, options);
  EXPECT_GE(result.bell_value, grid_best);
}

TEST(MaximizeBell, Deterministic) {
  const PdcSource source(0.35);
  const DetectorParams params{0.9, 1e-6};
  const auto a = maximize_bell(source, params, Postprocessing::PhotonNumberResolving);
  const auto b = maximize_bell(source, params, Postprocessing::PhotonNumberResolving);
  EXPECT_EQ(a.bell_value, b.bell_value);
  EXPECT_EQ(a.settings.theta_a2, b.settings.theta_a2);
  EXPECT_EQ(a.settings.theta_b1, b.settings.theta_b1);
  EXPECT_EQ(a.evaluations, b.evaluations);
}

TEST(MaximizeBell, VacuumWithoutNoisePropagatesNoCoincidence) {
  EXPECT_THROW(maximize_bell(PdcSource(0.0), {1.0, 0.0}, Postprocessing::NaiveOnOff),
               NoCoincidenceError);
}

TEST(MaximizeChsh, ShiftInvarianceProbe) {
  EXPECT_TRUE(depends_only_on_difference([](double a, double b) { return -std::cos(2 * (a - b)); },
                                         1e-10));
  EXPECT_FALSE(depends_only_on_difference(
      [](double a, double b) { return -std::cos(2 * a) * std::cos(2 * b); }, 1e-10));
}

TEST(MaximizeChsh, FallsBackToFullSearch) {
  // Product-form correlation: classical, bounded by 2, not shift invariant.
  const CorrelationFunction corr = [](double a, double b) {
    return std::cos(2 * a) * std::cos(2 * b);
  };
  const auto result = maximize_chsh(corr);
  EXPECT_FALSE(result.used_difference_reduction);
  EXPECT_NEAR(result.bell_value, 2.0, 1e-9);
  EXPECT_NEAR(bell_at(corr, result.settings), result.bell_value, 1e-12);
}

TEST(MaximizeChsh, SkipsUndefinedCandidates) {
  // Undefined near delta = 0; the singlet optimum stays reachable.
  const CorrelationFunction corr = [](double a, double b) {
    const double d = std::remainder(a - b, kPi);
    if (std::abs(d) < 0.05) throw NoCoincidenceError("hole");
    return -std::cos(2 * d);
  };
  const auto result = maximize_chsh(corr);
  EXPECT_NEAR(result.bell_value, kCirelsonBound, 1e-8);
}

TEST(MaximizeChsh, EverythingUndefinedThrows) {
  const CorrelationFunction corr = [](double, double) -> double {
    throw NoCoincidenceError("never");
  };
  EXPECT_THROW(maximize_chsh(corr), NoCoincidenceError);
}

TEST(MaximizeChsh, SingletReachesCirelsonBound) {
  const auto result = maximize_chsh([](double a, double b) { return -std::cos(2 * (a - b)); });
  EXPECT_NEAR(result.bell_value, kCirelsonBound, 1e-9);
}

}  // namespace
}  // namespace bellsim
