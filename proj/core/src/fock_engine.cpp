#include "bellsim/fock_engine.hpp"

#include <cmath>
#include <string>

#include "bellsim/errors.hpp"

namespace bellsim {

namespace {

void validate_tanh_chi(double tanh_chi) {
  if (!(tanh_chi >= 0.0 && tanh_chi < 1.0)) {
    throw DomainError("tanh_chi must lie in [0, 1), got " +
                      std::to_string(tanh_chi));
  }
}

int resolve_cutoff(double tanh_chi, const CutoffPolicy& cutoff) {
  if (const auto* fixed = std::get_if<FixedCutoff>(&cutoff)) {
    if (fixed->max_pairs < 0 || fixed->max_pairs > kMaxPairLimit) {
      throw DomainError("fixed cutoff must lie in [0, " +
                        std::to_string(kMaxPairLimit) + "]");
    }
    return fixed->max_pairs;
  }
  const double tol = std::get<AdaptiveCutoff>(cutoff).tail_tolerance;
  if (!(tol > 0.0 && tol < 1.0)) {
    throw DomainError("adaptive tail tolerance must lie in (0, 1)");
  }
  for (int n = 0; n <= kMaxPairLimit; ++n) {
    if (pair_tail_mass(tanh_chi, n) <= tol) return n;
  }
  throw DomainError("tanh_chi " + std::to_string(tanh_chi) +
                    " needs more than " + std::to_string(kMaxPairLimit) +
                    " pair blocks for the requested tolerance");
}

}  // namespace

double pair_weight(double tanh_chi, int pairs) {
  const double x = tanh_chi * tanh_chi;
  const double y = 1.0 - x;
  return (pairs + 1) * std::pow(x, pairs) * y * y;
}

double pair_tail_mass(double tanh_chi, int max_pairs) {
  // sum_{n>N} (n+1) x^n (1-x)^2 = x^{N+1} [x + (N+2)(1-x)]
  const double x = tanh_chi * tanh_chi;
  return std::pow(x, max_pairs + 1) * (x + (max_pairs + 2) * (1.0 - x));
}

PdcSource::PdcSource(double tanh_chi, CutoffPolicy cutoff)
    : tanh_chi_(tanh_chi), cutoff_(cutoff), max_pairs_(0) {
  validate_tanh_chi(tanh_chi);
  max_pairs_ = resolve_cutoff(tanh_chi, cutoff_);
}

double PdcSource::pair_weight(int pairs) const {
  return bellsim::pair_weight(tanh_chi_, pairs);
}

double PdcSource::truncation_deficit() const {
  return pair_tail_mass(tanh_chi_, max_pairs_);
}

double PairBlockState::norm_squared() const {
  double sum = 0.0;
  for (const auto& a : amplitudes) sum += std::norm(a);
  return sum;
}

SectorUnitaryLadder::SectorUnitaryLadder(AnalyzerSetting setting)
    : phase_cos_(std::polar(1.0, setting.phi) * std::cos(setting.theta)),
      phase_sin_(std::polar(1.0, setting.phi) * std::sin(setting.theta)),
      sin_(std::sin(setting.theta)),
      cos_(std::cos(setting.theta)),
      current_{Complex{1.0, 0.0}} {}

void SectorUnitaryLadder::step() {
  // Input creation operators in terms of the outputs:
  //   a_H^+ = e^{i phi} (cos a_T^+ - sin a_R^+),  a_V^+ = sin a_T^+ + cos a_R^+.
  // Column k of the (n+1)-photon unitary is the image of
  //   |k, n+1-k> = [sqrt(k) a_H^+ |k-1, n+1-k> + sqrt(n+1-k) a_V^+ |k, n-k>] / (n+1).
  // Using both paths keeps every coefficient at most 1, so roundoff does not
  // grow from one sector to the next; a single creation operator per column
  // amplifies it geometrically.
  const int n = photons_;
  const std::size_t old_side = static_cast<std::size_t>(n) + 1;
  const std::size_t new_side = old_side + 1;
  next_.assign(new_side * new_side, Complex{});

  auto old_at = [&](int j, int col) -> Complex {
    if (j < 0 || j > n || col < 0 || col > n) return Complex{};
    return current_[static_cast<std::size_t>(j) * old_side + static_cast<std::size_t>(col)];
  };

  const double inv_total = 1.0 / static_cast<double>(n + 1);
  for (int j = 0; j <= n + 1; ++j) {
    const double up = std::sqrt(static_cast<double>(j));
    const double side = std::sqrt(static_cast<double>(n + 1 - j));
    for (int k = 0; k <= n + 1; ++k) {
      const double via_h = std::sqrt(static_cast<double>(k));
      const double via_v = std::sqrt(static_cast<double>(n + 1 - k));
      const Complex from_h =
          phase_cos_ * up * old_at(j - 1, k - 1) - phase_sin_ * side * old_at(j, k - 1);
      const Complex from_v = sin_ * up * old_at(j - 1, k) + cos_ * side * old_at(j, k);
      next_[static_cast<std::size_t>(j) * new_side + static_cast<std::size_t>(k)] =
          (via_h * from_h + via_v * from_v) * inv_total;
    }
  }
  current_.swap(next_);
  ++photons_;
}

std::vector<PairBlockState> build_pdc_state(const PdcSource& source) {
  std::vector<PairBlockState> blocks;
  blocks.reserve(static_cast<std::size_t>(source.max_pairs()) + 1);
  for (int n = 0; n <= source.max_pairs(); ++n) {
    PairBlockState block;
    block.pairs = n;
    block.weight = source.pair_weight(n);
    const std::size_t side = block.side();
    block.amplitudes.assign(side * side, Complex{});
    const double amp = 1.0 / std::sqrt(static_cast<double>(n + 1));
    // m photons in V_A and H_B: H_A holds n-m, H_B holds m.
    for (int m = 0; m <= n; ++m) {
      block.amplitudes[static_cast<std::size_t>(n - m) * side +
                       static_cast<std::size_t>(m)] =
          (m % 2 == 0) ? amp : -amp;
    }
    blocks.push_back(std::move(block));
  }
  return blocks;
}

PairBlockState apply_analyzer(const PairBlockState& block,
                              const AnalyzerSetting& setting_a,
                              const AnalyzerSetting& setting_b) {
  SectorUnitaryLadder ladder_a(setting_a);
  SectorUnitaryLadder ladder_b(setting_b);
  for (int i = 0; i < block.pairs; ++i) {
    ladder_a.step();
    ladder_b.step();
  }
  const std::size_t side = block.side();
  std::vector<Complex> half(side * side, Complex{});
  for (std::size_t ja = 0; ja < side; ++ja) {
    for (std::size_t ka = 0; ka < side; ++ka) {
      const Complex u = ladder_a.element(static_cast<int>(ja), static_cast<int>(ka));
      if (u == Complex{}) continue;
      for (std::size_t kb = 0; kb < side; ++kb) {
        half[ja * side + kb] += u * block.amplitudes[ka * side + kb];
      }
    }
  }
  PairBlockState out{block.pairs, block.weight,
                     std::vector<Complex>(side * side, Complex{})};
  for (std::size_t ja = 0; ja < side; ++ja) {
    for (std::size_t jb = 0; jb < side; ++jb) {
      Complex sum{};
      for (std::size_t kb = 0; kb < side; ++kb) {
        sum += half[ja * side + kb] *
               ladder_b.element(static_cast<int>(jb), static_cast<int>(kb));
      }
      out.amplitudes[ja * side + jb] = sum;
    }
  }
  return out;
}

double JointPhotonDistribution::probability(int n_ta, int n_ra, int n_tb,
                                            int n_rb) const {
  if (n_ta < 0 || n_ra < 0 || n_tb < 0 || n_rb < 0) return 0.0;
  const int n = n_ta + n_ra;
  if (n != n_tb + n_rb || n > max_pairs()) return 0.0;
  return blocks_[static_cast<std::size_t>(n)].at(n_ta, n_tb);
}

double JointPhotonDistribution::total() const {
  double sum = 0.0;
  for (const auto& block : blocks_) {
    for (double p : block.probabilities) sum += p;
  }
  return sum;
}

JointPhotonDistribution joint_photon_distribution(
    const PdcSource& source, const AnalyzerSetting& setting_a,
    const AnalyzerSetting& setting_b) {
  SectorUnitaryLadder ladder_a(setting_a);
  SectorUnitaryLadder ladder_b(setting_b);
  const bool rotate_b = !setting_b.is_identity();

  std::vector<JointPhotonDistribution::Block> blocks;
  blocks.reserve(static_cast<std::size_t>(source.max_pairs()) + 1);
  std::vector<Complex> half;
  for (int n = 0; n <= source.max_pairs(); ++n) {
    if (n > 0) {
      ladder_a.step();
      if (rotate_b) ladder_b.step();
    }
    const std::size_t side = static_cast<std::size_t>(n) + 1;
    const double weight = source.pair_weight(n);
    const double amp = 1.0 / std::sqrt(static_cast<double>(n + 1));

    // The unrotated block is anti-diagonal, so site A's rotation is a gather:
    // half(j_A, m) = U_A(j_A, n-m) (-1)^m / sqrt(n+1).
    half.assign(side * side, Complex{});
    for (std::size_t ja = 0; ja < side; ++ja) {
      for (std::size_t m = 0; m < side; ++m) {
        const double sign = (m % 2 == 0) ? amp : -amp;
        half[ja * side + m] = sign * ladder_a.element(static_cast<int>(ja),
                                                       n - static_cast<int>(m));
      }
    }

    JointPhotonDistribution::Block block{n, std::vector<double>(side * side)};
    for (std::size_t ja = 0; ja < side; ++ja) {
      for (std::size_t jb = 0; jb < side; ++jb) {
        Complex value;
        if (rotate_b) {
          for (std::size_t kb = 0; kb < side; ++kb) {
            value += half[ja * side + kb] *
                     ladder_b.element(static_cast<int>(jb), static_cast<int>(kb));
          }
        } else {
          value = half[ja * side + jb];
        }
        block.probabilities[ja * side + jb] = weight * std::norm(value);
      }
    }
    blocks.push_back(std::move(block));
  }
  return JointPhotonDistribution(std::move(blocks), source.truncation_deficit());
}

}  // namespace bellsim
