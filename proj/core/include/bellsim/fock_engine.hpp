#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <variant>
#include <vector>

namespace bellsim {

using Complex = std::complex<double>;

/// Keep pair blocks n = 0..max_pairs.
struct FixedCutoff {
  int max_pairs = 0;
};

/// Keep the smallest number of pair blocks whose discarded probability mass
/// does not exceed `tail_tolerance`.
struct AdaptiveCutoff {
  double tail_tolerance = 1e-12;
};

using CutoffPolicy = std::variant<FixedCutoff, AdaptiveCutoff>;

/// Largest pair number any source may resolve to. Distributions scale as
/// max_pairs^3 in memory.
inline constexpr int kMaxPairLimit = 300;

/// Probability of the n-pair component of the two-mode squeezed source,
/// (n+1) t^{2n} (1-t^2)^2.
double pair_weight(double tanh_chi, int pairs);

/// Probability mass of all components with more than `max_pairs` pairs.
double pair_tail_mass(double tanh_chi, int max_pairs);

/// Parametric down-conversion source emitting the four-mode polarization
/// entangled state, parameterised by tanh(chi) rather than chi itself.
class PdcSource {
 public:
  /// Throws DomainError if tanh_chi is outside [0, 1), the tolerance is not
  /// in (0, 1), or the resolved cutoff exceeds kMaxPairLimit.
  explicit PdcSource(double tanh_chi, CutoffPolicy cutoff = AdaptiveCutoff{});

  double tanh_chi() const { return tanh_chi_; }
  const CutoffPolicy& cutoff() const { return cutoff_; }
  int max_pairs() const { return max_pairs_; }
  double pair_weight(int pairs) const;
  /// Mass discarded beyond max_pairs(), from the closed-form geometric tail.
  double truncation_deficit() const;

 private:
  double tanh_chi_;
  CutoffPolicy cutoff_;
  int max_pairs_;
};

/// Polarization analyzer at one site: half-wave-plate rotation `theta` and a
/// phase shifter `phi` acting on the horizontal mode,
///   a_T =  e^{i phi} a_H cos(theta) + a_V sin(theta)
///   a_R = -e^{i phi} a_H sin(theta) + a_V cos(theta)
struct AnalyzerSetting {
  double theta = 0.0;
  double phi = 0.0;

  bool is_identity() const { return theta == 0.0 && phi == 0.0; }
};

/// The n-pair component of the source state. Each site holds exactly n
/// photons, so a site basis state is fixed by the count in its first mode:
/// H before the analyzer, T after it. amplitudes is row-major over
/// (first-mode count at A, first-mode count at B), each in 0..n.
struct PairBlockState {
  int pairs = 0;
  double weight = 1.0;
  std::vector<Complex> amplitudes;

  std::size_t side() const { return static_cast<std::size_t>(pairs) + 1; }
  Complex amplitude(int first_mode_a, int first_mode_b) const {
    return amplitudes[static_cast<std::size_t>(first_mode_a) * side() +
                      static_cast<std::size_t>(first_mode_b)];
  }
  double norm_squared() const;
};

/// Unitary induced by an analyzer on the n-photon sector of its two input
/// modes, built for n = 0, 1, 2, ... by adding one photon at a time. Element
/// (j, k) is <j_T, (n-j)_R | U | k_H, (n-k)_V>.
class SectorUnitaryLadder {
 public:
  explicit SectorUnitaryLadder(AnalyzerSetting setting);

  int photons() const { return photons_; }
  /// Row-major (n+1) x (n+1) matrix for the current photon number.
  std::span<const Complex> matrix() const { return current_; }
  Complex element(int out_first, int in_first) const {
    return current_[static_cast<std::size_t>(out_first) * (photons_ + 1) +
                    static_cast<std::size_t>(in_first)];
  }
  /// Advances to photons() + 1.
  void step();

 private:
  Complex phase_cos_;
  Complex phase_sin_;
  double sin_;
  double cos_;
  int photons_ = 0;
  std::vector<Complex> current_;
  std::vector<Complex> next_;
};

/// Pair blocks n = 0..max_pairs of the source state, before any analyzer.
std::vector<PairBlockState> build_pdc_state(const PdcSource& source);

/// Re-expresses `block` in the transmitted/reflected basis at both sites.
PairBlockState apply_analyzer(const PairBlockState& block,
                              const AnalyzerSetting& setting_a,
                              const AnalyzerSetting& setting_b);

/// Photon-number statistics of the four analyzer output channels
/// (T_A, R_A, T_B, R_B). Only configurations with equal site totals exist;
/// they are stored block-wise as row-major (n_TA, n_TB) tables.
class JointPhotonDistribution {
 public:
  struct Block {
    int pairs = 0;
    std::vector<double> probabilities;

    std::size_t side() const { return static_cast<std::size_t>(pairs) + 1; }
    double at(int n_ta, int n_tb) const {
      return probabilities[static_cast<std::size_t>(n_ta) * side() +
                           static_cast<std::size_t>(n_tb)];
    }
  };

  JointPhotonDistribution(std::vector<Block> blocks, double truncation_deficit)
      : blocks_(std::move(blocks)), truncation_deficit_(truncation_deficit) {}

  /// Zero for configurations outside the retained support.
  double probability(int n_ta, int n_ra, int n_tb, int n_rb) const;
  const std::vector<Block>& blocks() const { return blocks_; }
  int max_pairs() const { return static_cast<int>(blocks_.size()) - 1; }
  double truncation_deficit() const { return truncation_deficit_; }
  double total() const;

  /// Calls f(n_ta, n_ra, n_tb, n_rb, probability) for every stored entry.
  template <typename F>
  void for_each(F&& f) const {
    for (const auto& block : blocks_) {
      const int n = block.pairs;
      for (int ka = 0; ka <= n; ++ka) {
        for (int kb = 0; kb <= n; ++kb) {
          f(ka, n - ka, kb, n - kb, block.at(ka, kb));
        }
      }
    }
  }

 private:
  std::vector<Block> blocks_;
  double truncation_deficit_;
};

JointPhotonDistribution joint_photon_distribution(
    const PdcSource& source, const AnalyzerSetting& setting_a,
    const AnalyzerSetting& setting_b);

}  // namespace bellsim
