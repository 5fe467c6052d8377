#pragma once

#include <cstdint>
#include <vector>

#include "twomode/witnesses.hpp"

namespace twomode {

inline constexpr int kMaxSites = 12;

// Single-site state over the one-boson basis {|1>_a|0>_b, |0>_a|1>_b}
// (index 0 = boson in a). Validated like any density matrix.
class SiteState {
 public:
  explicit SiteState(Eigen::Matrix2cd matrix);
  static SiteState pure(const Eigen::Vector2cd& spinor);

  const Eigen::Matrix2cd& matrix() const { return mat_; }

 private:
  Eigen::Matrix2cd mat_;
};

struct SiteProductTerm {
  double weight;
  std::vector<SiteState> sites;
};

// k sites with exactly one boson each, as either a pure 2^k vector (site s
// is bit s, set bit = boson in mode b) or a separable mixture of
// site-product terms.
class MultiSiteState {
 public:
  static MultiSiteState pure(int sites, Eigen::VectorXcd amplitudes);
  static MultiSiteState ensemble(std::vector<SiteProductTerm> terms);

  int sites() const { return sites_; }
  bool is_pure() const { return terms_.empty(); }

  const Eigen::VectorXcd& amplitudes() const;
  const std::vector<SiteProductTerm>& terms() const;

  // dense 2^k density matrix, intended for small-k cross-checks
  Eigen::MatrixXcd to_density() const;

 private:
  MultiSiteState() = default;
  int sites_ = 0;
  Eigen::VectorXcd amps_;
  std::vector<SiteProductTerm> terms_;
};

struct CollectiveSpinOps {
  Eigen::MatrixXcd sx, sy, sz;
};

// sums of embedded single-site spin-1/2 operators on the 2^k sector
CollectiveSpinOps collective_spin_ops(int sites);

MultiSiteState product_state(const std::vector<SiteState>& sites);
MultiSiteState mix(std::vector<SiteProductTerm> terms);

// pure product of k identical site spinors
MultiSiteState spinor_product(int sites, const Eigen::Vector2cd& spinor);

// exp(-i chi_t S_z^2) on a pure state
MultiSiteState one_axis_twist_multisite(const MultiSiteState& state, double chi_t);

// first/second collective-spin moments; mean_number = k
SpinMoments multisite_moments(const MultiSiteState& state);

// xi^2 = k var(S_z) / (<S_x>^2 + <S_y>^2), and its optimal-frame variant
WitnessResult xi2_multisite(const MultiSiteState& state, double margin = kDetectionMargin);
WitnessResult xi2_multisite_optimized(const MultiSiteState& state,
                                      double margin = kDetectionMargin);

// Dirichlet-weighted mixture of products of Bloch-ball-uniform site states
MultiSiteState random_site_product_mixture(int sites, int terms, std::uint64_t seed);

}  // namespace twomode
