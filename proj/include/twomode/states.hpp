#pragma once

#include <cstdint>
#include <vector>

#include "twomode/fock.hpp"

namespace twomode {

enum class SsrMode { local_ssr, unrestricted };

// Parameters of the relative-phase eigenstate: amplitudes
// e^{i(n_b - n/2) theta} / sqrt(n+1) with theta = 2 pi p / (n+1).
struct RelativePhaseSpec {
  std::int64_t n = 0;
  std::int64_t p = 0;

  RelativePhaseSpec(std::int64_t n_, std::int64_t p_);
  double theta() const;
};

struct SeparableTerm {
  double weight;
  SingleModeDensity rho_a;
  SingleModeDensity rho_b;
};

// Convex mixture of product states, sum_R P_R rho_R^A (x) rho_R^B. Under
// local_ssr every factor must be diagonal in the number basis.
class SeparableEnsemble {
 public:
  SeparableEnsemble(std::vector<SeparableTerm> terms, SsrMode mode);

  const std::vector<SeparableTerm>& terms() const { return terms_; }
  SsrMode mode() const { return mode_; }

 private:
  std::vector<SeparableTerm> terms_;
  SsrMode mode_;
};

StateVector fock_state(const FockSpace& space, std::int64_t n_a, std::int64_t n_b);

// (|n,0> + |0,n>)/sqrt(2)
StateVector noon_state(const FockSpace& space, std::int64_t n);

StateVector relative_phase_state(const FockSpace& space, const RelativePhaseSpec& spec);
SectorState relative_phase_sector(const RelativePhaseSpec& spec);

// |alpha>_A (x) |beta>_B as a density operator. The amplitude outside the
// truncation is dropped and recorded; above kWeightTol it is an error.
struct CoherentProductResult {
  DensityOperator rho;
  double dropped_weight;
};
CoherentProductResult coherent_product(const FockSpace& space, cplx alpha, cplx beta);

// Coherent spin state of n bosons: binomial amplitudes over one sector with
// polar/azimuthal angles (theta, phi) on the collective Bloch sphere.
SectorState css_sector(std::int64_t n, double theta, double phi);
StateVector css_state(const FockSpace& space, std::int64_t n, double theta, double phi);

// One-axis twisting e^{-i chi_t S_z^2}: multiplies each fixed-(n_a,n_b)
// amplitude by e^{-i chi_t ((n_b-n_a)/2)^2}.
SectorState one_axis_twist(const SectorState& s, double chi_t);
StateVector one_axis_twist(const StateVector& psi, double chi_t);

// Embed an ensemble as a density operator on `space`. Product weight falling
// outside the truncation must stay below kWeightTol; the result is
// renormalized and validated.
DensityOperator assemble_separable(const SeparableEnsemble& ensemble, const FockSpace& space);

struct SsrCheck {
  bool compliant;
  double residual;  // largest offending coherence magnitude
};

// global SSR: no coherence between different total-number sectors
SsrCheck global_ssr_check(const DensityOperator& rho);
// local SSR: a single-mode state must be diagonal in the number basis
SsrCheck local_ssr_check(const SingleModeDensity& rho);

// Dephasing projections onto the SSR-compliant subspaces. Idempotent,
// trace- and positivity-preserving.
DensityOperator ssr_dephase_global(const DensityOperator& rho);
DensityOperator ssr_dephase_local(const DensityOperator& rho);

// Diagonal single-mode state with flat-Dirichlet occupation weights.
SingleModeDensity random_local_ssr_density(std::int64_t max_n, std::uint64_t seed);

// Random ensemble with Dirichlet term weights. Factors occupy at most
// floor(n_max/2) quanta so products embed exactly at n_max. local_ssr draws
// diagonal factors, unrestricted draws Haar-random pure factors.
SeparableEnsemble random_separable(const FockSpace& space, int terms, std::uint64_t seed,
                                   SsrMode mode);

}  // namespace twomode
