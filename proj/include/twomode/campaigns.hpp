#pragma once

#include <cstdint>
#include <vector>

#include "twomode/multisite.hpp"
#include "twomode/witnesses.hpp"

namespace twomode {

// Soundness sampling over random separable states. Margins are signed so
// that a sound bound is >= 0 (up to the detection tolerance); `pass`
// aggregates the assertions appropriate to the SSR mode.
struct SeparableCampaign {
  SsrMode mode;
  std::int64_t n_max;
  int max_terms;
  int samples;
  std::uint64_t seed;

  // local-SSR assertions (pairwise squeezing bounds and vanishing coherences)
  double min_squeezing_margin;  // min over samples and all 6 axis pairs
  double max_abs_corr;          // max |<a^m (b^dag)^n>|, m,n in {1,2}
  double max_abs_mean_sx;
  double max_abs_mean_sy;

  // unrestricted assertions (variance-sum and correlation bounds)
  double min_hillery_margin;    // min of var_x + var_y - <N>/2
  double min_corr_bound_margin; // min of threshold - |moment|^2

  bool pass;
};

SeparableCampaign run_separable_campaign(std::int64_t n_max, int max_terms, int samples,
                                         std::uint64_t seed, SsrMode mode);

struct SorensenCampaign {
  int sites;
  double chi_t;
  int samples;
  std::uint64_t seed;

  double min_separable_xi2;  // over defined samples
  int undefined_samples;
  double css_xi2;            // identical-site CSS along x
  double twisted_xi2;        // rotation-optimized, after one-axis twisting
  bool pass;                 // separable minimum >= 1 - tolerance
};

SorensenCampaign run_sorensen_campaign(int sites, double chi_t, int samples, std::uint64_t seed);

// One row of the relative-phase sweep, in the frame where the first
// principal component is the number difference.
struct PhaseScanRow {
  std::int64_t n;
  double var_jx, var_jy, var_jz;
  double mean_jz;
  double sum_var_sxy;
  double ratio_var_jx_over_n2;
  double ratio_mean_jz_over_n;
  double hillery_threshold;
};

PhaseScanRow phase_scan_row(std::int64_t n, std::int64_t p);

// finite-N principal-frame mean: -sum_j sqrt((N-j)(j+1)) / (N+1)
double phase_state_mean_jz(std::int64_t n);

}  // namespace twomode
