#pragma once

#include <string>
#include <vector>

#include "twomode/spin.hpp"
#include "twomode/states.hpp"

namespace twomode {

enum class Verdict { entangled, not_detected, undefined };

std::string to_string(Verdict v);

// One evaluated entanglement test. `margin` is value - threshold; a verdict
// of entangled always means the defining strict inequality held by more
// than the detection margin. For an undefined verdict value and margin are
// NaN.
struct WitnessResult {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  double margin = 0.0;
  Verdict verdict = Verdict::not_detected;
};

// Informational quantity that is not a valid entanglement test on its own.
struct Diagnostic {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
};

struct SsrFlags {
  bool global_compliant = true;
  double global_residual = 0.0;
  bool local_a_compliant = true;
  double local_a_residual = 0.0;
  bool local_b_compliant = true;
  double local_b_residual = 0.0;
};

struct WitnessConfig {
  int corr_m_max = 2;  // powers scanned by the correlation tests
  int corr_n_max = 2;
  double margin = kDetectionMargin;
  std::vector<std::string> enabled;  // name prefixes; empty = everything
};

struct WitnessReport {
  SpinMoments moments;
  PrincipalFrame frame;
  SsrFlags ssr;
  std::vector<WitnessResult> results;
  std::vector<Diagnostic> diagnostics;
};

enum class Axis { x = 0, y = 1, z = 2 };

// var(S_i) < |<S_k>|/2 detects entanglement (i != k)
WitnessResult spin_squeezing_test(const SpinMoments& m, Axis variance_axis, Axis mean_axis,
                                  double margin = kDetectionMargin);

// same test over all principal-frame axis pairs, strongest pair reported
WitnessResult spin_squeezing_principal(const SpinMoments& m, double margin = kDetectionMargin);

// var(S_x) + var(S_y) < <N>/2 detects entanglement
WitnessResult hillery_variance_test(const SpinMoments& m, double margin = kDetectionMargin);

// Hillery sum evaluated on the two principal axes perpendicular to the
// mean-spin direction (the mean falls back to the largest-variance axis
// when all principal means vanish).
WitnessResult hillery_variance_principal(const SpinMoments& m, double margin = kDetectionMargin);

// |<a^m (b^dag)^n>|^2 > <(a^dag)^m a^m (b^dag)^n b^n> detects entanglement
WitnessResult hillery_correlation_test(const DensityOperator& rho, int m, int n,
                                       double margin = kDetectionMargin);
WitnessResult hillery_correlation_test(const SectorState& s, int m, int n,
                                       double margin = kDetectionMargin);

// under the local SSR any nonzero <a^m (b^dag)^n> already signals
// entanglement: |<a^m (b^dag)^n>|^2 > 0
WitnessResult ssr_correlation_test(const DensityOperator& rho, int m, int n,
                                   double margin = kDetectionMargin);
WitnessResult ssr_correlation_test(const SectorState& s, int m, int n,
                                   double margin = kDetectionMargin);

// xi^2 = N var(S_z) / (<S_x>^2 + <S_y>^2) < 1 detects entanglement;
// undefined when the denominator is numerically zero
WitnessResult sorensen_xi2(const SpinMoments& m, double mean_number,
                           double margin = kDetectionMargin);

// xi^2 in its optimal frame: mean spin along x, z picked to minimize the
// variance perpendicular to the mean
WitnessResult sorensen_xi2_optimized(const SpinMoments& m, double mean_number,
                                     double margin = kDetectionMargin);

WitnessReport full_report(const DensityOperator& rho, const WitnessConfig& config = {});
WitnessReport full_report(const SectorState& s, const WitnessConfig& config = {});

}  // namespace twomode
