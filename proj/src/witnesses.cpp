#include "twomode/witnesses.hpp"

#include <cmath>
#include <functional>
#include <limits>

namespace twomode {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const char* axis_name(Axis a) {
  switch (a) {
    case Axis::x: return "x";
    case Axis::y: return "y";
    default: return "z";
  }
}

WitnessResult below_threshold(std::string name, double value, double threshold, double margin) {
  WitnessResult r{std::move(name), value, threshold, value - threshold, Verdict::not_detected};
  if (r.margin < -margin) r.verdict = Verdict::entangled;
  return r;
}

WitnessResult above_threshold(std::string name, double value, double threshold, double margin) {
  WitnessResult r{std::move(name), value, threshold, value - threshold, Verdict::not_detected};
  if (r.margin > margin) r.verdict = Verdict::entangled;
  return r;
}

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::entangled: return "entangled";
    case Verdict::not_detected: return "not_detected";
    default: return "undefined";
  }
}

WitnessResult spin_squeezing_test(const SpinMoments& m, Axis variance_axis, Axis mean_axis,
                                  double margin) {
  if (variance_axis == mean_axis) {
    throw UsageError("spin_squeezing_test: variance and mean axes must differ");
  }
  const int i = static_cast<int>(variance_axis);
  const int k = static_cast<int>(mean_axis);
  std::string name = std::string("spin_squeezing(S") + axis_name(variance_axis) + "|S" +
                     axis_name(mean_axis) + ")";
  return below_threshold(std::move(name), m.covariance(i, i), 0.5 * std::abs(m.means(k)), margin);
}

WitnessResult spin_squeezing_principal(const SpinMoments& m, double margin) {
  const PrincipalFrame frame = principal_frame(m);
  WitnessResult best;
  bool first = true;
  for (int i = 0; i < 3; ++i) {
    for (int k = 0; k < 3; ++k) {
      if (i == k) continue;
      const double value = frame.principal_variances(i);
      const double threshold = 0.5 * std::abs(frame.principal_means(k));
      if (first || value - threshold < best.margin) {
        first = false;
        best = below_threshold("spin_squeezing(principal J" + std::to_string(i + 1) + "|J" +
                                   std::to_string(k + 1) + ")",
                               value, threshold, margin);
      }
    }
  }
  return best;
}

WitnessResult hillery_variance_test(const SpinMoments& m, double margin) {
  const double value = m.covariance(0, 0) + m.covariance(1, 1);
  return below_threshold("hillery_variance", value, 0.5 * m.mean_number, margin);
}

WitnessResult hillery_variance_principal(const SpinMoments& m, double margin) {
  const PrincipalFrame frame = principal_frame(m);
  int polar = -1;
  double best_mean = 0.0;
  for (int i = 0; i < 3; ++i) {
    if (std::abs(frame.principal_means(i)) > best_mean) {
      best_mean = std::abs(frame.principal_means(i));
      polar = i;
    }
  }
  if (polar < 0 || best_mean <= kSsrTol * std::max(1.0, m.mean_number)) {
    polar = 2;  // no mean spin: treat the widest axis as polar
  }
  const double value = frame.principal_variances.sum() - frame.principal_variances(polar);
  return below_threshold("hillery_variance(principal)", value, 0.5 * m.mean_number, margin);
}

namespace {

WitnessResult hillery_correlation_impl(cplx moment, double threshold, int m, int n,
                                       double margin) {
  const std::string name =
      "hillery_correlation(m=" + std::to_string(m) + ",n=" + std::to_string(n) + ")";
  return above_threshold(name, std::norm(moment), threshold, margin);
}

WitnessResult ssr_correlation_impl(cplx moment, int m, int n, double margin) {
  const std::string name =
      "ssr_correlation(m=" + std::to_string(m) + ",n=" + std::to_string(n) + ")";
  return above_threshold(name, std::norm(moment), 0.0, margin);
}

void check_powers(int m, int n) {
  if (m < 1 || n < 1) throw UsageError("correlation test: powers must be >= 1");
}

}  // namespace

WitnessResult hillery_correlation_test(const DensityOperator& rho, int m, int n, double margin) {
  check_powers(m, n);
  if (m + n > rho.space().n_max()) {
    throw UsageError("hillery_correlation_test: m + n exceeds the truncation n_max");
  }
  return hillery_correlation_impl(correlation_moment(rho, m, n),
                                  correlation_threshold(rho, m, n), m, n, margin);
}

WitnessResult hillery_correlation_test(const SectorState& s, int m, int n, double margin) {
  check_powers(m, n);
  return hillery_correlation_impl(correlation_moment(s, m, n), correlation_threshold(s, m, n), m,
                                  n, margin);
}

WitnessResult ssr_correlation_test(const DensityOperator& rho, int m, int n, double margin) {
  check_powers(m, n);
  return ssr_correlation_impl(correlation_moment(rho, m, n), m, n, margin);
}

WitnessResult ssr_correlation_test(const SectorState& s, int m, int n, double margin) {
  check_powers(m, n);
  return ssr_correlation_impl(correlation_moment(s, m, n), m, n, margin);
}

namespace {

WitnessResult xi2_result(std::string name, double numerator, double denominator,
                         double mean_number, double margin) {
  if (denominator < kSsrTol * std::max(1.0, mean_number * mean_number)) {
    return {std::move(name), kNaN, 1.0, kNaN, Verdict::undefined};
  }
  return below_threshold(std::move(name), numerator / denominator, 1.0, margin);
}

}  // namespace

WitnessResult sorensen_xi2(const SpinMoments& m, double mean_number, double margin) {
  const double denom = m.means(0) * m.means(0) + m.means(1) * m.means(1);
  return xi2_result("sorensen_xi2", mean_number * m.covariance(2, 2), denom, mean_number, margin);
}

WitnessResult sorensen_xi2_optimized(const SpinMoments& m, double mean_number, double margin) {
  const double mean_sq = m.means.squaredNorm();
  if (mean_sq < kSsrTol * std::max(1.0, mean_number * mean_number)) {
    return {"sorensen_xi2(optimal)", kNaN, 1.0, kNaN, Verdict::undefined};
  }
  // minimize the variance over the plane perpendicular to the mean spin
  const Eigen::Vector3d mean_dir = m.means.normalized();
  Eigen::Vector3d seed = std::abs(mean_dir(0)) < 0.9 ? Eigen::Vector3d::UnitX()
                                                     : Eigen::Vector3d::UnitY();
  const Eigen::Vector3d e1 = (seed - seed.dot(mean_dir) * mean_dir).normalized();
  const Eigen::Vector3d e2 = mean_dir.cross(e1);
  Eigen::Matrix2d c2;
  c2 << e1.dot(m.covariance * e1), e1.dot(m.covariance * e2),
        e2.dot(m.covariance * e1), e2.dot(m.covariance * e2);
  c2 = 0.5 * (c2 + c2.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(c2);
  const double min_var = es.eigenvalues()(0);
  return xi2_result("sorensen_xi2(optimal)", mean_number * min_var, mean_sq, mean_number, margin);
}

namespace {

using CorrFn = std::function<cplx(int, int)>;
using ThreshFn = std::function<double(int, int)>;

bool name_enabled(const std::string& name, const WitnessConfig& config) {
  if (config.enabled.empty()) return true;
  for (const auto& prefix : config.enabled) {
    if (name.rfind(prefix, 0) == 0) return true;
  }
  return false;
}

WitnessReport report_impl(const SpinMoments& moments, const SsrFlags& ssr, const CorrFn& corr,
                          const ThreshFn& thresh, std::int64_t corr_power_cap,
                          const WitnessConfig& config) {
  WitnessReport rep;
  rep.moments = moments;
  rep.frame = principal_frame(moments);
  rep.ssr = ssr;

  auto push = [&](WitnessResult r) {
    if (name_enabled(r.name, config)) rep.results.push_back(std::move(r));
  };

  for (int i = 0; i < 3; ++i) {
    for (int k = 0; k < 3; ++k) {
      if (i == k) continue;
      push(spin_squeezing_test(moments, static_cast<Axis>(i), static_cast<Axis>(k),
                               config.margin));
    }
  }
  push(spin_squeezing_principal(moments, config.margin));
  push(hillery_variance_test(moments, config.margin));
  push(hillery_variance_principal(moments, config.margin));

  for (int mm = 1; mm <= config.corr_m_max; ++mm) {
    for (int nn = 1; nn <= config.corr_n_max; ++nn) {
      if (mm + nn > corr_power_cap) continue;
      const cplx moment = corr(mm, nn);
      push(hillery_correlation_impl(moment, thresh(mm, nn), mm, nn, config.margin));
      push(ssr_correlation_impl(moment, mm, nn, config.margin));
    }
  }

  push(sorensen_xi2(moments, moments.mean_number, config.margin));
  push(sorensen_xi2_optimized(moments, moments.mean_number, config.margin));

  // var(Sx)+var(Sy) >= |<Sz>| holds for every state, so this bound is
  // informational only
  rep.diagnostics.push_back({"variance_sum_vs_mean_sz",
                             moments.covariance(0, 0) + moments.covariance(1, 1),
                             std::abs(moments.means(2))});
  return rep;
}

}  // namespace

WitnessReport full_report(const DensityOperator& rho, const WitnessConfig& config) {
  const SpinMoments moments = spin_moments(rho);
  SsrFlags ssr;
  const SsrCheck g = global_ssr_check(rho);
  ssr.global_compliant = g.compliant;
  ssr.global_residual = g.residual;
  const SsrCheck la = local_ssr_check(partial_trace(rho, Mode::A));
  ssr.local_a_compliant = la.compliant;
  ssr.local_a_residual = la.residual;
  const SsrCheck lb = local_ssr_check(partial_trace(rho, Mode::B));
  ssr.local_b_compliant = lb.compliant;
  ssr.local_b_residual = lb.residual;
  return report_impl(
      moments, ssr, [&](int m, int n) { return correlation_moment(rho, m, n); },
      [&](int m, int n) { return correlation_threshold(rho, m, n); }, rho.space().n_max(),
      config);
}

WitnessReport full_report(const SectorState& s, const WitnessConfig& config) {
  const SpinMoments moments = spin_moments(s);
  // a fixed-N pure state is globally compliant, and its reduced states are
  // number-diagonal, so the SSR flags are exact
  SsrFlags ssr;
  return report_impl(
      moments, ssr, [&](int m, int n) { return correlation_moment(s, m, n); },
      [&](int m, int n) { return correlation_threshold(s, m, n); }, s.total_n(), config);
}

}  // namespace twomode
