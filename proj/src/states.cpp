#include "twomode/states.hpp"

#include <cmath>
#include <string>

#include "twomode/rng.hpp"

namespace twomode {

namespace {

const cplx kI{0.0, 1.0};

}  // namespace

RelativePhaseSpec::RelativePhaseSpec(std::int64_t n_, std::int64_t p_) : n(n_), p(p_) {
  if (n <= 0 || n % 2 != 0) {
    throw UsageError("RelativePhaseSpec: n must be positive and even, got " + std::to_string(n));
  }
  if (p < -n / 2 || p > n / 2) {
    throw UsageError("RelativePhaseSpec: p must lie in [-n/2, n/2], got " + std::to_string(p));
  }
}

double RelativePhaseSpec::theta() const {
  return 2.0 * M_PI * static_cast<double>(p) / static_cast<double>(n + 1);
}

SeparableEnsemble::SeparableEnsemble(std::vector<SeparableTerm> terms, SsrMode mode)
    : terms_(std::move(terms)), mode_(mode) {
  if (terms_.empty()) throw UsageError("SeparableEnsemble: need at least one term");
  double total = 0.0;
  for (const auto& t : terms_) {
    if (t.weight < 0.0) throw ValidationError("SeparableEnsemble: negative term weight");
    total += t.weight;
  }
  if (std::abs(total - 1.0) > kWeightTol) {
    throw ValidationError("SeparableEnsemble: weights sum to " + std::to_string(total));
  }
  if (mode_ == SsrMode::local_ssr) {
    for (const auto& t : terms_) {
      for (const auto* f : {&t.rho_a, &t.rho_b}) {
        if (!local_ssr_check(*f).compliant) {
          throw ValidationError(
              "SeparableEnsemble: off-diagonal factor violates the local particle-number SSR");
        }
      }
    }
  }
}

StateVector fock_state(const FockSpace& space, std::int64_t n_a, std::int64_t n_b) {
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(space.dim());
  amps(space.index_of(n_a, n_b)) = 1.0;
  return StateVector(space, std::move(amps));
}

StateVector noon_state(const FockSpace& space, std::int64_t n) {
  if (n <= 0) throw UsageError("noon_state: n must be positive");
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(space.dim());
  amps(space.index_of(n, 0)) = M_SQRT1_2;
  amps(space.index_of(0, n)) = M_SQRT1_2;
  return StateVector(space, std::move(amps));
}

SectorState relative_phase_sector(const RelativePhaseSpec& spec) {
  const std::int64_t n = spec.n;
  const double theta = spec.theta();
  Eigen::VectorXcd amps(n + 1);
  const double norm = 1.0 / std::sqrt(static_cast<double>(n + 1));
  for (std::int64_t j = 0; j <= n; ++j) {
    const double k = static_cast<double>(j) - 0.5 * static_cast<double>(n);
    amps(j) = norm * std::exp(kI * (k * theta));
  }
  return SectorState(n, std::move(amps));
}

StateVector relative_phase_state(const FockSpace& space, const RelativePhaseSpec& spec) {
  return embed_sector(space, relative_phase_sector(spec));
}

CoherentProductResult coherent_product(const FockSpace& space, cplx alpha, cplx beta) {
  const std::int64_t n_max = space.n_max();
  // per-mode coherent amplitudes up to n_max, with the Gaussian prefactors
  Eigen::VectorXcd ca(n_max + 1), cb(n_max + 1);
  const double ga = std::exp(-0.5 * std::norm(alpha));
  const double gb = std::exp(-0.5 * std::norm(beta));
  ca(0) = ga;
  cb(0) = gb;
  for (std::int64_t k = 1; k <= n_max; ++k) {
    ca(k) = ca(k - 1) * alpha / std::sqrt(static_cast<double>(k));
    cb(k) = cb(k - 1) * beta / std::sqrt(static_cast<double>(k));
  }
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(space.dim());
  double kept = 0.0;
  for (std::int64_t n_a = 0; n_a <= n_max; ++n_a) {
    for (std::int64_t n_b = 0; n_a + n_b <= n_max; ++n_b) {
      const cplx c = ca(n_a) * cb(n_b);
      amps(space.index_of(n_a, n_b)) = c;
      kept += std::norm(c);
    }
  }
  const double dropped = 1.0 - kept;
  if (dropped > kWeightTol) {
    throw ValidationError("coherent_product: truncated weight " + std::to_string(dropped) +
                          " exceeds tolerance; raise n_max");
  }
  StateVector psi(space, std::move(amps));
  return {make_density(psi), dropped};
}

SectorState css_sector(std::int64_t n, double theta, double phi) {
  if (n <= 0) throw UsageError("css_sector: n must be positive");
  // S_z = (n_b - n_a)/2, so "spin up" is a boson in mode b. Amplitude at
  // n_b = j is sqrt(C(n,j)) cos^j(theta/2) (e^{i phi} sin(theta/2))^{n-j},
  // putting the mean spin at polar angle theta, azimuth phi.
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  Eigen::VectorXcd amps(n + 1);
  // log-binomial keeps n ~ 4000 finite
  std::vector<double> log_fact(n + 1, 0.0);
  for (std::int64_t k = 1; k <= n; ++k) {
    log_fact[k] = log_fact[k - 1] + std::log(static_cast<double>(k));
  }
  for (std::int64_t j = 0; j <= n; ++j) {
    const double log_binom = log_fact[n] - log_fact[j] - log_fact[n - j];
    double mag = 0.0;
    if ((std::abs(c) > 0.0 || j == 0) && (std::abs(s) > 0.0 || j == n)) {
      const double log_mag = 0.5 * log_binom +
                             static_cast<double>(j) * std::log(std::max(std::abs(c), 1e-300)) +
                             static_cast<double>(n - j) * std::log(std::max(std::abs(s), 1e-300));
      mag = std::exp(log_mag);
    }
    const double sign = ((c < 0.0 && j % 2 != 0) ? -1.0 : 1.0) *
                        ((s < 0.0 && (n - j) % 2 != 0) ? -1.0 : 1.0);
    amps(j) = sign * mag * std::exp(kI * (phi * static_cast<double>(n - j)));
  }
  return SectorState(n, std::move(amps));
}

StateVector css_state(const FockSpace& space, std::int64_t n, double theta, double phi) {
  return embed_sector(space, css_sector(n, theta, phi));
}

SectorState one_axis_twist(const SectorState& s, double chi_t) {
  const std::int64_t n = s.total_n();
  Eigen::VectorXcd amps = s.amplitudes();
  for (std::int64_t j = 0; j <= n; ++j) {
    const double k = static_cast<double>(j) - 0.5 * static_cast<double>(n);  // S_z eigenvalue
    amps(j) *= std::exp(-kI * (chi_t * k * k));
  }
  return SectorState(n, std::move(amps));
}

StateVector one_axis_twist(const StateVector& psi, double chi_t) {
  const auto& space = psi.space();
  Eigen::VectorXcd amps = psi.amplitudes();
  for (std::int64_t i = 0; i < space.dim(); ++i) {
    const auto [n_a, n_b] = space.occupations_of(i);
    const double k = 0.5 * static_cast<double>(n_b - n_a);
    amps(i) *= std::exp(-kI * (chi_t * k * k));
  }
  return StateVector(space, std::move(amps));
}

DensityOperator assemble_separable(const SeparableEnsemble& ensemble, const FockSpace& space) {
  const std::int64_t n_max = space.n_max();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(space.dim(), space.dim());
  double dropped = 0.0;
  for (const auto& term : ensemble.terms()) {
    const auto& ra = term.rho_a.matrix();
    const auto& rb = term.rho_b.matrix();
    const std::int64_t cap_a = term.rho_a.max_n();
    const std::int64_t cap_b = term.rho_b.max_n();
    for (std::int64_t na = 0; na <= cap_a; ++na) {
      for (std::int64_t nb = 0; nb <= cap_b; ++nb) {
        if (na + nb > n_max) {
          dropped += term.weight * ra(na, na).real() * rb(nb, nb).real();
          continue;
        }
        const std::int64_t row = space.index_of(na, nb);
        for (std::int64_t ma = 0; ma <= cap_a; ++ma) {
          for (std::int64_t mb = 0; mb <= cap_b; ++mb) {
            if (ma + mb > n_max) continue;
            m(row, space.index_of(ma, mb)) += term.weight * ra(na, ma) * rb(nb, mb);
          }
        }
      }
    }
  }
  if (dropped > kWeightTol) {
    throw ValidationError("assemble_separable: product weight " + std::to_string(dropped) +
                          " falls outside the truncation");
  }
  const double tr = m.trace().real();
  if (tr <= 0.0) throw ValidationError("assemble_separable: vanishing trace");
  m /= tr;
  return DensityOperator(space, std::move(m));
}

SsrCheck global_ssr_check(const DensityOperator& rho) {
  const auto& space = rho.space();
  double residual = 0.0;
  for (std::int64_t i = 0; i < space.dim(); ++i) {
    const std::int64_t ni = space.total_of(i);
    for (std::int64_t j = i + 1; j < space.dim(); ++j) {
      if (space.total_of(j) == ni) continue;
      residual = std::max(residual, std::abs(rho.matrix()(i, j)));
    }
  }
  return {residual <= kSsrTol, residual};
}

SsrCheck local_ssr_check(const SingleModeDensity& rho) {
  double residual = 0.0;
  const auto& m = rho.matrix();
  for (std::int64_t i = 0; i < m.rows(); ++i) {
    for (std::int64_t j = i + 1; j < m.cols(); ++j) {
      residual = std::max(residual, std::abs(m(i, j)));
    }
  }
  return {residual <= kSsrTol, residual};
}

DensityOperator ssr_dephase_global(const DensityOperator& rho) {
  const auto& space = rho.space();
  Eigen::MatrixXcd m = rho.matrix();
  for (std::int64_t i = 0; i < space.dim(); ++i) {
    for (std::int64_t j = 0; j < space.dim(); ++j) {
      if (space.total_of(i) != space.total_of(j)) m(i, j) = 0.0;
    }
  }
  return DensityOperator(space, std::move(m));
}

DensityOperator ssr_dephase_local(const DensityOperator& rho) {
  // keeping only occupation-diagonal entries enforces the SSR in each mode
  const auto& space = rho.space();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(space.dim(), space.dim());
  m.diagonal() = rho.matrix().diagonal();
  return DensityOperator(space, std::move(m));
}

SingleModeDensity random_local_ssr_density(std::int64_t max_n, std::uint64_t seed) {
  if (max_n < 0) throw UsageError("random_local_ssr_density: max_n must be non-negative");
  Rng rng(seed);
  const auto w = rng.dirichlet(static_cast<std::size_t>(max_n + 1));
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(max_n + 1, max_n + 1);
  for (std::int64_t k = 0; k <= max_n; ++k) m(k, k) = w[static_cast<std::size_t>(k)];
  return SingleModeDensity(std::move(m));
}

namespace {

SingleModeDensity random_pure_density(std::int64_t max_n, Rng& rng) {
  Eigen::VectorXcd v(max_n + 1);
  for (std::int64_t k = 0; k <= max_n; ++k) v(k) = rng.complex_gaussian();
  v /= v.norm();
  return SingleModeDensity(v * v.adjoint());
}

SingleModeDensity random_diag_density(std::int64_t max_n, Rng& rng) {
  const auto w = rng.dirichlet(static_cast<std::size_t>(max_n + 1));
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(max_n + 1, max_n + 1);
  for (std::int64_t k = 0; k <= max_n; ++k) m(k, k) = w[static_cast<std::size_t>(k)];
  return SingleModeDensity(std::move(m));
}

}  // namespace

SeparableEnsemble random_separable(const FockSpace& space, int terms, std::uint64_t seed,
                                   SsrMode mode) {
  if (terms <= 0) throw UsageError("random_separable: need at least one term");
  const std::int64_t cap = space.n_max() / 2;
  Rng rng(seed);
  const auto weights = rng.dirichlet(static_cast<std::size_t>(terms));
  std::vector<SeparableTerm> out;
  out.reserve(static_cast<std::size_t>(terms));
  for (int r = 0; r < terms; ++r) {
    SingleModeDensity ra = mode == SsrMode::local_ssr ? random_diag_density(cap, rng)
                                                      : random_pure_density(cap, rng);
    SingleModeDensity rb = mode == SsrMode::local_ssr ? random_diag_density(cap, rng)
                                                      : random_pure_density(cap, rng);
    out.push_back({weights[static_cast<std::size_t>(r)], std::move(ra), std::move(rb)});
  }
  return SeparableEnsemble(std::move(out), mode);
}

}  // namespace twomode
