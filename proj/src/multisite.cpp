#include "twomode/multisite.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <string>

#include "twomode/rng.hpp"

namespace twomode {

namespace {

const cplx kI{0.0, 1.0};

void check_sites(int sites) {
  if (sites < 1 || sites > kMaxSites) {
    throw UsageError("multisite: site count must be in [1, " + std::to_string(kMaxSites) +
                     "], got " + std::to_string(sites));
  }
}

double sz_eigenvalue(unsigned basis, int sites) {
  return static_cast<double>(std::popcount(basis)) - 0.5 * static_cast<double>(sites);
}

// per-site mean vector (<s_x>, <s_y>, <s_z>) of a 2x2 density matrix
Eigen::Vector3d site_mean(const Eigen::Matrix2cd& rho) {
  return {rho(0, 1).real(), rho(0, 1).imag(), 0.5 * (rho(1, 1).real() - rho(0, 0).real())};
}

}  // namespace

SiteState::SiteState(Eigen::Matrix2cd matrix) : mat_(std::move(matrix)) {
  if (!is_hermitian(mat_, kHermitianTol)) {
    throw ValidationError("SiteState: matrix is not Hermitian within tolerance");
  }
  if (std::abs(mat_.trace().real() - 1.0) > kTraceTol) {
    throw ValidationError("SiteState: trace deviates from 1");
  }
  // 2x2 PSD check via determinant and diagonal
  const double det = (mat_(0, 0) * mat_(1, 1) - mat_(0, 1) * mat_(1, 0)).real();
  if (mat_(0, 0).real() < kPsdFloor || mat_(1, 1).real() < kPsdFloor || det < kPsdFloor) {
    throw ValidationError("SiteState: matrix is not positive semidefinite");
  }
}

SiteState SiteState::pure(const Eigen::Vector2cd& spinor) {
  const double norm = spinor.norm();
  if (norm < 1e-15) throw ValidationError("SiteState::pure: zero spinor");
  const Eigen::Vector2cd v = spinor / norm;
  return SiteState(v * v.adjoint());
}

MultiSiteState MultiSiteState::pure(int sites, Eigen::VectorXcd amplitudes) {
  check_sites(sites);
  if (amplitudes.size() != (std::int64_t{1} << sites)) {
    throw UsageError("MultiSiteState::pure: expected 2^k amplitudes");
  }
  const double norm = amplitudes.norm();
  if (norm < 1e-15) throw ValidationError("MultiSiteState::pure: cannot normalize a zero vector");
  MultiSiteState s;
  s.sites_ = sites;
  s.amps_ = amplitudes / norm;
  return s;
}

MultiSiteState MultiSiteState::ensemble(std::vector<SiteProductTerm> terms) {
  if (terms.empty()) throw UsageError("MultiSiteState::ensemble: need at least one term");
  const int sites = static_cast<int>(terms.front().sites.size());
  check_sites(sites);
  double total = 0.0;
  for (const auto& t : terms) {
    if (static_cast<int>(t.sites.size()) != sites) {
      throw UsageError("MultiSiteState::ensemble: terms disagree on the site count");
    }
    if (t.weight < 0.0) throw ValidationError("MultiSiteState::ensemble: negative weight");
    total += t.weight;
  }
  if (std::abs(total - 1.0) > kWeightTol) {
    throw ValidationError("MultiSiteState::ensemble: weights sum to " + std::to_string(total));
  }
  MultiSiteState s;
  s.sites_ = sites;
  s.terms_ = std::move(terms);
  return s;
}

const Eigen::VectorXcd& MultiSiteState::amplitudes() const {
  if (!is_pure()) throw UsageError("MultiSiteState: ensemble state has no amplitude vector");
  return amps_;
}

const std::vector<SiteProductTerm>& MultiSiteState::terms() const {
  if (is_pure()) throw UsageError("MultiSiteState: pure state has no ensemble terms");
  return terms_;
}

Eigen::MatrixXcd MultiSiteState::to_density() const {
  const std::int64_t dim = std::int64_t{1} << sites_;
  if (is_pure()) return amps_ * amps_.adjoint();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& term : terms_) {
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Ones(1, 1);
    for (int s = sites_ - 1; s >= 0; --s) {
      // site s occupies bit s, so it is the slower-varying factor for larger s
      const Eigen::MatrixXcd& f = term.sites[static_cast<std::size_t>(s)].matrix();
      Eigen::MatrixXcd next(acc.rows() * 2, acc.cols() * 2);
      for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) {
          next.block(r * acc.rows(), c * acc.cols(), acc.rows(), acc.cols()) = f(r, c) * acc;
        }
      }
      acc = std::move(next);
    }
    out += term.weight * acc;
  }
  return out;
}

CollectiveSpinOps collective_spin_ops(int sites) {
  check_sites(sites);
  const std::int64_t dim = std::int64_t{1} << sites;
  CollectiveSpinOps ops{Eigen::MatrixXcd::Zero(dim, dim), Eigen::MatrixXcd::Zero(dim, dim),
                        Eigen::MatrixXcd::Zero(dim, dim)};
  for (std::int64_t i = 0; i < dim; ++i) {
    const auto basis = static_cast<unsigned>(i);
    ops.sz(i, i) = sz_eigenvalue(basis, sites);
    for (int s = 0; s < sites; ++s) {
      const std::int64_t j = i ^ (std::int64_t{1} << s);
      ops.sx(j, i) += 0.5;
      // flipping a->b picks up -i/2, b->a picks up +i/2
      ops.sy(j, i) += (basis >> s & 1u) ? 0.5 * kI : -0.5 * kI;
    }
  }
  return ops;
}

MultiSiteState product_state(const std::vector<SiteState>& sites) {
  return MultiSiteState::ensemble({SiteProductTerm{1.0, sites}});
}

MultiSiteState mix(std::vector<SiteProductTerm> terms) {
  return MultiSiteState::ensemble(std::move(terms));
}

MultiSiteState spinor_product(int sites, const Eigen::Vector2cd& spinor) {
  check_sites(sites);
  const double norm = spinor.norm();
  if (norm < 1e-15) throw ValidationError("spinor_product: zero spinor");
  const Eigen::Vector2cd v = spinor / norm;
  const std::int64_t dim = std::int64_t{1} << sites;
  Eigen::VectorXcd amps(dim);
  for (std::int64_t i = 0; i < dim; ++i) {
    cplx c = 1.0;
    for (int s = 0; s < sites; ++s) c *= v((i >> s) & 1);
    amps(i) = c;
  }
  return MultiSiteState::pure(sites, std::move(amps));
}

MultiSiteState one_axis_twist_multisite(const MultiSiteState& state, double chi_t) {
  if (!state.is_pure()) {
    throw UsageError("one_axis_twist_multisite: input must be a pure state");
  }
  Eigen::VectorXcd amps = state.amplitudes();
  for (std::int64_t i = 0; i < amps.size(); ++i) {
    const double m = sz_eigenvalue(static_cast<unsigned>(i), state.sites());
    amps(i) *= std::exp(-kI * (chi_t * m * m));
  }
  return MultiSiteState::pure(state.sites(), std::move(amps));
}

namespace {

SpinMoments pure_moments(const MultiSiteState& state) {
  const int k = state.sites();
  const auto& c = state.amplitudes();
  const std::int64_t dim = c.size();
  Eigen::VectorXcd ux = Eigen::VectorXcd::Zero(dim);
  Eigen::VectorXcd uy = Eigen::VectorXcd::Zero(dim);
  Eigen::VectorXcd uz = Eigen::VectorXcd::Zero(dim);
  for (std::int64_t i = 0; i < dim; ++i) {
    const auto basis = static_cast<unsigned>(i);
    uz(i) = sz_eigenvalue(basis, k) * c(i);
    for (int s = 0; s < k; ++s) {
      const cplx amp = c(i ^ (std::int64_t{1} << s));
      ux(i) += 0.5 * amp;
      // row i has bit value (basis>>s)&1 at site s; see collective_spin_ops
      uy(i) += ((basis >> s & 1u) ? -0.5 * kI : 0.5 * kI) * amp;
    }
  }
  const std::array<const Eigen::VectorXcd*, 3> u = {&ux, &uy, &uz};
  SpinMoments m;
  for (int i = 0; i < 3; ++i) m.means(i) = c.dot(*u[i]).real();
  for (int i = 0; i < 3; ++i) {
    for (int j = i; j < 3; ++j) {
      const double sym = 0.5 * (u[i]->dot(*u[j]) + u[j]->dot(*u[i])).real();
      m.covariance(i, j) = sym - m.means(i) * m.means(j);
      m.covariance(j, i) = m.covariance(i, j);
    }
  }
  m.mean_number = static_cast<double>(k);
  return m;
}

SpinMoments ensemble_moments(const MultiSiteState& state) {
  // Products factorize: per term, C = k/4 I - sum_s m_s m_s^T since the
  // symmetrized one-site second moments are I/4 exactly for spin-1/2.
  const int k = state.sites();
  Eigen::Vector3d mean = Eigen::Vector3d::Zero();
  Eigen::Matrix3d second = Eigen::Matrix3d::Zero();
  for (const auto& term : state.terms()) {
    Eigen::Vector3d term_mean = Eigen::Vector3d::Zero();
    Eigen::Matrix3d site_outer = Eigen::Matrix3d::Zero();
    for (const auto& site : term.sites) {
      const Eigen::Vector3d s = site_mean(site.matrix());
      term_mean += s;
      site_outer += s * s.transpose();
    }
    Eigen::Matrix3d term_cov =
        0.25 * static_cast<double>(k) * Eigen::Matrix3d::Identity() - site_outer;
    second += term.weight * (term_cov + term_mean * term_mean.transpose());
    mean += term.weight * term_mean;
  }
  SpinMoments m;
  m.means = mean;
  m.covariance = second - mean * mean.transpose();
  m.covariance = 0.5 * (m.covariance + m.covariance.transpose()).eval();
  m.mean_number = static_cast<double>(k);
  return m;
}

}  // namespace

SpinMoments multisite_moments(const MultiSiteState& state) {
  return state.is_pure() ? pure_moments(state) : ensemble_moments(state);
}

WitnessResult xi2_multisite(const MultiSiteState& state, double margin) {
  const SpinMoments m = multisite_moments(state);
  return sorensen_xi2(m, static_cast<double>(state.sites()), margin);
}

WitnessResult xi2_multisite_optimized(const MultiSiteState& state, double margin) {
  const SpinMoments m = multisite_moments(state);
  return sorensen_xi2_optimized(m, static_cast<double>(state.sites()), margin);
}

MultiSiteState random_site_product_mixture(int sites, int terms, std::uint64_t seed) {
  check_sites(sites);
  if (terms <= 0) throw UsageError("random_site_product_mixture: need at least one term");
  Rng rng(seed);
  const auto weights = rng.dirichlet(static_cast<std::size_t>(terms));
  std::vector<SiteProductTerm> out;
  out.reserve(static_cast<std::size_t>(terms));
  for (int r = 0; r < terms; ++r) {
    std::vector<SiteState> factors;
    factors.reserve(static_cast<std::size_t>(sites));
    for (int s = 0; s < sites; ++s) {
      // uniform over the Bloch ball
      Eigen::Vector3d dir{rng.gaussian(), rng.gaussian(), rng.gaussian()};
      if (dir.norm() < 1e-12) dir = Eigen::Vector3d::UnitZ();
      dir.normalize();
      const double radius = std::cbrt(rng.uniform());
      const Eigen::Vector3d b = radius * dir;
      // basis index 0 is spin-down, so the coherence entry is (b_x + i b_y)/2
      Eigen::Matrix2cd rho;
      rho << 0.5 * (1.0 - b(2)), 0.5 * (b(0) + kI * b(1)),
             0.5 * (b(0) - kI * b(1)), 0.5 * (1.0 + b(2));
      factors.emplace_back(rho);
    }
    out.push_back({weights[static_cast<std::size_t>(r)], std::move(factors)});
  }
  return MultiSiteState::ensemble(std::move(out));
}

}  // namespace twomode
