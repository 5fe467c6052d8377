#include "twomode/fock.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <string>

namespace twomode {

namespace {

constexpr std::int64_t kMaxTotal = 4000;

std::string mode_name(Mode m) { return m == Mode::A ? "a" : "b"; }

void require_same_space(const FockSpace& a, const FockSpace& b, const char* what) {
  if (!(a == b)) {
    throw UsageError(std::string(what) + ": operands live on different spaces (n_max " +
                     std::to_string(a.n_max()) + " vs " + std::to_string(b.n_max()) + ")");
  }
}

// falling factorial x(x-1)...(x-k+1)
double falling(std::int64_t x, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= static_cast<double>(x - i);
  return r;
}

}  // namespace

FockSpace::FockSpace(std::int64_t n_max) : n_max_(n_max) {
  if (n_max < 0 || n_max > kMaxTotal) {
    throw UsageError("FockSpace: n_max must be in [0, " + std::to_string(kMaxTotal) +
                     "], got " + std::to_string(n_max));
  }
  dim_ = (n_max + 1) * (n_max + 2) / 2;
}

std::int64_t FockSpace::index_of(std::int64_t n_a, std::int64_t n_b) const {
  if (n_a < 0 || n_b < 0 || n_a + n_b > n_max_) {
    throw UsageError("FockSpace::index_of: occupation (" + std::to_string(n_a) + ", " +
                     std::to_string(n_b) + ") outside truncation n_max = " +
                     std::to_string(n_max_));
  }
  const std::int64_t n = n_a + n_b;
  return sector_begin(n) + n_b;
}

std::pair<std::int64_t, std::int64_t> FockSpace::occupations_of(std::int64_t index) const {
  if (index < 0 || index >= dim_) {
    throw UsageError("FockSpace::occupations_of: index " + std::to_string(index) +
                     " outside [0, " + std::to_string(dim_) + ")");
  }
  // invert index = n(n+1)/2 + n_b
  auto n = static_cast<std::int64_t>((std::sqrt(8.0 * static_cast<double>(index) + 1.0) - 1.0) / 2.0);
  while (sector_begin(n + 1) <= index) ++n;
  while (sector_begin(n) > index) --n;
  const std::int64_t n_b = index - sector_begin(n);
  return {n - n_b, n_b};
}

std::int64_t FockSpace::total_of(std::int64_t index) const {
  const auto [n_a, n_b] = occupations_of(index);
  return n_a + n_b;
}

FockSpace build_space(std::int64_t n_max) { return FockSpace(n_max); }

StateVector::StateVector(FockSpace space, Eigen::VectorXcd amplitudes)
    : space_(space), amps_(std::move(amplitudes)) {
  if (amps_.size() != space_.dim()) {
    throw UsageError("StateVector: amplitude count " + std::to_string(amps_.size()) +
                     " does not match space dimension " + std::to_string(space_.dim()));
  }
  const double norm = amps_.norm();
  if (norm < 1e-15) throw ValidationError("StateVector: cannot normalize a zero vector");
  amps_ /= norm;
}

ModeOperator::ModeOperator(FockSpace space, Eigen::MatrixXcd matrix, std::string label)
    : space_(space), mat_(std::move(matrix)), label_(std::move(label)) {
  if (mat_.rows() != space_.dim() || mat_.cols() != space_.dim()) {
    throw UsageError("ModeOperator: matrix is " + std::to_string(mat_.rows()) + "x" +
                     std::to_string(mat_.cols()) + " but space dimension is " +
                     std::to_string(space_.dim()));
  }
}

bool is_hermitian(const Eigen::MatrixXcd& m, double tol) {
  if (m.rows() != m.cols()) return false;
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol * scale;
}

DensityOperator::DensityOperator(FockSpace space, Eigen::MatrixXcd matrix)
    : space_(space), mat_(std::move(matrix)) {
  if (mat_.rows() != space_.dim() || mat_.cols() != space_.dim()) {
    throw UsageError("DensityOperator: matrix is " + std::to_string(mat_.rows()) + "x" +
                     std::to_string(mat_.cols()) + " but space dimension is " +
                     std::to_string(space_.dim()));
  }
  if (!is_hermitian(mat_, kHermitianTol)) {
    throw ValidationError("DensityOperator: matrix is not Hermitian within tolerance");
  }
  const double tr = mat_.trace().real();
  if (std::abs(tr - 1.0) > kTraceTol) {
    throw ValidationError("DensityOperator: trace deviates from 1 by " +
                          std::to_string(std::abs(tr - 1.0)));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(mat_, Eigen::EigenvaluesOnly);
  const double lambda_min = es.eigenvalues().minCoeff();
  if (lambda_min < kPsdFloor) {
    throw ValidationError("DensityOperator: eigenvalue " + std::to_string(lambda_min) +
                          " below PSD floor");
  }
}

SingleModeDensity::SingleModeDensity(Eigen::MatrixXcd matrix) : mat_(std::move(matrix)) {
  if (mat_.rows() != mat_.cols() || mat_.rows() == 0) {
    throw UsageError("SingleModeDensity: matrix must be square and non-empty");
  }
  if (!is_hermitian(mat_, kHermitianTol)) {
    throw ValidationError("SingleModeDensity: matrix is not Hermitian within tolerance");
  }
  const double tr = mat_.trace().real();
  if (std::abs(tr - 1.0) > kTraceTol) {
    throw ValidationError("SingleModeDensity: trace deviates from 1 by " +
                          std::to_string(std::abs(tr - 1.0)));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(mat_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < kPsdFloor) {
    throw ValidationError("SingleModeDensity: matrix has an eigenvalue below the PSD floor");
  }
}

SectorState::SectorState(std::int64_t total_n, Eigen::VectorXcd amplitudes)
    : total_n_(total_n), amps_(std::move(amplitudes)) {
  if (total_n < 0 || total_n > kMaxTotal) {
    throw UsageError("SectorState: total_n must be in [0, " + std::to_string(kMaxTotal) + "]");
  }
  if (amps_.size() != total_n_ + 1) {
    throw UsageError("SectorState: expected " + std::to_string(total_n_ + 1) +
                     " amplitudes, got " + std::to_string(amps_.size()));
  }
  const double norm = amps_.norm();
  if (norm < 1e-15) throw ValidationError("SectorState: cannot normalize a zero vector");
  amps_ /= norm;
}

ModeOperator annihilator(const FockSpace& space, Mode mode) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(space.dim(), space.dim());
  for (std::int64_t i = 0; i < space.dim(); ++i) {
    const auto [n_a, n_b] = space.occupations_of(i);
    if (mode == Mode::A && n_a > 0) {
      m(space.index_of(n_a - 1, n_b), i) = std::sqrt(static_cast<double>(n_a));
    } else if (mode == Mode::B && n_b > 0) {
      m(space.index_of(n_a, n_b - 1), i) = std::sqrt(static_cast<double>(n_b));
    }
  }
  return ModeOperator(space, std::move(m), mode_name(mode));
}

ModeOperator adjoint(const ModeOperator& op) {
  return ModeOperator(op.space(), op.matrix().adjoint(), op.label().empty() ? "" : op.label() + "^dag");
}

ModeOperator compose(const ModeOperator& lhs, const ModeOperator& rhs) {
  require_same_space(lhs.space(), rhs.space(), "compose");
  return ModeOperator(lhs.space(), lhs.matrix() * rhs.matrix());
}

ModeOperator add(const ModeOperator& lhs, const ModeOperator& rhs) {
  require_same_space(lhs.space(), rhs.space(), "add");
  return ModeOperator(lhs.space(), lhs.matrix() + rhs.matrix());
}

ModeOperator scale(cplx factor, const ModeOperator& op) {
  return ModeOperator(op.space(), factor * op.matrix());
}

ModeOperator number_operator(const FockSpace& space, Mode mode) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(space.dim(), space.dim());
  for (std::int64_t i = 0; i < space.dim(); ++i) {
    const auto [n_a, n_b] = space.occupations_of(i);
    m(i, i) = static_cast<double>(mode == Mode::A ? n_a : n_b);
  }
  return ModeOperator(space, std::move(m), std::string("n_") + mode_name(mode));
}

ModeOperator total_number_operator(const FockSpace& space) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(space.dim(), space.dim());
  for (std::int64_t i = 0; i < space.dim(); ++i) {
    m(i, i) = static_cast<double>(space.total_of(i));
  }
  return ModeOperator(space, std::move(m), "n_total");
}

cplx expectation(const ModeOperator& op, const DensityOperator& rho) {
  require_same_space(op.space(), rho.space(), "expectation");
  // tr(rho * op) without forming the product
  return (rho.matrix().cwiseProduct(op.matrix().transpose())).sum();
}

cplx expectation(const ModeOperator& op, const StateVector& psi) {
  require_same_space(op.space(), psi.space(), "expectation");
  return psi.amplitudes().dot(op.matrix() * psi.amplitudes());
}

namespace {

double clip_real(cplx value, const ModeOperator& op, double scale) {
  if (!is_hermitian(op.matrix())) {
    throw UsageError("real_expectation: operator is not Hermitian");
  }
  if (std::abs(value.imag()) > 1e-10 * std::max(1.0, scale)) {
    throw ValidationError("real_expectation: imaginary residue " +
                          std::to_string(value.imag()) + " exceeds tolerance");
  }
  return value.real();
}

}  // namespace

double real_expectation(const ModeOperator& op, const DensityOperator& rho) {
  return clip_real(expectation(op, rho), op, op.matrix().cwiseAbs().maxCoeff());
}

double real_expectation(const ModeOperator& op, const StateVector& psi) {
  return clip_real(expectation(op, psi), op, op.matrix().cwiseAbs().maxCoeff());
}

namespace {

double variance_impl(const ModeOperator& op, const Eigen::VectorXcd* psi,
                     const DensityOperator* rho) {
  if (!is_hermitian(op.matrix())) {
    throw UsageError("variance: operator is not Hermitian");
  }
  if (psi != nullptr) {
    const Eigen::VectorXcd u = op.matrix() * (*psi);
    const double mean = psi->dot(u).real();
    return u.squaredNorm() - mean * mean;
  }
  const Eigen::MatrixXcd t = rho->matrix() * op.matrix();
  const double mean = t.trace().real();
  const double second = (t.cwiseProduct(op.matrix().transpose())).sum().real();
  return second - mean * mean;
}

}  // namespace

double variance(const ModeOperator& op, const DensityOperator& rho) {
  require_same_space(op.space(), rho.space(), "variance");
  return variance_impl(op, nullptr, &rho);
}

double variance(const ModeOperator& op, const StateVector& psi) {
  require_same_space(op.space(), psi.space(), "variance");
  return variance_impl(op, &psi.amplitudes(), nullptr);
}

DensityOperator make_density(const StateVector& psi) {
  const auto& c = psi.amplitudes();
  return DensityOperator(psi.space(), c * c.adjoint());
}

SingleModeDensity partial_trace(const DensityOperator& rho, Mode keep) {
  const auto& space = rho.space();
  const std::int64_t n_max = space.n_max();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n_max + 1, n_max + 1);
  for (std::int64_t m = 0; m <= n_max; ++m) {
    for (std::int64_t mp = 0; mp <= n_max; ++mp) {
      cplx acc = 0.0;
      const std::int64_t other_cap = n_max - std::max(m, mp);
      for (std::int64_t k = 0; k <= other_cap; ++k) {
        const std::int64_t row = keep == Mode::A ? space.index_of(m, k) : space.index_of(k, m);
        const std::int64_t col = keep == Mode::A ? space.index_of(mp, k) : space.index_of(k, mp);
        acc += rho.matrix()(row, col);
      }
      out(m, mp) = acc;
    }
  }
  return SingleModeDensity(std::move(out));
}

StateVector embed_sector(const FockSpace& space, const SectorState& s) {
  if (s.total_n() > space.n_max()) {
    throw UsageError("embed_sector: sector total " + std::to_string(s.total_n()) +
                     " exceeds space n_max " + std::to_string(space.n_max()));
  }
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(space.dim());
  const std::int64_t base = space.sector_begin(s.total_n());
  amps.segment(base, s.total_n() + 1) = s.amplitudes();
  return StateVector(space, std::move(amps));
}

SectorState extract_sector(const StateVector& psi) {
  const auto& space = psi.space();
  const auto& c = psi.amplitudes();
  std::int64_t sector = -1;
  for (std::int64_t i = 0; i < space.dim(); ++i) {
    if (std::abs(c(i)) <= 1e-14) continue;
    const std::int64_t n = space.total_of(i);
    if (sector < 0) sector = n;
    if (n != sector) {
      throw UsageError("extract_sector: state has support on more than one total-number sector");
    }
  }
  if (sector < 0) sector = 0;
  return SectorState(sector, c.segment(space.sector_begin(sector), sector + 1));
}

cplx correlation_moment(const DensityOperator& rho, int m, int n) {
  if (m < 0 || n < 0) throw UsageError("correlation_moment: powers must be non-negative");
  const auto& space = rho.space();
  const Eigen::MatrixXcd a = annihilator(space, Mode::A).matrix();
  const Eigen::MatrixXcd bdag = annihilator(space, Mode::B).matrix().adjoint();
  Eigen::MatrixXcd op = Eigen::MatrixXcd::Identity(space.dim(), space.dim());
  for (int i = 0; i < m; ++i) op = a * op;      // lower first
  for (int i = 0; i < n; ++i) op = bdag * op;   // then raise; order is exact under truncation
  return (rho.matrix().cwiseProduct(op.transpose())).sum();
}

cplx correlation_moment(const SectorState& s, int m, int n) {
  if (m < 0 || n < 0) throw UsageError("correlation_moment: powers must be non-negative");
  if (m != n) return 0.0;  // the operator leaves the sector
  const std::int64_t total = s.total_n();
  const auto& c = s.amplitudes();
  cplx acc = 0.0;
  for (std::int64_t j = 0; j + m <= total; ++j) {
    // a^m pulls sqrt of a falling factorial from n_a = total - j,
    // (b^dag)^m a rising one from n_b = j
    double w = 1.0;
    for (int i = 0; i < m; ++i) {
      w *= static_cast<double>(total - j - i) * static_cast<double>(j + 1 + i);
    }
    acc += std::conj(c(j + m)) * c(j) * std::sqrt(w);
  }
  return acc;
}

double correlation_threshold(const DensityOperator& rho, int m, int n) {
  if (m < 0 || n < 0) throw UsageError("correlation_threshold: powers must be non-negative");
  const auto& space = rho.space();
  double acc = 0.0;
  for (std::int64_t i = 0; i < space.dim(); ++i) {
    const auto [n_a, n_b] = space.occupations_of(i);
    acc += rho.matrix()(i, i).real() * falling(n_a, m) * falling(n_b, n);
  }
  return acc;
}

double correlation_threshold(const SectorState& s, int m, int n) {
  if (m < 0 || n < 0) throw UsageError("correlation_threshold: powers must be non-negative");
  const std::int64_t total = s.total_n();
  const auto& c = s.amplitudes();
  double acc = 0.0;
  for (std::int64_t j = 0; j <= total; ++j) {
    acc += std::norm(c(j)) * falling(total - j, m) * falling(j, n);
  }
  return acc;
}

}  // namespace twomode
